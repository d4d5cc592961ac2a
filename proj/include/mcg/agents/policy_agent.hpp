#pragma once

#include "mcg/agents/agent.hpp"
#include "mcg/features/encoder.hpp"
#include "mcg/nn/network.hpp"

namespace mcg {

// Greedy agent over a sequence policy network: keeps the running history of
// (state, action) pairs via observe(), feeds the K-step window through the
// network at each decision and plays the highest-probability legal action.
// The raw network argmax can land on an illegal action; those are masked
// out (and counted, see raw_argmax_illegal()).
class GreedyPolicyAgent : public Agent {
 public:
  GreedyPolicyAgent(const Rules& rules, const Encoder& encoder,
                    const nn::Network& policy, int window_len = 10,
                    std::string name = "greedy_policy");

  std::string name() const override { return name_; }
  void reset(uint64_t game_seed, int seat) override;
  Action choose(const GameState& s) override;
  void observe(const GameState& before, Action a) override;

  long decisions() const { return decisions_; }
  long raw_argmax_illegal() const { return raw_argmax_illegal_; }

 private:
  const Rules* rules_;
  const Encoder* encoder_;
  const nn::Network* policy_;
  int window_len_;
  int state_width_;
  int row_width_;
  std::string name_;

  int seat_ = 0;
  std::vector<float> history_rows_;   // encoded state per observed step
  std::vector<uint8_t> history_acts_;
  long decisions_ = 0;
  long raw_argmax_illegal_ = 0;
};

}  // namespace mcg
