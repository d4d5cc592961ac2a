#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mcg/agents/game_traits.hpp"
#include "mcg/agents/mcts.hpp"
#include "mcg/heuristics/heuristics.hpp"

namespace mcg {

// A player. The match runner calls reset() before each game and observe()
// after every atomic action of either seat (policy agents rebuild their
// input window from these callbacks; most agents ignore them).
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual void reset(uint64_t game_seed, int seat) {}
  virtual Action choose(const GameState& s) = 0;
  virtual void observe(const GameState& before, Action a) {}
};

class RandomAgent : public Agent {
 public:
  RandomAgent(const Rules& rules, uint64_t seed) : rules_(&rules), seed_(seed) {}
  std::string name() const override { return "random"; }
  void reset(uint64_t game_seed, int seat) override {
    rng_ = SplitMix64(mix64(seed_) ^ derive_seed(game_seed, static_cast<uint64_t>(seat)));
  }
  Action choose(const GameState& s) override;

 private:
  const Rules* rules_;
  uint64_t seed_;
  SplitMix64 rng_;
};

class MctsAgent : public Agent {
 public:
  MctsAgent(const Rules& rules, const MctsConfig& cfg,
            const StateEvaluator<GameState>* heuristic = nullptr,
            std::string name = "mcts")
      : name_(std::move(name)), cfg_(cfg), search_(CardGame(rules), cfg, heuristic) {}
  std::string name() const override { return name_; }
  void reset(uint64_t game_seed, int seat) override {
    rng_ = SplitMix64(mix64(cfg_.seed) ^ derive_seed(game_seed, static_cast<uint64_t>(seat)));
  }
  Action choose(const GameState& s) override { return search_.choose(s, rng_); }

  const MctsSearch<CardGame>& search() const { return search_; }

 private:
  std::string name_;
  MctsConfig cfg_;
  MctsSearch<CardGame> search_;
  SplitMix64 rng_;
};

// Evaluates every successor with the value heuristic and takes the argmax
// from the mover's point of view; ties break on the lowest action index.
template <GameTraits G>
typename G::Action greedy_value_choose(const G& g, const typename G::State& s,
                                       const StateEvaluator<typename G::State>& h) {
  StaticVector<typename G::Action, G::kMaxActions> actions;
  g.legal(s, actions);
  if (actions.empty()) throw EmptyNodeError("greedy choice on a state with no actions");
  double values[G::kMaxActions];
  evaluate_actions(g, h, s, std::span(actions.begin(), actions.end()), values);
  int best = 0;
  for (int i = 1; i < actions.size(); ++i) {
    bool better = values[i] > values[best] ||
                  (values[i] == values[best] &&
                   G::index_of(actions[i]) < G::index_of(actions[best]));
    if (better) best = i;
  }
  return actions[best];
}

class GreedyValueAgent : public Agent {
 public:
  GreedyValueAgent(const Rules& rules, const StateEvaluator<GameState>& h,
                   std::string name = "greedy_value")
      : game_(rules), h_(&h), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Action choose(const GameState& s) override {
    return greedy_value_choose(game_, s, *h_);
  }

 private:
  CardGame game_;
  const StateEvaluator<GameState>* h_;
  std::string name_;
};

// One finished match. `actions` is the atomic trace (kept only on request);
// everything is reproducible from (decks, seed, the two agents).
struct GameRecord {
  uint64_t game_seed = 0;
  GameState initial;
  std::vector<Action> actions;
  Outcome outcome = Outcome::InProgress;
  uint16_t final_turn = 0;
};

GameRecord play_game(const Rules& rules, Agent& player0, Agent& player1,
                     std::span<const uint8_t> deck0, std::span<const uint8_t> deck1,
                     uint64_t game_seed, bool keep_trace);

}  // namespace mcg
