#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcg/eval/tournament.hpp"
#include "mcg/heuristics/value_net.hpp"

namespace mcg {

// Parsed agent description (docs/config_schema.md). `heuristic_model` backs
// mcts augmentations and the greedy value agent; `model` is the policy file
// for the greedy policy agent.
struct AgentSpec {
  std::string type;  // random | mcts | greedy_value | greedy_policy
  std::string name;  // display; defaulted from type/params
  uint64_t seed = 0;
  int iterations = 1000;
  double exploration_c = 1.4142135623730951;
  AugmentConfig augment;
  std::string model;  // resolved to an absolute-ish path at parse time
  int window_len = 10;
};

AgentSpec parse_agent_spec(const nlohmann::json& j, const std::string& base_dir);

// Loads model files once and hands out thread-safe factories; the returned
// factories keep their models alive via shared ownership.
class AgentBuilder {
 public:
  AgentBuilder(const Rules& rules, const Encoder& encoder)
      : rules_(&rules), encoder_(&encoder) {}

  AgentEntry build(const AgentSpec& spec);

 private:
  struct LoadedModel {
    std::shared_ptr<nn::Network> net;
    std::shared_ptr<ValueNetEvaluator> evaluator;  // dense value models only
  };
  const LoadedModel& model(const std::string& path, bool with_evaluator);

  const Rules* rules_;
  const Encoder* encoder_;
  std::map<std::string, LoadedModel> models_;
};

// Top-level experiment configuration file (single JSON document).
struct ExperimentConfig {
  std::string config_dir;   // directory of the config file (path resolution)
  std::string rules_file;
  Rules rules;
  std::vector<std::vector<uint8_t>> train_decks;
  std::vector<std::vector<uint8_t>> test_decks;
  uint64_t seed = 1;
  int workers = 1;
  std::string output_dir;
  uint64_t config_hash = 0;  // FNV-1a of the raw config bytes
  nlohmann::json raw;
};

ExperimentConfig load_experiment_config(const std::string& path);

// Deck list file: {"train": [[30 ids]...], "test": [[30 ids]...]}.
void load_deck_lists(const std::string& path,
                     std::vector<std::vector<uint8_t>>& train,
                     std::vector<std::vector<uint8_t>>& test);

}  // namespace mcg
