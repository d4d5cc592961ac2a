#include "mcg/eval/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcg/agents/policy_agent.hpp"
#include "mcg/nn/serialize.hpp"
#include "mcg/features/dataset.hpp"

namespace mcg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

AgentSpec parse_agent_spec(const json& j, const std::string& base_dir) {
  AgentSpec spec;
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("agent spec needs a \"type\"");
  spec.type = j.at("type").get<std::string>();
  spec.seed = j.value("seed", 0ULL);
  spec.iterations = j.value("iterations", 1000);
  spec.exploration_c = j.value("exploration_c", spec.exploration_c);
  spec.window_len = j.value("window_len", 10);
  if (j.contains("model"))
    spec.model = resolve(base_dir, j.at("model").get<std::string>());
  if (j.contains("heuristic_model"))
    spec.model = resolve(base_dir, j.at("heuristic_model").get<std::string>());

  if (j.contains("augment")) {
    const json& a = j.at("augment");
    if (a.contains("tree_policy_bias_w"))
      spec.augment.tree_policy_bias_w = a.at("tree_policy_bias_w").get<double>();
    spec.augment.move_ordering = a.value("move_ordering", false);
    if (a.contains("simulation_bias")) {
      const json& sb = a.at("simulation_bias");
      SimulationBias bias;
      std::string mode = sb.value("mode", "epsilon_greedy");
      if (mode == "epsilon_greedy") {
        bias.mode = SimBiasMode::EpsilonGreedy;
        bias.epsilon = sb.value("epsilon", 0.7);
        if (bias.epsilon < 0 || bias.epsilon > 1)
          throw ConfigError("epsilon must be in [0,1]");
      } else if (mode == "boltzmann") {
        bias.mode = SimBiasMode::Boltzmann;
        bias.temperature = sb.value("temperature", 0.5);
        if (bias.temperature <= 0) throw ConfigError("temperature must be > 0");
      } else {
        throw ConfigError("unknown simulation bias mode: " + mode);
      }
      spec.augment.simulation_bias = bias;
    }
    if (a.contains("early_cutoff_p")) {
      double p = a.at("early_cutoff_p").get<double>();
      if (p < 0 || p > 1) throw ConfigError("early_cutoff_p must be in [0,1]");
      spec.augment.early_cutoff_p = p;
    }
  }

  if (j.contains("name")) {
    spec.name = j.at("name").get<std::string>();
  } else if (spec.type == "mcts") {
    spec.name = "mcts" + std::to_string(spec.iterations);
    if (spec.augment.any()) spec.name += "+aug";
  } else {
    spec.name = spec.type;
  }

  if (spec.type != "random" && spec.type != "mcts" && spec.type != "greedy_value" &&
      spec.type != "greedy_policy")
    throw ConfigError("unknown agent type: " + spec.type);
  if ((spec.type == "greedy_value" || spec.type == "greedy_policy") && spec.model.empty())
    throw ConfigError(spec.type + " agent needs a \"model\"");
  if (spec.type == "mcts" && spec.augment.any() && spec.model.empty())
    throw ConfigError("augmented mcts needs a \"heuristic_model\"");
  return spec;
}

const AgentBuilder::LoadedModel& AgentBuilder::model(const std::string& path,
                                                     bool with_evaluator) {
  auto it = models_.find(path);
  if (it == models_.end()) {
    nn::LoadedNetwork loaded = nn::load_network(path);
    LoadedModel lm;
    lm.net = std::make_shared<nn::Network>(std::move(loaded.net));
    it = models_.emplace(path, std::move(lm)).first;
  }
  if (with_evaluator && !it->second.evaluator)
    it->second.evaluator =
        std::make_shared<ValueNetEvaluator>(*rules_, *encoder_, *it->second.net);
  return it->second;
}

AgentEntry AgentBuilder::build(const AgentSpec& spec) {
  const Rules& rules = *rules_;
  const Encoder& encoder = *encoder_;
  if (spec.type == "random") {
    uint64_t seed = spec.seed;
    return {spec.name,
            [&rules, seed]() { return std::make_unique<RandomAgent>(rules, seed); }};
  }
  if (spec.type == "mcts") {
    MctsConfig cfg;
    cfg.iterations = spec.iterations;
    cfg.exploration_c = spec.exploration_c;
    cfg.seed = spec.seed;
    cfg.augment = spec.augment;
    std::shared_ptr<ValueNetEvaluator> heuristic;
    if (!spec.model.empty()) heuristic = model(spec.model, true).evaluator;
    std::string name = spec.name;
    return {spec.name, [&rules, cfg, heuristic, name]() {
              return std::make_unique<MctsAgent>(rules, cfg, heuristic.get(), name);
            }};
  }
  if (spec.type == "greedy_value") {
    auto heuristic = model(spec.model, true).evaluator;
    std::string name = spec.name;
    return {spec.name, [&rules, heuristic, name]() {
              return std::make_unique<GreedyValueAgent>(rules, *heuristic, name);
            }};
  }
  // greedy_policy
  auto net = model(spec.model, false).net;
  std::string name = spec.name;
  int window = spec.window_len;
  return {spec.name, [&rules, &encoder, net, name, window]() {
            return std::make_unique<GreedyPolicyAgent>(rules, encoder, *net, window,
                                                       name);
          }};
}

void load_deck_lists(const std::string& path, std::vector<std::vector<uint8_t>>& train,
                     std::vector<std::vector<uint8_t>>& test) {
  json j = json::parse(slurp(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed deck file: " + path);
  auto read = [&](const char* key, std::vector<std::vector<uint8_t>>& out) {
    if (!j.contains(key)) return;
    for (const json& deck : j.at(key)) {
      std::vector<uint8_t> ids;
      for (const json& id : deck) ids.push_back(id.get<uint8_t>());
      if (ids.size() != kDeckSize)
        throw ConfigError(std::string(key) + " deck in " + path +
                          " does not have 30 cards");
      out.push_back(std::move(ids));
    }
  };
  read("train", train);
  read("test", test);
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::string text = slurp(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON config: " + path);

  ExperimentConfig cfg;
  cfg.config_dir = fs::path(path).parent_path().string();
  if (cfg.config_dir.empty()) cfg.config_dir = ".";
  cfg.config_hash = fnv1a64(text);
  cfg.raw = j;

  cfg.rules_file = resolve(cfg.config_dir, j.value("rules_file", std::string()));
  if (cfg.rules_file.empty()) throw ConfigError(path + ": \"rules_file\" is required");
  cfg.rules = load_rules(cfg.rules_file);

  std::string decks_file = resolve(cfg.config_dir, j.value("decks_file", std::string()));
  if (decks_file.empty()) throw ConfigError(path + ": \"decks_file\" is required");
  load_deck_lists(decks_file, cfg.train_decks, cfg.test_decks);
  if (cfg.train_decks.empty()) throw ConfigError(decks_file + ": no train decks");

  if (!j.contains("seed")) throw ConfigError(path + ": \"seed\" is required");
  cfg.seed = j.at("seed").get<uint64_t>();
  cfg.workers = j.value("workers", 1);
  cfg.output_dir = j.value("output_dir", std::string("out"));

  for (const auto& deck : cfg.train_decks)
    for (uint8_t id : deck)
      if (id >= kPoolSize) throw ConfigError("deck card id out of range");
  for (const auto& deck : cfg.test_decks)
    for (uint8_t id : deck)
      if (id >= kPoolSize) throw ConfigError("deck card id out of range");
  return cfg;
}

}  // namespace mcg
