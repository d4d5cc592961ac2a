// Command-line front end: dataset generation, model training and the
// experiment runners, all driven by one JSON config file.
//
//   mcg generate  --config <file> [--out DIR] [--workers N] [--seed S]
//   mcg train     --config <file> [...]
//   mcg experiment --config <file> --which generality|curriculum|tournament
//
// Exit codes: 0 ok, 1 runtime failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "mcg/eval/config.hpp"
#include "mcg/eval/experiments.hpp"
#include "mcg/features/dataset.hpp"

namespace fs = std::filesystem;
using namespace mcg;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<uint64_t> seed;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
  ExperimentConfig cfg = load_experiment_config(args.config_path);
  if (args.out_dir) cfg.output_dir = *args.out_dir;
  if (args.workers) cfg.workers = *args.workers;
  if (args.seed) cfg.seed = *args.seed;
  fs::create_directories(cfg.output_dir);
  return cfg;
}

const json& section(const ExperimentConfig& cfg, const char* key) {
  if (!cfg.raw.contains(key))
    throw ConfigError(std::string("config is missing the \"") + key + "\" section");
  return cfg.raw.at(key);
}

const std::vector<std::vector<uint8_t>>& pick_decks(const ExperimentConfig& cfg,
                                                    const std::string& which) {
  if (which == "train") return cfg.train_decks;
  if (which == "test") {
    if (cfg.test_decks.empty()) throw ConfigError("config has no test decks");
    return cfg.test_decks;
  }
  throw ConfigError("deck_list must be \"train\" or \"test\", got: " + which);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

nn::TrainConfig parse_train_config(const json& j, nn::Loss loss, uint64_t default_seed) {
  nn::TrainConfig tc;
  tc.loss = loss;
  std::string opt = j.value("optimizer", "adam");
  if (opt == "adam") tc.optimizer = nn::TrainConfig::Optimizer::Adam;
  else if (opt == "sgd") tc.optimizer = nn::TrainConfig::Optimizer::SGD;
  else throw ConfigError("unknown optimizer: " + opt);
  tc.learning_rate = j.value("learning_rate", 1e-3);
  tc.batch_size = j.value("batch_size", 64);
  tc.epochs = j.value("epochs", 5);
  tc.seed = j.value("train_seed", default_seed);
  return tc;
}

void write_history_csv(const std::string& path, const std::vector<double>& losses) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << "epoch,loss\n";
  for (size_t i = 0; i < losses.size(); ++i) out << i + 1 << ',' << losses[i] << '\n';
}

// ---- generate -------------------------------------------------------------

int cmd_generate(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  const json& g = section(cfg, "generate");
  Encoder encoder(cfg.rules);
  AgentBuilder builder(cfg.rules, encoder);

  AgentSpec spec0 = parse_agent_spec(g.at("agent0"), cfg.config_dir);
  AgentSpec spec1 = parse_agent_spec(g.at("agent1"), cfg.config_dir);
  AgentEntry agent0 = builder.build(spec0);
  AgentEntry agent1 = builder.build(spec1);

  GenerateConfig gen;
  gen.n_games = g.value("n_games", 100);
  gen.seed = g.value("seed", cfg.seed);
  gen.workers = cfg.workers;
  gen.decks = pick_decks(cfg, g.value("deck_list", "train"));
  std::string mode = g.value("mode", "states");
  if (mode == "states") gen.mode = LogMode::States;
  else if (mode == "sequences") gen.mode = LogMode::Sequences;
  else if (mode == "both") gen.mode = LogMode::Both;
  else throw ConfigError("generate.mode must be states|sequences|both");

  std::vector<std::string> formats = {"csv"};
  if (g.contains("formats")) formats = g.at("formats").get<std::vector<std::string>>();
  bool want_jsonl = false, want_csv = false;
  for (const auto& f : formats) {
    if (f == "jsonl") want_jsonl = true;
    else if (f == "csv") want_csv = true;
    else throw ConfigError("unknown dataset format: " + f);
  }
  gen.keep_raw_states = want_jsonl && gen.mode != LogMode::Sequences;

  GenerateResult result =
      generate_games(cfg.rules, encoder, agent0.make, agent1.make, gen);

  std::string prefix = g.value("out_prefix", "dataset");
  ManifestInfo info;
  info.rules_version = cfg.rules.rules_version;
  info.encoding_version = Encoder::kVersion;
  info.seed = gen.seed;
  info.config_hash = cfg.config_hash;
  info.agent0 = agent0.name;
  info.agent1 = agent1.name;
  info.n_games = result.n_games;
  info.n_state_records = result.states.size();
  info.n_trace_records = static_cast<long>(result.traces.size());
  info.deck_count = static_cast<int>(gen.decks.size());
  info.p0_wins = result.p0_wins;
  info.agent0_wins = result.agent0_wins;

  if (gen.mode != LogMode::Sequences) {
    if (want_csv) {
      std::string f = prefix + "_states.csv";
      write_states_csv(out_path(cfg, f), result.states, encoder);
      info.files.push_back({"states_csv", f});
    }
    if (want_jsonl) {
      std::string f = prefix + "_states.jsonl";
      write_states_jsonl(out_path(cfg, f), cfg.rules, result.states, result.raw_states);
      info.files.push_back({"states_jsonl", f});
    }
  }
  if (gen.mode != LogMode::States) {
    std::string f = prefix + "_traces.jsonl";
    write_traces_jsonl(out_path(cfg, f), cfg.rules, result.traces);
    info.files.push_back({"traces_jsonl", f});
  }
  write_manifest(out_path(cfg, prefix + "_manifest.json"), info);

  std::printf("generated %d games (%ld actions, %ld state records)\n", result.n_games,
              result.n_actions, result.states.size());
  std::printf("  %s vs %s, decks=%d, seed=%llu\n", agent0.name.c_str(),
              agent1.name.c_str(), info.deck_count,
              static_cast<unsigned long long>(gen.seed));
  std::printf("  first-player win rate %.2f%%, %s win rate %.2f%%\n",
              100.0 * result.p0_wins / result.n_games, agent0.name.c_str(),
              100.0 * result.agent0_wins / result.n_games);
  std::printf("  manifest: %s\n", out_path(cfg, prefix + "_manifest.json").c_str());
  return 0;
}

// ---- train ------------------------------------------------------------------

int cmd_train(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  const json& t = section(cfg, "train");
  Encoder encoder(cfg.rules);

  std::string model_kind = t.value("model", "value");
  std::string dataset = t.value("dataset", std::string());
  if (dataset.empty()) throw ConfigError("train.dataset is required");
  if (!fs::path(dataset).is_absolute() && !fs::exists(dataset))
    dataset = (fs::path(cfg.config_dir) / dataset).string();
  std::string out_model = out_path(cfg, t.value("out_model", model_kind + ".mcgnet"));
  std::string out_history =
      out_path(cfg, t.value("out_history", model_kind + "_history.csv"));
  double dropout = t.value("dropout", 0.0);
  uint64_t init_seed = t.value("init_seed", cfg.seed);

  std::vector<double> losses;
  if (model_kind == "value") {
    StateDataset data = read_states_csv(dataset);
    if (data.width != encoder.width())
      throw ShapeMismatchError("dataset width " + std::to_string(data.width) +
                               " does not match encoder width " +
                               std::to_string(encoder.width()));
    std::vector<int> hidden = t.value("hidden", std::vector<int>{128, 64});
    nn::Network net = make_value_network(encoder, hidden, dropout, init_seed);
    nn::TrainConfig tc = parse_train_config(t, nn::Loss::BinaryCrossEntropy, cfg.seed);
    losses = train_value_network(net, data, tc).epoch_loss;

    nlohmann::ordered_json meta;
    meta["model"] = "value";
    meta["hidden"] = hidden;
    meta["epoch_loss"] = losses;
    meta["rules_version"] = cfg.rules.rules_version;
    meta["encoding_version"] = Encoder::kVersion;
    nn::save_network(net, out_model, meta.dump());
  } else if (model_kind == "policy") {
    std::vector<GameLog> traces = read_traces_jsonl(dataset);
    int window = t.value("window_len", 10);
    SequenceDataset data(cfg.rules, encoder, window);
    for (const GameLog& log : traces) data.add_game(log);
    std::vector<int> hidden = t.value("recurrent_hidden", std::vector<int>{64, 64});
    nn::Network net = make_policy_network(encoder, hidden, dropout, init_seed);
    nn::TrainConfig tc =
        parse_train_config(t, nn::Loss::CategoricalCrossEntropy, cfg.seed);
    losses = nn::train(net, data, tc).epoch_loss;

    nlohmann::ordered_json meta;
    meta["model"] = "policy";
    meta["recurrent_hidden"] = hidden;
    meta["window_len"] = window;
    meta["epoch_loss"] = losses;
    meta["rules_version"] = cfg.rules.rules_version;
    meta["encoding_version"] = Encoder::kVersion;
    nn::save_network(net, out_model, meta.dump());
  } else {
    throw ConfigError("train.model must be \"value\" or \"policy\"");
  }

  write_history_csv(out_history, losses);
  std::printf("trained %s model (%zu epochs)\n", model_kind.c_str(), losses.size());
  if (!losses.empty()) std::printf("  final training loss %.6f\n", losses.back());
  std::printf("  model: %s\n  history: %s\n", out_model.c_str(), out_history.c_str());
  return 0;
}

// ---- experiment -------------------------------------------------------------

int experiment_tournament(const ExperimentConfig& cfg) {
  const json& t = section(cfg, "experiment").at("tournament");
  Encoder encoder(cfg.rules);
  AgentBuilder builder(cfg.rules, encoder);
  std::vector<AgentEntry> agents;
  for (const json& a : t.at("agents"))
    agents.push_back(builder.build(parse_agent_spec(a, cfg.config_dir)));

  MatchConfig match;
  match.games = t.value("games_per_pairing", 100);
  match.seed = t.value("seed", cfg.seed);
  match.workers = cfg.workers;
  match.decks = pick_decks(cfg, t.value("deck_list", "train"));

  TournamentReport report = run_tournament(cfg.rules, agents, match);
  write_tournament_jsonl(out_path(cfg, "tournament_report.jsonl"), report);
  std::fputs(tournament_summary(report).c_str(), stdout);
  std::printf("report: %s\n", out_path(cfg, "tournament_report.jsonl").c_str());
  return 0;
}

int experiment_generality(const ExperimentConfig& cfg) {
  const json& g = section(cfg, "experiment").at("generality");
  Encoder encoder(cfg.rules);

  auto generate_set = [&](const std::vector<std::vector<uint8_t>>& decks, int games,
                          uint64_t seed, int mcts_iterations) {
    GenerateConfig gen;
    gen.n_games = games;
    gen.seed = seed;
    gen.workers = cfg.workers;
    gen.decks = decks;
    AgentFactory make;
    if (mcts_iterations > 0) {
      MctsConfig mc;
      mc.iterations = mcts_iterations;
      mc.seed = seed;
      make = [&rules = cfg.rules, mc]() { return std::make_unique<MctsAgent>(rules, mc); };
    } else {
      make = [&rules = cfg.rules, seed]() {
        return std::make_unique<RandomAgent>(rules, seed);
      };
    }
    return generate_games(cfg.rules, encoder, make, make, gen).states;
  };

  // The value model: either a provided file or trained here on random games.
  nn::Network net = [&]() {
    if (g.contains("value_model")) {
      std::string path = g.at("value_model").get<std::string>();
      if (!fs::path(path).is_absolute() && !fs::exists(path))
        path = (fs::path(cfg.config_dir) / path).string();
      return nn::load_network(path).net;
    }
    int train_games = g.value("train_games", 300);
    StateDataset train_set =
        generate_set(cfg.train_decks, train_games, derive_seed(cfg.seed, 11), 0);
    std::vector<int> hidden = g.value("hidden", std::vector<int>{128, 64});
    nn::Network value =
        make_value_network(encoder, hidden, g.value("dropout", 0.0), cfg.seed);
    nn::TrainConfig tc = parse_train_config(g, nn::Loss::BinaryCrossEntropy, cfg.seed);
    train_value_network(value, train_set, tc);
    std::printf("trained value model on %ld states from %d random games\n",
                train_set.size(), train_games);
    return value;
  }();
  if (net.input_width() != encoder.width())
    throw ShapeMismatchError("value model width does not match the encoder");

  StateDataset random_test =
      generate_set(cfg.test_decks, g.value("test_random_games", 150),
                   derive_seed(cfg.seed, 12), 0);
  StateDataset mcts_test =
      generate_set(cfg.test_decks, g.value("test_mcts_games", 60),
                   derive_seed(cfg.seed, 13), g.value("mcts_iterations", 1000));

  GeneralityResult res = generality_compare(net, random_test, mcts_test);
  write_per_turn_csv(out_path(cfg, "generality_per_turn.csv"), res);

  nlohmann::ordered_json j;
  j["auc_random_test"] = res.random_test.overall_auc;
  j["auc_mcts_test"] = res.mcts_test.overall_auc;
  j["delta"] = res.delta;
  j["n_random_test"] = res.random_test.n_pos + res.random_test.n_neg;
  j["n_mcts_test"] = res.mcts_test.n_pos + res.mcts_test.n_neg;
  j["seed"] = cfg.seed;
  std::ofstream out(out_path(cfg, "generality_report.json"), std::ios::trunc);
  out << j.dump(2) << '\n';

  std::printf("AUC on random-agent test games: %.4f (n=%ld)\n",
              res.random_test.overall_auc,
              res.random_test.n_pos + res.random_test.n_neg);
  std::printf("AUC on MCTS-agent test games:   %.4f (n=%ld)\n", res.mcts_test.overall_auc,
              res.mcts_test.n_pos + res.mcts_test.n_neg);
  std::printf("delta: %.4f\n", res.delta);
  std::printf("per-turn curve: %s\n", out_path(cfg, "generality_per_turn.csv").c_str());
  return 0;
}

int experiment_curriculum(const ExperimentConfig& cfg) {
  const json& c = section(cfg, "experiment").at("curriculum");
  Encoder encoder(cfg.rules);
  CurriculumConfig cc;
  cc.low_iterations = c.value("low_iterations", 1000);
  cc.high_iterations = c.value("high_iterations", 10000);
  cc.low_games = c.value("low_games", 1000);
  cc.high_games = c.value("high_games", 200);
  cc.eval_games = c.value("eval_games", 200);
  cc.recurrent_hidden = c.value("recurrent_hidden", std::vector<int>{64, 64});
  cc.dropout = c.value("dropout", 0.1);
  cc.window_len = c.value("window_len", 10);
  cc.epochs_low = c.value("epochs_low", 3);
  cc.epochs_high = c.value("epochs_high", 4);
  cc.epochs_retrain = c.value("epochs_retrain", 3);
  cc.learning_rate = c.value("learning_rate", 1e-3);
  cc.batch_size = c.value("batch_size", 64);
  cc.seed = cfg.seed;
  cc.workers = cfg.workers;
  cc.decks = pick_decks(cfg, c.value("deck_list", "train"));

  CurriculumResult res = distillation_curriculum(cfg.rules, encoder, cc, cfg.output_dir);
  std::printf("sequence datasets: low=%ld records, high=%ld records\n",
              res.low_sequences, res.high_sequences);
  std::fputs(curriculum_summary(res).c_str(), stdout);
  std::printf("report: %s\n", out_path(cfg, "curriculum_report.jsonl").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"miniature card game search & learning laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string which = "tournament";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "experiment config file")->required();
    sub->add_option("--out", args.out_dir, "output directory override");
    sub->add_option("--workers", args.workers, "worker thread override");
    sub->add_option("--seed", args.seed, "seed override");
  };
  CLI::App* gen = app.add_subcommand("generate", "play games and export datasets");
  add_common(gen);
  CLI::App* train = app.add_subcommand("train", "train a value or policy model");
  add_common(train);
  CLI::App* exp = app.add_subcommand("experiment", "run a configured experiment");
  add_common(exp);
  exp->add_option("--which", which, "generality | curriculum | tournament");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(args);
    if (train->parsed()) return cmd_train(args);
    ExperimentConfig cfg = load_with_overrides(args);
    if (which == "tournament") return experiment_tournament(cfg);
    if (which == "generality") return experiment_generality(cfg);
    if (which == "curriculum") return experiment_curriculum(cfg);
    throw ConfigError("unknown experiment: " + which);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
