#include "mcg/eval/experiments.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "mcg/agents/policy_agent.hpp"

namespace mcg {

nn::Network make_value_network(const Encoder& encoder, const std::vector<int>& hidden,
                               double dropout, uint64_t init_seed) {
  std::vector<nn::LayerSpec> layers;
  for (int h : hidden) {
    layers.push_back(nn::LayerSpec::dense(h, nn::Activation::Relu));
    if (dropout > 0) layers.push_back(nn::LayerSpec::dropout(dropout));
  }
  layers.push_back(nn::LayerSpec::dense(1, nn::Activation::Sigmoid));
  return nn::Network(encoder.width(), std::move(layers), init_seed);
}

nn::Network make_policy_network(const Encoder& encoder,
                                const std::vector<int>& recurrent_hidden,
                                double dropout, uint64_t init_seed) {
  std::vector<nn::LayerSpec> layers;
  for (size_t i = 0; i < recurrent_hidden.size(); ++i) {
    layers.push_back(nn::LayerSpec::gated_recurrent(recurrent_hidden[i]));
    if (dropout > 0 && i + 1 < recurrent_hidden.size())
      layers.push_back(nn::LayerSpec::dropout(dropout));
  }
  layers.push_back(nn::LayerSpec::dense(kActionCount, nn::Activation::Softmax));
  return nn::Network(encoder.width() + kActionCount, std::move(layers), init_seed);
}

namespace {

class StateBatchSource : public nn::BatchSource {
 public:
  explicit StateBatchSource(const StateDataset& data) : data_(&data) {}
  long size() const override { return data_->size(); }
  int steps() const override { return 1; }
  int width() const override { return data_->width; }
  void fill(std::span<const long> indices, Eigen::MatrixXd& input,
            Eigen::VectorXd& targets) const override {
    input.resize(static_cast<long>(indices.size()), data_->width);
    targets.resize(static_cast<long>(indices.size()));
    for (size_t k = 0; k < indices.size(); ++k) {
      const float* row = data_->row(indices[k]);
      for (int c = 0; c < data_->width; ++c) input(static_cast<long>(k), c) = row[c];
      targets(static_cast<long>(k)) = data_->labels[indices[k]];
    }
  }

 private:
  const StateDataset* data_;
};

}  // namespace

nn::TrainResult train_value_network(nn::Network& net, const StateDataset& data,
                                    const nn::TrainConfig& cfg) {
  StateBatchSource source(data);
  return nn::train(net, source, cfg);
}

std::vector<double> score_states(const nn::Network& net, const StateDataset& data) {
  std::vector<double> scores(data.size());
  const long chunk = 8192;
  Eigen::MatrixXd x;
  for (long begin = 0; begin < data.size(); begin += chunk) {
    long count = std::min(chunk, data.size() - begin);
    x.resize(count, data.width);
    for (long i = 0; i < count; ++i) {
      const float* row = data.row(begin + i);
      for (int c = 0; c < data.width; ++c) x(i, c) = row[c];
    }
    Eigen::MatrixXd out = net.forward(x);
    for (long i = 0; i < count; ++i) scores[begin + i] = out(i, 0);
  }
  return scores;
}

GeneralityResult generality_compare(const nn::Network& value_net,
                                    const StateDataset& random_test,
                                    const StateDataset& mcts_test) {
  auto report = [&](const StateDataset& ds) {
    std::vector<double> scores = score_states(value_net, ds);
    std::vector<int> labels(ds.labels.begin(), ds.labels.end());
    return auc_report(scores, labels, ds.turns);
  };
  GeneralityResult res;
  res.random_test = report(random_test);
  res.mcts_test = report(mcts_test);
  res.delta = res.random_test.overall_auc - res.mcts_test.overall_auc;
  return res;
}

void write_per_turn_csv(const std::string& path, const GeneralityResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << "set,turn_lo,turn_hi,auc,n\n";
  auto rows = [&](const char* name, const AucReport& r) {
    for (const TurnAuc& t : r.per_turn)
      out << name << ',' << t.turn_lo << ',' << t.turn_hi << ',' << t.auc << ',' << t.n
          << '\n';
  };
  rows("random_test", result.random_test);
  rows("mcts_test", result.mcts_test);
}

// ---- curriculum -----------------------------------------------------------

namespace {

struct PolicyCounters {
  std::atomic<long> decisions{0};
  std::atomic<long> illegal{0};
};

// Policy agent that folds its per-game counters into shared totals.
class CountingPolicyAgent : public GreedyPolicyAgent {
 public:
  CountingPolicyAgent(const Rules& rules, const Encoder& encoder,
                      const nn::Network& policy, int window_len, std::string name,
                      std::shared_ptr<PolicyCounters> counters)
      : GreedyPolicyAgent(rules, encoder, policy, window_len, std::move(name)),
        counters_(std::move(counters)) {}
  ~CountingPolicyAgent() override {
    counters_->decisions += decisions();
    counters_->illegal += raw_argmax_illegal();
  }

 private:
  std::shared_ptr<PolicyCounters> counters_;
};

std::vector<GameLog> selfplay_traces(const Rules& rules, const Encoder& encoder,
                                     int iterations, double c, int n_games,
                                     uint64_t seed, int workers,
                                     const std::vector<std::vector<uint8_t>>& decks) {
  GenerateConfig gen;
  gen.n_games = n_games;
  gen.seed = seed;
  gen.mode = LogMode::Sequences;
  gen.workers = workers;
  gen.decks = decks;
  MctsConfig mcts;
  mcts.iterations = iterations;
  mcts.exploration_c = c;
  mcts.seed = seed;
  AgentFactory make = [&rules, mcts]() {
    return std::make_unique<MctsAgent>(rules, mcts);
  };
  return generate_games(rules, encoder, make, make, gen).traces;
}

nn::TrainResult train_policy(nn::Network& net, const Rules& rules,
                             const Encoder& encoder,
                             const std::vector<GameLog>& traces, int window_len,
                             int epochs, double lr, int batch, uint64_t seed,
                             long* n_records) {
  SequenceDataset data(rules, encoder, window_len);
  for (const GameLog& log : traces) data.add_game(log);
  if (n_records) *n_records = data.size();
  nn::TrainConfig cfg;
  cfg.loss = nn::Loss::CategoricalCrossEntropy;
  cfg.epochs = epochs;
  cfg.learning_rate = lr;
  cfg.batch_size = batch;
  cfg.seed = seed;
  return nn::train(net, data, cfg);
}

}  // namespace

CurriculumResult distillation_curriculum(const Rules& rules, const Encoder& encoder,
                                         const CurriculumConfig& cfg,
                                         const std::string& out_dir) {
  if (cfg.decks.empty()) throw ConfigError("curriculum: deck list is empty");
  CurriculumResult result;

  auto low_traces =
      selfplay_traces(rules, encoder, cfg.low_iterations, cfg.exploration_c,
                      cfg.low_games, derive_seed(cfg.seed, 101), cfg.workers, cfg.decks);
  auto high_traces =
      selfplay_traces(rules, encoder, cfg.high_iterations, cfg.exploration_c,
                      cfg.high_games, derive_seed(cfg.seed, 102), cfg.workers, cfg.decks);

  nn::Network net_low =
      make_policy_network(encoder, cfg.recurrent_hidden, cfg.dropout, cfg.seed + 1);
  result.loss_low = train_policy(net_low, rules, encoder, low_traces, cfg.window_len,
                                 cfg.epochs_low, cfg.learning_rate, cfg.batch_size,
                                 derive_seed(cfg.seed, 201), &result.low_sequences)
                        .epoch_loss;

  nn::Network net_high =
      make_policy_network(encoder, cfg.recurrent_hidden, cfg.dropout, cfg.seed + 2);
  result.loss_high = train_policy(net_high, rules, encoder, high_traces, cfg.window_len,
                                  cfg.epochs_high, cfg.learning_rate, cfg.batch_size,
                                  derive_seed(cfg.seed, 202), &result.high_sequences)
                         .epoch_loss;

  nn::Network net_retrained = net_low;  // warm start from the low-budget model
  result.loss_retrain =
      train_policy(net_retrained, rules, encoder, high_traces, cfg.window_len,
                   cfg.epochs_retrain, cfg.learning_rate, cfg.batch_size,
                   derive_seed(cfg.seed, 203), nullptr)
          .epoch_loss;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    auto meta = [&](const char* name, const std::vector<double>& losses) {
      nlohmann::ordered_json j;
      j["model"] = name;
      j["loss"] = "cce";
      j["epoch_loss"] = losses;
      j["rules_version"] = rules.rules_version;
      j["encoding_version"] = Encoder::kVersion;
      j["window_len"] = cfg.window_len;
      return j.dump();
    };
    nn::save_network(net_low, out_dir + "/policy_seq_low.mcgnet",
                     meta("seq_low", result.loss_low));
    nn::save_network(net_high, out_dir + "/policy_seq_high.mcgnet",
                     meta("seq_high", result.loss_high));
    nn::save_network(net_retrained, out_dir + "/policy_seq_retrained.mcgnet",
                     meta("seq_retrained", result.loss_retrain));
  }

  // Evaluation tournaments.
  MctsConfig low_mcts;
  low_mcts.iterations = cfg.low_iterations;
  low_mcts.exploration_c = cfg.exploration_c;
  low_mcts.seed = cfg.seed;
  MatchConfig match;
  match.games = cfg.eval_games;
  match.seed = derive_seed(cfg.seed, 301);
  match.workers = cfg.workers;
  match.decks = cfg.decks;

  struct Candidate {
    const char* name;
    const nn::Network* net;
  } candidates[] = {{"seq_low", &net_low},
                    {"seq_high", &net_high},
                    {"seq_retrained", &net_retrained}};
  for (const Candidate& cand : candidates) {
    auto counters = std::make_shared<PolicyCounters>();
    AgentEntry policy_entry{
        cand.name, [&, counters]() {
          return std::make_unique<CountingPolicyAgent>(rules, encoder, *cand.net,
                                                       cfg.window_len, cand.name,
                                                       counters);
        }};
    AgentEntry random_entry{"random", [&]() {
                              return std::make_unique<RandomAgent>(rules, cfg.seed);
                            }};
    AgentEntry mcts_entry{"mcts_low", [&]() {
                            return std::make_unique<MctsAgent>(rules, low_mcts);
                          }};
    PairingResult vs_random = play_pairing(rules, policy_entry, random_entry, match);
    PairingResult vs_mcts = play_pairing(rules, policy_entry, mcts_entry, match);

    CurriculumAgentResult row;
    row.name = cand.name;
    row.games = cfg.eval_games;
    row.wins_vs_random = vs_random.wins_a;
    row.wins_vs_mcts_low = vs_mcts.wins_a;
    long dec = counters->decisions.load();
    row.illegal_raw_rate = dec ? double(counters->illegal.load()) / double(dec) : 0.0;
    result.agents.push_back(row);
  }

  if (!out_dir.empty())
    write_curriculum_jsonl(out_dir + "/curriculum_report.jsonl", result);
  return result;
}

void write_curriculum_jsonl(const std::string& path, const CurriculumResult& result) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  for (const CurriculumAgentResult& row : result.agents) {
    nlohmann::ordered_json j;
    j["agent"] = row.name;
    j["games_per_opponent"] = row.games;
    j["wins_vs_random"] = row.wins_vs_random;
    j["wins_vs_mcts_low"] = row.wins_vs_mcts_low;
    j["win_rate_vs_random"] = double(row.wins_vs_random) / row.games;
    j["win_rate_vs_mcts_low"] = double(row.wins_vs_mcts_low) / row.games;
    j["illegal_raw_argmax_rate"] = row.illegal_raw_rate;
    out << j.dump() << '\n';
  }
}

std::string curriculum_summary(const CurriculumResult& result) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-16s %16s %18s %22s\n", "policy agent",
                "wins vs random", "wins vs MCTS(low)", "raw-argmax illegal");
  out += line;
  for (const CurriculumAgentResult& row : result.agents) {
    std::snprintf(line, sizeof(line), "%-16s %9d/%-6d %11d/%-6d %21.1f%%\n",
                  row.name.c_str(), row.wins_vs_random, row.games,
                  row.wins_vs_mcts_low, row.games, 100.0 * row.illegal_raw_rate);
    out += line;
  }
  return out;
}

}  // namespace mcg
