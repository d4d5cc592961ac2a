#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcg/eval/metrics.hpp"
#include "mcg/eval/tournament.hpp"
#include "mcg/features/dataset.hpp"
#include "mcg/nn/serialize.hpp"
#include "mcg/nn/train.hpp"

namespace mcg {

// Dense value network over encoded states (sigmoid head).
nn::Network make_value_network(const Encoder& encoder, const std::vector<int>& hidden,
                               double dropout, uint64_t init_seed);

// Sequence policy network over window rows (softmax head over all actions).
nn::Network make_policy_network(const Encoder& encoder,
                                const std::vector<int>& recurrent_hidden,
                                double dropout, uint64_t init_seed);

nn::TrainResult train_value_network(nn::Network& net, const StateDataset& data,
                                    const nn::TrainConfig& cfg);

// Win-probability scores for every record (mini-batched forward).
std::vector<double> score_states(const nn::Network& net, const StateDataset& data);

struct GeneralityResult {
  AucReport random_test;
  AucReport mcts_test;
  double delta = 0;  // random-test AUC minus mcts-test AUC
};

// The trained-on-random-playouts model evaluated on both held-out worlds.
GeneralityResult generality_compare(const nn::Network& value_net,
                                    const StateDataset& random_test,
                                    const StateDataset& mcts_test);

// turn-bucketed AUC rows for plotting: set,turn_lo,turn_hi,auc,n
void write_per_turn_csv(const std::string& path, const GeneralityResult& result);

// ---- distillation curriculum --------------------------------------------

struct CurriculumConfig {
  int low_iterations = 1000;
  int high_iterations = 10000;
  int low_games = 1000;
  int high_games = 200;
  int eval_games = 200;  // per evaluation pairing
  double exploration_c = 1.4142135623730951;
  std::vector<int> recurrent_hidden = {64, 64};
  double dropout = 0.1;
  int window_len = 10;
  int epochs_low = 3;
  int epochs_high = 4;
  int epochs_retrain = 3;
  double learning_rate = 1e-3;
  int batch_size = 64;
  uint64_t seed = 1;
  int workers = 1;
  std::vector<std::vector<uint8_t>> decks;
};

struct CurriculumAgentResult {
  std::string name;
  int wins_vs_random = 0;
  int wins_vs_mcts_low = 0;
  int games = 0;
  double illegal_raw_rate = 0;  // how often the unmasked argmax was illegal
};

struct CurriculumResult {
  std::vector<CurriculumAgentResult> agents;  // seq_low, seq_high, seq_retrained
  long low_sequences = 0, high_sequences = 0;
  std::vector<double> loss_low, loss_high, loss_retrain;
};

// Generates the two self-play sequence datasets (MCTS low / high budget),
// trains the three policy networks (low-only, high-only, low retrained on
// high) and evaluates each greedy agent against random and against
// MCTS(low). Models and reports land in `out_dir` when non-empty.
CurriculumResult distillation_curriculum(const Rules& rules, const Encoder& encoder,
                                         const CurriculumConfig& cfg,
                                         const std::string& out_dir);

void write_curriculum_jsonl(const std::string& path, const CurriculumResult& result);
std::string curriculum_summary(const CurriculumResult& result);

}  // namespace mcg
