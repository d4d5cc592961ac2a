#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcg/agents/agent.hpp"
#include "mcg/features/encoder.hpp"
#include "mcg/nn/train.hpp"

namespace mcg {

// Per-state training examples: one record per applied atomic action (the
// post-action state), labeled with the eventual winner of the source game.
// Feature rows are stored flat, encoded from player 0's perspective; the
// label is 1 when player 0 won.
struct StateDataset {
  std::string rules_version;
  std::string encoding_version;
  int width = 0;
  std::vector<float> features;  // size() * width floats
  std::vector<uint8_t> labels;
  std::vector<uint16_t> turns;
  std::vector<uint32_t> game_ids;
  std::vector<uint64_t> deck_hash0, deck_hash1;

  long size() const { return static_cast<long>(labels.size()); }
  const float* row(long i) const { return features.data() + i * width; }
};

// Full replayable game trace (the sequence-mode dataset representation; the
// per-decision windows are derived views of this log).
struct GameLog {
  uint32_t game_id = 0;
  uint64_t seed = 0;
  std::vector<uint8_t> deck0, deck1;
  int first_agent = 0;  // which configured agent sat in seat 0
  Outcome outcome = Outcome::InProgress;
  std::vector<Action> actions;
};

enum class LogMode : uint8_t { States, Sequences, Both };

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

struct GenerateConfig {
  int n_games = 100;
  uint64_t seed = 0;
  LogMode mode = LogMode::States;
  int workers = 1;
  std::vector<std::vector<uint8_t>> decks;  // sampled per game, per seat
  bool keep_raw_states = false;             // retain GameStates for JSONL export
};

struct GenerateResult {
  StateDataset states;
  std::vector<GameLog> traces;         // filled in Sequences/Both modes
  std::vector<GameState> raw_states;   // aligned with `states` rows when kept
  int n_games = 0;
  long n_actions = 0;
  int p0_wins = 0;       // seat-0 wins (the alternating first player)
  int agent0_wins = 0;   // wins of the first configured agent
};

// Plays n seeded games (agent seating alternates every game, decks sampled
// from the configured list per seat) and logs every post-action state and/or
// the full action traces. Deterministic for a fixed config; games run in
// parallel and are merged in game order.
GenerateResult generate_games(const Rules& rules, const Encoder& encoder,
                              const AgentFactory& agent0, const AgentFactory& agent1,
                              const GenerateConfig& cfg);

// Sequence windows: K consecutive rows of [state s_j ++ one-hot a_{j-1}] for
// j = t-K+1 .. t, zero-padded before the start of the game, one record per
// decision of `logged_player` (states encoded from that player's view).
struct SequenceRecord {
  std::vector<float> window;  // K * (state_width + kActionCount) floats
  int label = 0;              // action index chosen at step t
  uint32_t game_id = 0;
  uint16_t t = 0;
};

std::vector<SequenceRecord> build_sequences(const Rules& rules, const Encoder& encoder,
                                            const GameLog& log, int logged_player,
                                            int window_len = 10);

// Batch source over traces for policy training; windows are assembled on
// demand from per-game encoded step rows (both perspectives).
class SequenceDataset : public nn::BatchSource {
 public:
  SequenceDataset(const Rules& rules, const Encoder& encoder, int window_len = 10);
  void add_game(const GameLog& log);

  long size() const override { return static_cast<long>(records_.size()); }
  int steps() const override { return window_len_; }
  int width() const override { return row_width_; }
  void fill(std::span<const long> indices, Eigen::MatrixXd& input,
            Eigen::VectorXd& targets) const override;

 private:
  struct PerGame {
    std::vector<float> rows[2];  // [n_steps x state_width] per perspective
    std::vector<uint8_t> actions;
    int n_steps = 0;
  };
  struct RecordRef {
    uint32_t game = 0;
    uint16_t t = 0;
    uint8_t player = 0;
  };

  const Rules* rules_;
  const Encoder* encoder_;
  int window_len_;
  int state_width_;
  int row_width_;
  std::vector<PerGame> games_;
  std::vector<RecordRef> records_;
};

// ---- files -------------------------------------------------------------
// CSV: RFC-4180 style, '.' decimal, mandatory header
//   game_id,turn,label,decks,<column names...>
// with `decks` holding "hash0:hash1" in hex. JSONL: one structured
// game-state object per line. Traces: one game object per line. Manifest:
// single deterministic JSON document (no timestamps). Schemas in
// docs/formats.md.

void write_states_csv(const std::string& path, const StateDataset& data,
                      const Encoder& encoder);
StateDataset read_states_csv(const std::string& path);

void write_states_jsonl(const std::string& path, const Rules& rules,
                        const StateDataset& data,
                        const std::vector<GameState>& raw_states);

void write_traces_jsonl(const std::string& path, const Rules& rules,
                        const std::vector<GameLog>& traces);
std::vector<GameLog> read_traces_jsonl(const std::string& path);

struct ManifestInfo {
  std::string rules_version;
  std::string encoding_version;
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  std::string agent0, agent1;
  int n_games = 0;
  long n_state_records = 0;
  long n_trace_records = 0;
  int deck_count = 0;
  int p0_wins = 0;
  int agent0_wins = 0;
  std::vector<std::pair<std::string, std::string>> files;  // (role, filename)
};

void write_manifest(const std::string& path, const ManifestInfo& info);

uint64_t fnv1a64(std::string_view bytes);

}  // namespace mcg
