#include "mcg/features/dataset.hpp"

#include <charconv>
#include <fstream>
#include <mutex>

#include "json.hpp"
#include "mcg/util/parallel.hpp"

namespace mcg {

using nlohmann::ordered_json;

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

struct PerGameOutput {
  std::vector<float> features;
  std::vector<uint8_t> labels;
  std::vector<uint16_t> turns;
  std::vector<GameState> raw_states;
  GameLog log;
  Outcome outcome = Outcome::InProgress;
  uint64_t dh0 = 0, dh1 = 0;
  long n_actions = 0;
  bool p0_won = false;
};

}  // namespace

GenerateResult generate_games(const Rules& rules, const Encoder& encoder,
                              const AgentFactory& agent0, const AgentFactory& agent1,
                              const GenerateConfig& cfg) {
  if (cfg.n_games < 1) throw ConfigError("generate: n_games must be >= 1");
  if (cfg.decks.empty()) throw ConfigError("generate: deck list is empty");
  for (const auto& d : cfg.decks)
    if (d.size() != kDeckSize) throw ConfigError("generate: decks must have 30 cards");

  const bool want_states = cfg.mode != LogMode::Sequences;
  const bool want_traces = cfg.mode != LogMode::States;

  std::vector<PerGameOutput> outputs(cfg.n_games);
  parallel_for(cfg.n_games, cfg.workers, [&](long gi) {
    PerGameOutput& out = outputs[gi];
    SplitMix64 game_rng(derive_seed(cfg.seed, static_cast<uint64_t>(gi)));
    const auto& deck0 = cfg.decks[game_rng.next_below(cfg.decks.size())];
    const auto& deck1 = cfg.decks[game_rng.next_below(cfg.decks.size())];
    uint64_t game_seed = game_rng.next();

    // Seating alternates: on odd games the second configured agent sits in
    // seat 0 (the seat that moves first).
    std::unique_ptr<Agent> seat0 = (gi % 2 == 0) ? agent0() : agent1();
    std::unique_ptr<Agent> seat1 = (gi % 2 == 0) ? agent1() : agent0();

    GameState s = new_game(rules, deck0, deck1, game_seed);
    out.log.game_id = static_cast<uint32_t>(gi);
    out.log.seed = game_seed;
    out.log.first_agent = static_cast<int>(gi % 2);
    out.log.deck0 = deck0;
    out.log.deck1 = deck1;
    out.dh0 = deck_hash(deck0);
    out.dh1 = deck_hash(deck1);
    seat0->reset(game_seed, 0);
    seat1->reset(game_seed, 1);

    std::vector<float> row(encoder.width());
    while (s.outcome == Outcome::InProgress) {
      Agent& mover = s.active_player == 0 ? *seat0 : *seat1;
      Action a = mover.choose(s);
      seat0->observe(s, a);
      seat1->observe(s, a);
      if (want_traces) out.log.actions.push_back(a);
      step_unchecked(rules, s, a);
      ++out.n_actions;
      if (want_states) {
        encoder.encode(s, 0, row.data());
        out.features.insert(out.features.end(), row.begin(), row.end());
        out.turns.push_back(s.turn_number);
        if (cfg.keep_raw_states) out.raw_states.push_back(s);
      }
      if (s.turn_number > 1000) throw Error("generated game exceeded 1000 turns");
    }
    out.outcome = s.outcome;
    out.log.outcome = s.outcome;
    out.p0_won = s.outcome == Outcome::Player0Wins;
    // Labels are constant within a game: did player 0 (this game's first
    // player) eventually win.
    out.labels.assign(out.turns.size(), out.p0_won ? 1 : 0);
  });

  GenerateResult result;
  result.n_games = cfg.n_games;
  result.states.rules_version = rules.rules_version;
  result.states.encoding_version = Encoder::kVersion;
  result.states.width = encoder.width();
  for (long gi = 0; gi < cfg.n_games; ++gi) {
    PerGameOutput& out = outputs[gi];
    result.n_actions += out.n_actions;
    result.p0_wins += out.p0_won;
    bool agent0_was_p0 = gi % 2 == 0;
    result.agent0_wins += (out.p0_won == agent0_was_p0);
    if (want_states) {
      StateDataset& ds = result.states;
      ds.features.insert(ds.features.end(), out.features.begin(), out.features.end());
      ds.labels.insert(ds.labels.end(), out.labels.begin(), out.labels.end());
      ds.turns.insert(ds.turns.end(), out.turns.begin(), out.turns.end());
      for (size_t k = 0; k < out.labels.size(); ++k) {
        ds.game_ids.push_back(static_cast<uint32_t>(gi));
        ds.deck_hash0.push_back(out.dh0);
        ds.deck_hash1.push_back(out.dh1);
      }
      if (cfg.keep_raw_states)
        result.raw_states.insert(result.raw_states.end(), out.raw_states.begin(),
                                 out.raw_states.end());
    }
    if (want_traces) result.traces.push_back(std::move(out.log));
  }
  return result;
}

std::vector<SequenceRecord> build_sequences(const Rules& rules, const Encoder& encoder,
                                            const GameLog& log, int logged_player,
                                            int window_len) {
  const int state_width = encoder.width();
  const int row_width = state_width + kActionCount;

  // Replay the trace, encoding every pre-action state from the logged
  // player's perspective.
  GameState s = new_game(rules, log.deck0, log.deck1, log.seed);
  std::vector<float> enc;
  std::vector<int> moves;
  std::vector<int> decision_steps;
  std::vector<float> row(state_width);
  for (size_t t = 0; t < log.actions.size(); ++t) {
    encoder.encode(s, logged_player, row.data());
    enc.insert(enc.end(), row.begin(), row.end());
    moves.push_back(log.actions[t].index);
    if (s.active_player == logged_player) decision_steps.push_back(static_cast<int>(t));
    step_unchecked(rules, s, log.actions[t]);
  }

  std::vector<SequenceRecord> records;
  for (int t : decision_steps) {
    SequenceRecord rec;
    rec.game_id = log.game_id;
    rec.t = static_cast<uint16_t>(t);
    rec.label = moves[t];
    rec.window.assign(static_cast<size_t>(window_len) * row_width, 0.0f);
    for (int k = 0; k < window_len; ++k) {
      int j = t - window_len + 1 + k;
      if (j < 0) continue;  // zero row before the game started
      float* dst = rec.window.data() + static_cast<size_t>(k) * row_width;
      std::copy(enc.begin() + static_cast<size_t>(j) * state_width,
                enc.begin() + static_cast<size_t>(j + 1) * state_width, dst);
      if (j >= 1) dst[state_width + moves[j - 1]] = 1.0f;  // previous action
    }
    records.push_back(std::move(rec));
  }
  return records;
}

SequenceDataset::SequenceDataset(const Rules& rules, const Encoder& encoder,
                                 int window_len)
    : rules_(&rules),
      encoder_(&encoder),
      window_len_(window_len),
      state_width_(encoder.width()),
      row_width_(encoder.width() + kActionCount) {}

void SequenceDataset::add_game(const GameLog& log) {
  PerGame pg;
  pg.n_steps = static_cast<int>(log.actions.size());
  GameState s = new_game(*rules_, log.deck0, log.deck1, log.seed);
  pg.rows[0].resize(static_cast<size_t>(pg.n_steps) * state_width_);
  pg.rows[1].resize(static_cast<size_t>(pg.n_steps) * state_width_);
  for (int t = 0; t < pg.n_steps; ++t) {
    encoder_->encode(s, 0, pg.rows[0].data() + static_cast<size_t>(t) * state_width_);
    encoder_->encode(s, 1, pg.rows[1].data() + static_cast<size_t>(t) * state_width_);
    pg.actions.push_back(log.actions[t].index);
    records_.push_back({static_cast<uint32_t>(games_.size()),
                        static_cast<uint16_t>(t),
                        static_cast<uint8_t>(s.active_player)});
    step_unchecked(*rules_, s, log.actions[t]);
  }
  games_.push_back(std::move(pg));
}

void SequenceDataset::fill(std::span<const long> indices, Eigen::MatrixXd& input,
                           Eigen::VectorXd& targets) const {
  const long batch = static_cast<long>(indices.size());
  input.setZero(batch * window_len_, row_width_);
  targets.resize(batch);
  for (long b = 0; b < batch; ++b) {
    const RecordRef& ref = records_[indices[b]];
    const PerGame& pg = games_[ref.game];
    targets(b) = pg.actions[ref.t];
    for (int k = 0; k < window_len_; ++k) {
      int j = ref.t - window_len_ + 1 + k;
      if (j < 0) continue;
      long out_row = b * window_len_ + k;
      const float* src = pg.rows[ref.player].data() + static_cast<size_t>(j) * state_width_;
      for (int c = 0; c < state_width_; ++c) input(out_row, c) = src[c];
      if (j >= 1) input(out_row, state_width_ + pg.actions[j - 1]) = 1.0;
    }
  }
}

// ---- files -------------------------------------------------------------

namespace {

void append_float(std::string& out, float v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

ordered_json state_to_json(const Rules& rules, const GameState& s) {
  ordered_json players = ordered_json::array();
  for (const PlayerState& p : s.players) {
    ordered_json board = ordered_json::array();
    for (const Minion& m : p.board) {
      if (!m.present) {
        board.push_back(nullptr);
      } else {
        board.push_back(ordered_json{{"card", rules.card(m.card_id).name},
                                     {"card_id", m.card_id},
                                     {"attack", m.attack},
                                     {"health", m.health},
                                     {"can_attack", m.can_attack}});
      }
    }
    ordered_json hand = ordered_json::array();
    for (int i = 0; i < p.hand_size; ++i) hand.push_back(p.hand[i]);
    players.push_back(ordered_json{{"hero_health", p.hero_health},
                                   {"mana_available", p.mana_available},
                                   {"mana_crystals", p.mana_crystals},
                                   {"hand", hand},
                                   {"hand_size", p.hand_size},
                                   {"deck_count", p.deck_size},
                                   {"board", board},
                                   {"fatigue", p.fatigue},
                                   {"hero_power_used", p.hero_power_used}});
  }
  const char* pending = "none";
  switch (s.pending.kind) {
    case PendingKind::MinionPlacement: pending = "minion_placement"; break;
    case PendingKind::SpellTarget: pending = "spell_target"; break;
    case PendingKind::AttackTarget: pending = "attack_target"; break;
    case PendingKind::HeroPowerTarget: pending = "hero_power_target"; break;
    case PendingKind::None: break;
  }
  return ordered_json{{"active_player", s.active_player},
                      {"turn", s.turn_number},
                      {"players", players},
                      {"pending", {{"kind", pending}, {"param", s.pending.param}}}};
}

}  // namespace

void write_states_csv(const std::string& path, const StateDataset& data,
                      const Encoder& encoder) {
  if (data.width != encoder.width())
    throw ShapeMismatchError("dataset width does not match encoder");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);

  std::string line = "game_id,turn,label,decks";
  for (const auto& name : encoder.column_names()) {
    line += ',';
    line += name;
  }
  line += '\n';
  out << line;

  char hexbuf[64];
  for (long i = 0; i < data.size(); ++i) {
    line.clear();
    line += std::to_string(data.game_ids[i]);
    line += ',';
    line += std::to_string(data.turns[i]);
    line += ',';
    line += std::to_string(int(data.labels[i]));
    line += ',';
    std::snprintf(hexbuf, sizeof(hexbuf), "%016llx:%016llx",
                  static_cast<unsigned long long>(data.deck_hash0[i]),
                  static_cast<unsigned long long>(data.deck_hash1[i]));
    line += hexbuf;
    const float* row = data.row(i);
    for (int c = 0; c < data.width; ++c) {
      line += ',';
      append_float(line, row[c]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw ConfigError("failed writing " + path);
}

StateDataset read_states_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty csv: " + path);
  int columns = 1;
  for (char c : header) columns += c == ',';
  if (columns < 5) throw ConfigError("csv has no feature columns: " + path);

  StateDataset ds;
  ds.width = columns - 4;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto next_field = [&]() {
      const char* start = p;
      while (p < end && *p != ',') ++p;
      std::string_view f(start, static_cast<size_t>(p - start));
      if (p < end) ++p;
      return f;
    };
    auto f0 = next_field();
    auto f1 = next_field();
    auto f2 = next_field();
    auto decks = next_field();
    uint32_t game_id = 0;
    uint16_t turn = 0;
    int label = 0;
    std::from_chars(f0.data(), f0.data() + f0.size(), game_id);
    std::from_chars(f1.data(), f1.data() + f1.size(), turn);
    std::from_chars(f2.data(), f2.data() + f2.size(), label);
    uint64_t h0 = 0, h1 = 0;
    if (decks.size() == 33 && decks[16] == ':') {
      std::from_chars(decks.data(), decks.data() + 16, h0, 16);
      std::from_chars(decks.data() + 17, decks.data() + 33, h1, 16);
    }
    ds.game_ids.push_back(game_id);
    ds.turns.push_back(turn);
    ds.labels.push_back(static_cast<uint8_t>(label));
    ds.deck_hash0.push_back(h0);
    ds.deck_hash1.push_back(h1);
    for (int c = 0; c < ds.width; ++c) {
      auto f = next_field();
      float v = 0;
      std::from_chars(f.data(), f.data() + f.size(), v);
      ds.features.push_back(v);
    }
  }
  return ds;
}

void write_states_jsonl(const std::string& path, const Rules& rules,
                        const StateDataset& data,
                        const std::vector<GameState>& raw_states) {
  if (static_cast<long>(raw_states.size()) != data.size())
    throw ConfigError("jsonl export needs raw states (generate with keep_raw_states)");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  char hexbuf[64];
  for (long i = 0; i < data.size(); ++i) {
    ordered_json j;
    j["game_id"] = data.game_ids[i];
    j["label"] = int(data.labels[i]);
    std::snprintf(hexbuf, sizeof(hexbuf), "%016llx:%016llx",
                  static_cast<unsigned long long>(data.deck_hash0[i]),
                  static_cast<unsigned long long>(data.deck_hash1[i]));
    j["decks"] = hexbuf;
    j["rules_version"] = rules.rules_version;
    j["state"] = state_to_json(rules, raw_states[i]);
    out << j.dump() << '\n';
  }
}

void write_traces_jsonl(const std::string& path, const Rules& rules,
                        const std::vector<GameLog>& traces) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  for (const GameLog& log : traces) {
    ordered_json j;
    j["game_id"] = log.game_id;
    j["seed"] = log.seed;
    j["rules_version"] = rules.rules_version;
    j["first_agent"] = log.first_agent;
    j["deck0"] = log.deck0;
    j["deck1"] = log.deck1;
    j["winner"] = log.outcome == Outcome::Player0Wins ? 0 : 1;
    std::vector<int> acts;
    acts.reserve(log.actions.size());
    for (Action a : log.actions) acts.push_back(a.index);
    j["actions"] = acts;
    out << j.dump() << '\n';
  }
}

std::vector<GameLog> read_traces_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<GameLog> logs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ConfigError("bad trace line in " + path);
    GameLog log;
    log.game_id = j.at("game_id").get<uint32_t>();
    log.seed = j.at("seed").get<uint64_t>();
    log.first_agent = j.at("first_agent").get<int>();
    log.deck0 = j.at("deck0").get<std::vector<uint8_t>>();
    log.deck1 = j.at("deck1").get<std::vector<uint8_t>>();
    log.outcome = j.at("winner").get<int>() == 0 ? Outcome::Player0Wins
                                                 : Outcome::Player1Wins;
    for (int a : j.at("actions").get<std::vector<int>>())
      log.actions.push_back(Action{static_cast<uint8_t>(a)});
    logs.push_back(std::move(log));
  }
  return logs;
}

void write_manifest(const std::string& path, const ManifestInfo& info) {
  ordered_json j;
  j["format"] = "mcg-dataset-manifest-1";
  j["rules_version"] = info.rules_version;
  j["encoding_version"] = info.encoding_version;
  j["seed"] = info.seed;
  char hexbuf[32];
  std::snprintf(hexbuf, sizeof(hexbuf), "%016llx",
                static_cast<unsigned long long>(info.config_hash));
  j["config_hash"] = hexbuf;
  j["agents"] = {info.agent0, info.agent1};
  j["n_games"] = info.n_games;
  j["n_state_records"] = info.n_state_records;
  j["n_trace_records"] = info.n_trace_records;
  j["deck_count"] = info.deck_count;
  j["p0_wins"] = info.p0_wins;
  j["agent0_wins"] = info.agent0_wins;
  ordered_json files = ordered_json::object();
  for (const auto& [role, name] : info.files) files[role] = name;
  j["files"] = files;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace mcg
