#include "mcg/eval/tournament.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "mcg/util/parallel.hpp"

namespace mcg {

PairingResult play_pairing(const Rules& rules, const AgentEntry& a, const AgentEntry& b,
                           const MatchConfig& cfg) {
  if (cfg.games < 1) throw ConfigError("pairing needs at least one game");
  if (cfg.decks.empty()) throw ConfigError("pairing needs a deck list");

  std::vector<uint8_t> a_won(cfg.games, 0);
  parallel_for(cfg.games, cfg.workers, [&](long gi) {
    SplitMix64 game_rng(derive_seed(cfg.seed, static_cast<uint64_t>(gi)));
    const auto& deck0 = cfg.decks[game_rng.next_below(cfg.decks.size())];
    const auto& deck1 = cfg.decks[game_rng.next_below(cfg.decks.size())];
    uint64_t game_seed = game_rng.next();

    std::unique_ptr<Agent> first = (gi % 2 == 0) ? a.make() : b.make();
    std::unique_ptr<Agent> second = (gi % 2 == 0) ? b.make() : a.make();
    GameRecord rec = play_game(rules, *first, *second, deck0, deck1, game_seed, false);
    bool p0_won = rec.outcome == Outcome::Player0Wins;
    a_won[gi] = (p0_won == (gi % 2 == 0)) ? 1 : 0;
  });

  PairingResult res;
  res.agent_a = a.name;
  res.agent_b = b.name;
  res.games = cfg.games;
  for (uint8_t w : a_won) res.wins_a += w;
  res.wins_b = cfg.games - res.wins_a;  // the rules admit no draws
  res.win_rate_a = double(res.wins_a) / double(cfg.games);
  res.wilson_a = wilson(res.wins_a, cfg.games);
  return res;
}

TournamentReport run_tournament(const Rules& rules, const std::vector<AgentEntry>& agents,
                                const MatchConfig& cfg) {
  if (agents.size() < 2) throw ConfigError("tournament needs at least two agents");
  TournamentReport report;
  report.seed = cfg.seed;
  report.games_per_pairing = cfg.games;
  for (size_t i = 0; i < agents.size(); ++i)
    for (size_t j = i + 1; j < agents.size(); ++j)
      report.pairings.push_back(play_pairing(rules, agents[i], agents[j], cfg));
  return report;
}

void write_tournament_jsonl(const std::string& path, const TournamentReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  for (const PairingResult& p : report.pairings) {
    nlohmann::ordered_json j;
    j["agent_a"] = p.agent_a;
    j["agent_b"] = p.agent_b;
    j["games"] = p.games;
    j["wins_a"] = p.wins_a;
    j["wins_b"] = p.wins_b;
    j["win_rate_a"] = p.win_rate_a;
    j["wilson95_a"] = {p.wilson_a.lo, p.wilson_a.hi};
    j["seed"] = report.seed;
    out << j.dump() << '\n';
  }
}

std::string tournament_summary(const TournamentReport& report) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-28s %7s %7s %9s %s\n", "agent A", "agent B",
                "wins A", "games", "rate A", "wilson95");
  out += line;
  for (const PairingResult& p : report.pairings) {
    std::snprintf(line, sizeof(line), "%-28s %-28s %7d %7d %8.1f%% [%.3f, %.3f]\n",
                  p.agent_a.c_str(), p.agent_b.c_str(), p.wins_a, p.games,
                  100.0 * p.win_rate_a, p.wilson_a.lo, p.wilson_a.hi);
    out += line;
  }
  return out;
}

}  // namespace mcg
