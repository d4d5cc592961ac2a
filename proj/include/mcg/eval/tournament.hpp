#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mcg/agents/agent.hpp"
#include "mcg/eval/metrics.hpp"

namespace mcg {

using AgentFactoryFn = std::function<std::unique_ptr<Agent>()>;

struct AgentEntry {
  std::string name;
  AgentFactoryFn make;
};

struct PairingResult {
  std::string agent_a, agent_b;
  int wins_a = 0, wins_b = 0, games = 0;
  double win_rate_a = 0;
  WilsonInterval wilson_a;
};

struct TournamentReport {
  uint64_t seed = 0;
  int games_per_pairing = 0;
  std::vector<PairingResult> pairings;
};

struct MatchConfig {
  int games = 100;
  uint64_t seed = 0;
  int workers = 1;
  std::vector<std::vector<uint8_t>> decks;  // sampled per game, per seat
};

// N games between two agents: seating alternates every game (a sits in the
// first-moving seat on even games) and the per-game seed/deck schedule
// depends only on the game index, so every pairing of a tournament sees the
// identical schedule. Returns wins for `a`.
PairingResult play_pairing(const Rules& rules, const AgentEntry& a, const AgentEntry& b,
                           const MatchConfig& cfg);

// Round-robin over all unordered agent pairs.
TournamentReport run_tournament(const Rules& rules, const std::vector<AgentEntry>& agents,
                                const MatchConfig& cfg);

void write_tournament_jsonl(const std::string& path, const TournamentReport& report);
std::string tournament_summary(const TournamentReport& report);

}  // namespace mcg
