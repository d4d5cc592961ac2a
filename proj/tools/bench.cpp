// Micro-benchmarks for the hot paths: random playouts, step throughput and
// (once agents exist) MCTS decisions. Not part of the test suite.
#include <chrono>
#include <cstdio>
#include <vector>

#include "mcg/game/engine.hpp"

using namespace mcg;
using Clock = std::chrono::steady_clock;

static double secs(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

int main() {
  const Rules& rules = default_rules();
  std::vector<uint8_t> deck;
  for (uint8_t i = 0; i < 30; ++i) deck.push_back(i);

  // Playout length and speed from the initial state.
  {
    SplitMix64 rng(7);
    long long total_steps = 0, total_turns = 0;
    int p0 = 0;
    const int n = 20000;
    auto t0 = Clock::now();
    for (int g = 0; g < n; ++g) {
      GameState s = new_game(rules, deck, deck, derive_seed(1, g));
      ActionList actions;
      int steps = 0;
      while (s.outcome == Outcome::InProgress) {
        legal_actions(rules, s, actions);
        step_unchecked(rules, s, actions[(int)rng.next_below(actions.size())]);
        ++steps;
      }
      total_steps += steps;
      total_turns += s.turn_number;
      p0 += s.outcome == Outcome::Player0Wins;
    }
    auto t1 = Clock::now();
    double dt = secs(t0, t1);
    std::printf("playouts: %d games in %.2fs  (%.1f us/game, %.1f ns/step)\n", n, dt,
                1e6 * dt / n, 1e9 * dt / double(total_steps));
    std::printf("  avg steps/game %.1f, avg turns %.1f, p0 win rate %.3f\n",
                double(total_steps) / n, double(total_turns) / n, double(p0) / n);
  }
  return 0;
}
