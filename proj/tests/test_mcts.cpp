#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixture_games.hpp"
#include "mcg/agents/agent.hpp"
#include "mcg/agents/mcts.hpp"

using namespace mcg;
using namespace mcg::fixtures;

namespace {

std::vector<uint8_t> ordered_deck() {
  std::vector<uint8_t> d;
  for (uint8_t i = 0; i < 30; ++i) d.push_back(i);
  return d;
}

// Hero-health oracle: prefers states where the perspective player's hero is
// further ahead on health. Used where tests need a known-good heuristic.
struct HealthLeadEvaluator : StateEvaluator<GameState> {
  double evaluate(const GameState& s, int perspective) const override {
    if (s.outcome != Outcome::InProgress) {
      bool won = (s.outcome == Outcome::Player0Wins) == (perspective == 0);
      return won ? 1.0 : 0.0;
    }
    double lead = static_cast<double>(s.players[perspective].hero_health) -
                  static_cast<double>(s.players[perspective ^ 1].hero_health);
    return 0.5 + lead / 120.0;  // stays well inside [0,1]
  }
};

}  // namespace

TEST_CASE("uct_select: exploitation, unvisited priority, numeric example") {
  // c = 0 reduces to argmax Q.
  std::vector<ActionStats> stats = {{0, 0.3, 5, 0}, {1, 0.7, 5, 0}};
  CHECK(uct_select(stats, 10, 0.0) == 1);

  // Unvisited actions outrank everything.
  stats = {{0, 1.0, 10, 0}, {1, 0.0, 0, 0}};
  CHECK(uct_select(stats, 10, 1.0) == 1);

  // Recomputed by hand: 0.4 + 1.414*sqrt(ln(100)/10) = 1.3597 beats
  // 0.6 + 1.414*sqrt(ln(100)/90) = 0.9198.
  stats = {{0, 0.6, 90, 0}, {1, 0.4, 10, 0}};
  CHECK(uct_select(stats, 100, 1.414) == 1);
  double s0 = 0.6 + 1.414 * std::sqrt(std::log(100.0) / 90.0);
  double s1 = 0.4 + 1.414 * std::sqrt(std::log(100.0) / 10.0);
  CHECK(s1 == doctest::Approx(1.3597).epsilon(1e-3));
  CHECK(s0 == doctest::Approx(0.9198).epsilon(1e-3));

  CHECK_THROWS_AS(uct_select({}, 1, 1.0), EmptyNodeError);
}

TEST_CASE("uct argmax is invariant under a uniform shift of all Q values") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int k = 2 + static_cast<int>(rng.next_below(6));
    std::vector<ActionStats> stats;
    uint32_t n_s = 0;
    for (int i = 0; i < k; ++i) {
      uint32_t n = 1 + static_cast<uint32_t>(rng.next_below(50));
      stats.push_back({i, rng.next_double(), n, 0});
      n_s += n;
    }
    int before = uct_select(stats, n_s, 1.4);
    double shift = rng.next_double() * 10 - 5;
    for (auto& st : stats) st.q += shift;
    CHECK(uct_select(stats, n_s, 1.4) == before);
  }
}

TEST_CASE("fresh root: k iterations sweep all k actions once") {
  TreeGame g = depth2_game();
  MctsConfig cfg;
  cfg.iterations = 3;
  MctsSearch<TreeGame> search(g, cfg);
  SplitMix64 rng(1);
  search.start(0);
  for (int i = 0; i < 3; ++i) search.iterate(rng);
  auto stats = search.root_stats();
  REQUIRE(stats.size() == 3);
  for (const auto& st : stats) CHECK(st.n == 1);
  CHECK(search.root_visits() == 3);
}

TEST_CASE("visit accounting: N(root) = sum of child visits = iterations") {
  const Rules& rules = default_rules();
  CardGame g(rules);
  GameState root = new_game(rules, ordered_deck(), ordered_deck(), 3);
  MctsConfig cfg;
  cfg.iterations = 257;
  MctsSearch<CardGame> search(g, cfg);
  SplitMix64 rng(9);
  search.start(root);
  for (int i = 0; i < cfg.iterations; ++i) search.iterate(rng);
  auto stats = search.root_stats();
  uint64_t total = 0;
  for (const auto& st : stats) total += st.n;
  CHECK(total == 257);
  CHECK(search.root_visits() == 257);
  CHECK(search.counters().simulations == 257);  // anytime: no hidden rollouts
  CHECK(search.counters().iterations == 257);
}

TEST_CASE("iterations=1 returns the single expanded action") {
  TreeGame g = depth2_game();
  MctsConfig cfg;
  cfg.iterations = 1;
  MctsSearch<TreeGame> search(g, cfg);
  CHECK(search.choose(0) == 0);  // expansion order = action index order
}

TEST_CASE("lethal fixture: the winning move dominates visits and Q") {
  const Rules& rules = default_rules();
  CardGame g(rules);
  GameState s;
  s.players[0].hero_health = 2;
  s.players[1].hero_health = 4;
  s.active_player = 0;
  s.turn_number = 9;
  // A ready 4/3: attacking face wins on the spot. Passing instead hands the
  // opponent a board with its own lethal.
  Minion& m = s.players[0].board[0];
  m.card_id = 14;
  m.attack = 4;
  m.health = 3;
  m.can_attack = true;
  m.present = true;
  Minion& threat = s.players[1].board[2];
  threat.card_id = 24;
  threat.attack = 8;
  threat.health = 6;
  threat.can_attack = true;
  threat.present = true;

  MctsConfig cfg;
  cfg.iterations = 200;
  cfg.seed = 5;
  MctsSearch<CardGame> search(g, cfg);
  SplitMix64 rng(5);
  search.start(s);
  for (int i = 0; i < cfg.iterations; ++i) search.iterate(rng);

  // Root actions: EndTurn, AttackWith(0). The attack leads to a forced win
  // once the target step picks the face.
  Action best = search.best_move();
  CHECK(best == Action::attack_with(0));
  auto stats = search.root_stats();
  const ActionStats* attack = nullptr;
  for (const auto& st : stats)
    if (st.action_index == Action::attack_with(0).index) attack = &st;
  REQUIRE(attack != nullptr);
  for (const auto& st : stats)
    if (st.action_index != attack->action_index) CHECK(attack->n >= st.n);
  CHECK(attack->q >= 0.9);
}

TEST_CASE("depth-2 mini-game: MCTS matches the minimax oracle") {
  TreeGame g = depth2_game();
  MinimaxOracle<TreeGame> oracle(g);
  REQUIRE(oracle.value(0) == 1);
  REQUIRE(oracle.is_optimal(0, 1));
  REQUIRE_FALSE(oracle.is_optimal(0, 0));
  REQUIRE_FALSE(oracle.is_optimal(0, 2));

  int agree = 0;
  for (int seed = 0; seed < 100; ++seed) {
    MctsConfig cfg;
    cfg.iterations = 10000;
    cfg.seed = static_cast<uint64_t>(seed);
    MctsSearch<TreeGame> search(g, cfg);
    agree += search.choose(0) == 1;
  }
  CHECK(agree >= 95);
}

TEST_CASE("nim fixture: high-budget MCTS approaches minimax play") {
  NimGame g;
  NimGame::State start{{3, 4, 5}, 0};
  auto states = reachable_states(g, start);
  CHECK(states.size() <= 500);

  MinimaxOracle<NimGame> oracle(g);
  int checked = 0, agree = 0;
  for (const auto& s : states) {
    if (g.terminal(s)) continue;
    for (int seed = 0; seed < 3; ++seed) {
      MctsConfig cfg;
      cfg.iterations = 2000;
      cfg.seed = static_cast<uint64_t>(seed);
      MctsSearch<NimGame> search(g, cfg);
      agree += oracle.is_optimal(s, search.choose(s));
      ++checked;
    }
  }
  // Light version of the acceptance criterion (full 10k/100-seed run there).
  CHECK(double(agree) / checked >= 0.90);
}

TEST_CASE("MCTS beats a random agent comfortably (smoke tournament)") {
  const Rules& rules = default_rules();
  auto deck = ordered_deck();
  MctsConfig cfg;
  cfg.iterations = 300;
  cfg.seed = 21;
  MctsAgent mcts(rules, cfg);
  RandomAgent random(rules, 77);

  int mcts_wins = 0;
  const int kGames = 30;
  for (int i = 0; i < kGames; ++i) {
    bool mcts_first = i % 2 == 0;
    Agent& p0 = mcts_first ? static_cast<Agent&>(mcts) : random;
    Agent& p1 = mcts_first ? static_cast<Agent&>(random) : mcts;
    GameRecord rec = play_game(rules, p0, p1, deck, deck, derive_seed(1234, i), false);
    bool p0_won = rec.outcome == Outcome::Player0Wins;
    mcts_wins += (p0_won == mcts_first);
  }
  CHECK(mcts_wins >= 24);  // 80% floor for the smoke version
}

TEST_CASE("greedy_value_choose: tie-break and oracle heuristic") {
  const Rules& rules = default_rules();
  CardGame g(rules);

  struct ConstantEvaluator : StateEvaluator<GameState> {
    double evaluate(const GameState&, int) const override { return 0.5; }
  } constant;

  GameState s = new_game(rules, ordered_deck(), ordered_deck(), 8);
  CHECK(greedy_value_choose(g, s, constant) == Action{0});  // lowest index wins ties

  // Damage-only fixture: hero-health oracle must pick the biggest hit.
  GameState d;
  d.players[0].hero_health = 30;
  d.players[1].hero_health = 30;
  d.active_player = 0;
  d.turn_number = 3;
  Minion& small = d.players[0].board[0];
  small.card_id = 6;
  small.attack = 1;
  small.health = 1;
  small.can_attack = true;
  small.present = true;
  Minion& big = d.players[0].board[3];
  big.card_id = 21;
  big.attack = 7;
  big.health = 5;
  big.can_attack = true;
  big.present = true;

  HealthLeadEvaluator oracle;
  // First decision: both attacks look equal until the target is chosen, so
  // drive to the pending state and check the target pick.
  GameState pending = apply_action(rules, d, Action::attack_with(3));
  CHECK(greedy_value_choose(g, pending, oracle) == Action::select_target(15));

  // Between the two pending attackers the bigger minion gives a bigger lead:
  // compare the two-step values directly.
  double v_small = evaluate_action(g, oracle, d, Action::attack_with(0));
  double v_big = evaluate_action(g, oracle, d, Action::attack_with(3));
  CHECK(v_big == v_small);  // the pending step itself deals no damage yet
}

TEST_CASE("mcts agent: reproducible traces for equal seeds") {
  const Rules& rules = default_rules();
  auto deck = ordered_deck();
  MctsConfig cfg;
  cfg.iterations = 100;
  cfg.seed = 3;

  auto trace = [&]() {
    MctsAgent a(rules, cfg), b(rules, cfg);
    return play_game(rules, a, b, deck, deck, 555, true).actions;
  };
  auto t1 = trace();
  auto t2 = trace();
  REQUIRE(t1.size() == t2.size());
  for (size_t i = 0; i < t1.size(); ++i) CHECK(t1[i] == t2[i]);
}
