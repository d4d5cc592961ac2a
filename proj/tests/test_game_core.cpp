#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "mcg/game/engine.hpp"
#include "mcg/util/errors.hpp"

using namespace mcg;

namespace {

std::vector<uint8_t> ordered_deck() {
  std::vector<uint8_t> d;
  for (uint8_t i = 0; i < 30; ++i) d.push_back(i);
  return d;
}

// Blank in-progress state for rule fixtures: empty hands/boards/decks,
// full hero health, player 0 to act.
GameState blank_state(const Rules& rules) {
  GameState s;
  s.players[0].hero_health = static_cast<int16_t>(rules.hero_health);
  s.players[1].hero_health = static_cast<int16_t>(rules.hero_health);
  s.active_player = 0;
  s.turn_number = 5;
  return s;
}

void put_minion(GameState& s, int player, int slot, uint8_t card_id, int attack,
                int health, bool can_attack) {
  Minion& m = s.players[player].board[slot];
  m.card_id = card_id;
  m.attack = static_cast<int8_t>(attack);
  m.health = static_cast<int8_t>(health);
  m.can_attack = can_attack;
  m.present = true;
}

void give_card(GameState& s, int player, uint8_t card_id) {
  PlayerState& p = s.players[player];
  p.hand[p.hand_size++] = card_id;
}

// Independent re-implementation of the documented shuffle contract, kept
// deliberately separate from SplitMix64/new_game (cross-checked against the
// Python oracle in tests/oracles/shuffle_oracle.py).
struct OracleRng {
  uint64_t state;
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

struct OracleDeal {
  std::vector<int> hand0, hand1, deck0, deck1;
};

OracleDeal oracle_new_game(uint64_t seed, std::vector<int> d0, std::vector<int> d1) {
  OracleRng rng{seed};
  for (std::vector<int>* d : {&d0, &d1})
    for (int i = 29; i >= 1; --i) {
      int j = static_cast<int>(rng.next() % static_cast<uint64_t>(i + 1));
      std::swap((*d)[i], (*d)[j]);
    }
  OracleDeal out;
  for (int i = 0; i < 3; ++i) {
    out.hand0.push_back(d0.back());
    d0.pop_back();
  }
  for (int i = 0; i < 4; ++i) {
    out.hand1.push_back(d1.back());
    d1.pop_back();
  }
  out.deck0 = d0;
  out.deck1 = d1;
  return out;
}

void check_state_invariants(const Rules& rules, const GameState& s) {
  for (const PlayerState& p : s.players) {
    REQUIRE(p.mana_available <= p.mana_crystals);
    REQUIRE(p.mana_crystals <= rules.mana_cap);
    REQUIRE(p.hand_size <= rules.hand_limit);
    REQUIRE(p.board_count() <= rules.board_slots);
    REQUIRE(p.hero_health <= rules.hero_health);
    for (const Minion& m : p.board) {
      if (!m.present) continue;
      REQUIRE(m.health >= 1);
      // The only buff in the pool raises attack; health never exceeds the
      // printed value.
      REQUIRE(m.health <= rules.card(m.card_id).health);
    }
  }
  bool anyone_dead = s.players[0].hero_health <= 0 || s.players[1].hero_health <= 0;
  REQUIRE((s.outcome != Outcome::InProgress) == anyone_dead);
}

}  // namespace

TEST_CASE("new_game is deterministic and validates decks") {
  const Rules& rules = default_rules();
  auto deck = ordered_deck();

  GameState a = new_game(rules, deck, deck, 42);
  GameState b = new_game(rules, deck, deck, 42);
  CHECK(a == b);
  CHECK(state_hash(a) == state_hash(b));

  GameState c = new_game(rules, deck, deck, 43);
  CHECK_FALSE(a == c);

  std::vector<uint8_t> short_deck(deck.begin(), deck.end() - 1);
  CHECK_THROWS_AS(new_game(rules, short_deck, deck, 1), InvalidDeckError);

  auto bad_id = deck;
  bad_id[0] = 30;
  CHECK_THROWS_AS(new_game(rules, deck, bad_id, 1), InvalidDeckError);

  std::vector<uint8_t> three_copies(30, 0);
  for (int i = 0; i < 30; ++i) three_copies[i] = static_cast<uint8_t>(i / 3);
  CHECK_THROWS_AS(new_game(rules, three_copies, deck, 1), InvalidDeckError);

  // Two copies of each of 15 ids is fine.
  std::vector<uint8_t> two_copies;
  for (int i = 0; i < 15; ++i) {
    two_copies.push_back(static_cast<uint8_t>(i));
    two_copies.push_back(static_cast<uint8_t>(i));
  }
  CHECK_NOTHROW(new_game(rules, two_copies, deck, 1));
}

TEST_CASE("new_game matches the documented shuffle (frozen oracle, seed 0)") {
  const Rules& rules = default_rules();
  GameState s = new_game(rules, ordered_deck(), ordered_deck(), 0);

  // Frozen output of tests/oracles/shuffle_oracle.py.
  const std::vector<int> hand0 = {25, 3, 23};
  const std::vector<int> hand1 = {28, 18, 13, 24};
  const std::vector<int> deck0 = {14, 20, 19, 22, 4,  28, 13, 18, 6, 24, 8, 0, 16, 11,
                                  26, 27, 2,  21, 12, 1,  5,  9,  10, 29, 15, 17, 7};
  const std::vector<int> deck1 = {27, 22, 26, 23, 11, 3,  0,  6, 10, 4, 2, 20, 15,
                                  5,  9,  16, 25, 12, 29, 21, 14, 1, 8, 19, 17, 7};

  REQUIRE(s.players[0].hand_size == 3);
  REQUIRE(s.players[1].hand_size == 4);
  for (int i = 0; i < 3; ++i) CHECK(s.players[0].hand[i] == hand0[i]);
  for (int i = 0; i < 4; ++i) CHECK(s.players[1].hand[i] == hand1[i]);
  REQUIRE(s.players[0].deck_size == 27);
  REQUIRE(s.players[1].deck_size == 26);
  for (int i = 0; i < 27; ++i) CHECK(s.players[0].deck[i] == deck0[i]);
  for (int i = 0; i < 26; ++i) CHECK(s.players[1].deck[i] == deck1[i]);

  CHECK(s.players[0].mana_crystals == 1);
  CHECK(s.players[0].mana_available == 1);
  CHECK(s.players[1].mana_crystals == 0);
  CHECK(s.active_player == 0);
  CHECK(s.turn_number == 1);
  CHECK(s.outcome == Outcome::InProgress);
}

TEST_CASE("new_game agrees with the independent shuffle oracle over many seeds") {
  const Rules& rules = default_rules();
  for (uint64_t seed : {1ULL, 7ULL, 123456789ULL, 0xDEADBEEFULL, (1ULL << 63) + 5}) {
    GameState s = new_game(rules, ordered_deck(), ordered_deck(), seed);
    std::vector<int> d(30);
    for (int i = 0; i < 30; ++i) d[i] = i;
    OracleDeal o = oracle_new_game(seed, d, d);
    for (int i = 0; i < 3; ++i) REQUIRE(s.players[0].hand[i] == o.hand0[i]);
    for (int i = 0; i < 4; ++i) REQUIRE(s.players[1].hand[i] == o.hand1[i]);
    for (int i = 0; i < 27; ++i) REQUIRE(s.players[0].deck[i] == o.deck0[i]);
    for (int i = 0; i < 26; ++i) REQUIRE(s.players[1].deck[i] == o.deck1[i]);
  }
}

TEST_CASE("legal_actions: exhausted position offers EndTurn and maybe hero power") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);

  s.players[0].mana_crystals = 1;
  s.players[0].mana_available = 1;
  ActionList acts = legal_actions(rules, s);
  REQUIRE(acts.size() == 1);
  CHECK(acts[0] == Action::end_turn());

  s.players[0].mana_crystals = 2;
  s.players[0].mana_available = 2;
  acts = legal_actions(rules, s);
  REQUIRE(acts.size() == 2);
  CHECK(acts[0] == Action::end_turn());
  CHECK(acts[1] == Action::hero_power());

  s.players[0].hero_power_used = true;
  acts = legal_actions(rules, s);
  REQUIRE(acts.size() == 1);

  s.outcome = Outcome::Player0Wins;
  CHECK_THROWS_AS(legal_actions(rules, s), GameOverError);
}

TEST_CASE("legal_actions: pending minion placement on an empty board lists all 7 slots") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  give_card(s, 0, 6);  // Squire, cost 1
  s.players[0].mana_crystals = 1;
  s.players[0].mana_available = 1;

  GameState after = apply_action(rules, s, Action::select_hand(0));
  REQUIRE(after.pending.kind == PendingKind::MinionPlacement);
  ActionList acts = legal_actions(rules, after);
  REQUIRE(acts.size() == 7);
  for (int slot = 0; slot < 7; ++slot) CHECK(acts[slot] == Action::select_slot(slot));
}

TEST_CASE("EndTurn at turn 1: mana ramp, draw, flags") {
  const Rules& rules = default_rules();
  GameState s = new_game(rules, ordered_deck(), ordered_deck(), 11);
  GameState t = apply_action(rules, s, Action::end_turn());

  CHECK(t.active_player == 1);
  CHECK(t.turn_number == 2);
  CHECK(t.players[1].mana_crystals == 1);
  CHECK(t.players[1].mana_available == 1);
  CHECK(t.players[1].hand_size == 5);      // drew one card
  CHECK(t.players[1].deck_size == 25);
  CHECK(s.players[1].hand_size == 4);      // input state untouched (value semantics)
  CHECK(s.active_player == 0);
}

TEST_CASE("combat: 3/2 attacker into 2/3 defender removes both") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  put_minion(s, 0, 2, 7, 3, 2, true);   // Raider 3/2, ready
  put_minion(s, 1, 4, 8, 2, 3, false);  // Shieldhand 2/3

  GameState mid = apply_action(rules, s, Action::attack_with(2));
  REQUIRE(mid.pending.kind == PendingKind::AttackTarget);
  ActionList acts = legal_actions(rules, mid);
  // Enemy minion at slot 4 (target 12) and enemy hero (target 15).
  REQUIRE(acts.size() == 2);
  CHECK(acts[0] == Action::select_target(12));
  CHECK(acts[1] == Action::select_target(15));

  GameState after = apply_action(rules, mid, Action::select_target(12));
  CHECK_FALSE(after.players[0].board[2].present);
  CHECK_FALSE(after.players[1].board[4].present);
  CHECK(after.outcome == Outcome::InProgress);
}

TEST_CASE("combat: face attack leaves the attacker unharmed and spent") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  put_minion(s, 0, 0, 7, 3, 2, true);
  GameState mid = apply_action(rules, s, Action::attack_with(0));
  GameState after = apply_action(rules, mid, Action::select_target(15));
  CHECK(after.players[1].hero_health == rules.hero_health - 3);
  CHECK(after.players[0].board[0].present);
  CHECK(after.players[0].board[0].health == 2);
  CHECK_FALSE(after.players[0].board[0].can_attack);
}

TEST_CASE("fatigue: empty-deck draw with counter 2 deals 3 damage") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[1].fatigue = 2;
  // Player 1's deck is empty; ending player 0's turn forces their draw.
  GameState t = apply_action(rules, s, Action::end_turn());
  CHECK(t.players[1].fatigue == 3);
  CHECK(t.players[1].hero_health == rules.hero_health - 3);
}

TEST_CASE("fatigue is lethal and ends the game") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[1].hero_health = 3;
  s.players[1].fatigue = 2;
  GameState t = apply_action(rules, s, Action::end_turn());
  CHECK(t.players[1].hero_health == 0);
  CHECK(t.outcome == Outcome::Player0Wins);
}

TEST_CASE("overdraw burns the card") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  PlayerState& p1 = s.players[1];
  for (int i = 0; i < 10; ++i) give_card(s, 1, 6);
  p1.deck[0] = 4;
  p1.deck_size = 1;
  GameState t = apply_action(rules, s, Action::end_turn());
  CHECK(t.players[1].hand_size == 10);
  CHECK(t.players[1].deck_size == 0);
  CHECK(t.players[1].fatigue == 0);
}

TEST_CASE("hero power: pay 2, once per turn, hits any character") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[0].mana_crystals = 5;
  s.players[0].mana_available = 5;
  put_minion(s, 0, 1, 5, 1, 2, false);  // own Lookout 1/2

  GameState mid = apply_action(rules, s, Action::hero_power());
  REQUIRE(mid.pending.kind == PendingKind::HeroPowerTarget);
  ActionList acts = legal_actions(rules, mid);
  // Own minion (1), own hero (7), enemy hero (15).
  REQUIRE(acts.size() == 3);

  GameState after = apply_action(rules, mid, Action::select_target(1));
  CHECK(after.players[0].board[1].health == 1);
  CHECK(after.players[0].mana_available == 3);
  CHECK(after.players[0].hero_power_used);
  CHECK_FALSE(is_legal(rules, after, Action::hero_power()));

  // Own face is a legal (if unwise) target and can end the game.
  GameState s2 = blank_state(rules);
  s2.players[0].hero_health = 1;
  s2.players[0].mana_crystals = 2;
  s2.players[0].mana_available = 2;
  GameState mid2 = apply_action(rules, s2, Action::hero_power());
  GameState after2 = apply_action(rules, mid2, Action::select_target(7));
  CHECK(after2.outcome == Outcome::Player1Wins);
}

TEST_CASE("spells: damage, heal clamp, buff, draw") {
  const Rules& rules = default_rules();

  SUBCASE("Spark deals 2 to a chosen character") {
    GameState s = blank_state(rules);
    give_card(s, 0, 0);
    s.players[0].mana_crystals = 1;
    s.players[0].mana_available = 1;
    put_minion(s, 1, 3, 8, 2, 3, false);
    GameState mid = apply_action(rules, s, Action::select_hand(0));
    REQUIRE(mid.pending.kind == PendingKind::SpellTarget);
    GameState after = apply_action(rules, mid, Action::select_target(11));
    CHECK(after.players[1].board[3].health == 1);
    CHECK(after.players[0].hand_size == 0);
    CHECK(after.players[0].mana_available == 0);
  }

  SUBCASE("Mend requires a damaged target and clamps at full health") {
    GameState s = blank_state(rules);
    give_card(s, 0, 1);
    s.players[0].mana_crystals = 2;
    s.players[0].mana_available = 2;
    // Nothing damaged: the spell is unplayable.
    CHECK_FALSE(is_legal(rules, s, Action::select_hand(0)));

    s.players[0].hero_health = 28;
    GameState mid = apply_action(rules, s, Action::select_hand(0));
    ActionList acts = legal_actions(rules, mid);
    REQUIRE(acts.size() == 1);  // only the damaged own hero
    CHECK(acts[0] == Action::select_target(7));
    GameState after = apply_action(rules, mid, Action::select_target(7));
    CHECK(after.players[0].hero_health == 30);  // 28 + 3 clamped to 30
  }

  SUBCASE("Sharpen buffs only friendly minions") {
    GameState s = blank_state(rules);
    give_card(s, 0, 3);
    s.players[0].mana_crystals = 1;
    s.players[0].mana_available = 1;
    put_minion(s, 1, 0, 8, 2, 3, false);  // enemy minion only
    CHECK_FALSE(is_legal(rules, s, Action::select_hand(0)));

    put_minion(s, 0, 5, 10, 2, 2, false);
    GameState mid = apply_action(rules, s, Action::select_hand(0));
    ActionList acts = legal_actions(rules, mid);
    REQUIRE(acts.size() == 1);
    CHECK(acts[0] == Action::select_target(5));
    GameState after = apply_action(rules, mid, Action::select_target(5));
    CHECK(after.players[0].board[5].attack == 4);
  }

  SUBCASE("Insight resolves immediately and draws 2") {
    GameState s = blank_state(rules);
    give_card(s, 0, 2);
    s.players[0].mana_crystals = 3;
    s.players[0].mana_available = 3;
    s.players[0].deck[0] = 4;
    s.players[0].deck[1] = 5;
    s.players[0].deck_size = 2;
    GameState after = apply_action(rules, s, Action::select_hand(0));
    CHECK(after.pending.kind == PendingKind::None);
    CHECK(after.players[0].hand_size == 2);
    CHECK(after.players[0].hand[0] == 5);  // deck[1] was on top
    CHECK(after.players[0].hand[1] == 4);
    CHECK(after.players[0].mana_available == 0);
  }
}

TEST_CASE("apply_action rejects illegal actions with reasons") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[0].mana_crystals = 1;
  s.players[0].mana_available = 1;

  CHECK_THROWS_AS(apply_action(rules, s, Action::hero_power()), IllegalActionError);
  CHECK_THROWS_AS(apply_action(rules, s, Action::select_hand(0)), IllegalActionError);
  CHECK_THROWS_AS(apply_action(rules, s, Action::select_slot(0)), IllegalActionError);
  CHECK_THROWS_AS(apply_action(rules, s, Action::attack_with(0)), IllegalActionError);

  try {
    apply_action(rules, s, Action::hero_power());
  } catch (const IllegalActionError& e) {
    CHECK(e.reason == IllegalReason::NotEnoughMana);
  }

  GameState done = s;
  done.outcome = Outcome::Player1Wins;
  try {
    apply_action(rules, done, Action::end_turn());
  } catch (const IllegalActionError& e) {
    CHECK(e.reason == IllegalReason::GameOver);
  }
}

TEST_CASE("tie-break: both heroes at zero goes to the active player") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[0].hero_health = 0;
  s.players[1].hero_health = -2;
  s.active_player = 1;
  detail::resolve_outcome(s);
  CHECK(s.outcome == Outcome::Player1Wins);

  s.active_player = 0;
  s.outcome = Outcome::InProgress;
  detail::resolve_outcome(s);
  CHECK(s.outcome == Outcome::Player0Wins);
}

TEST_CASE("playout_random: terminal input unchanged, seeded determinism") {
  const Rules& rules = default_rules();
  GameState s = blank_state(rules);
  s.players[1].hero_health = 0;
  s.outcome = Outcome::Player0Wins;
  SplitMix64 rng(1);
  CHECK(playout_random(rules, s, rng) == Outcome::Player0Wins);
  CHECK(rng.state() == SplitMix64(1).state());  // no rng consumed

  GameState g = new_game(rules, ordered_deck(), ordered_deck(), 5);
  SplitMix64 r1(99), r2(99);
  CHECK(playout_random(rules, g, r1) == playout_random(rules, g, r2));
}

TEST_CASE("property: random playouts satisfy legality closure and invariants") {
  const Rules& rules = default_rules();
  auto deck = ordered_deck();
  SplitMix64 rng(2024);
  int p0_wins = 0;
  const int kGames = 1000;

  for (int g = 0; g < kGames; ++g) {
    GameState s = new_game(rules, deck, deck, derive_seed(77, g));
    ActionList actions;
    while (s.outcome == Outcome::InProgress) {
      legal_actions(rules, s, actions);
      REQUIRE(actions.size() >= 1);

      // Duplicate-free, ascending by index, and consistent with is_legal.
      std::set<int> seen;
      for (const Action& a : actions) seen.insert(a.index);
      REQUIRE(static_cast<int>(seen.size()) == actions.size());
      int k = 0;
      for (int idx = 0; idx < kActionCount; ++idx) {
        bool listed = k < actions.size() && actions[k].index == idx;
        if (listed) ++k;
        REQUIRE(is_legal(rules, s, Action{static_cast<uint8_t>(idx)}) == listed);
      }

      // Closure: every listed action applies cleanly.
      for (const Action& a : actions) REQUIRE_NOTHROW(apply_action(rules, s, a));

      step_unchecked(rules, s, actions[(int)rng.next_below(actions.size())]);
      check_state_invariants(rules, s);
      REQUIRE(s.turn_number <= rules.max_turns);
    }
    REQUIRE((s.outcome == Outcome::Player0Wins || s.outcome == Outcome::Player1Wins));
    p0_wins += s.outcome == Outcome::Player0Wins;
  }
  // Mirror decks: only the first-move/draw asymmetry separates the seats.
  double rate = double(p0_wins) / kGames;
  CHECK(rate >= 0.35);
  CHECK(rate <= 0.65);
}

TEST_CASE("10,000 mirror playouts land near an even win rate") {
  const Rules& rules = default_rules();
  auto deck = ordered_deck();
  SplitMix64 rng(3);
  int p0 = 0;
  const int kGames = 10000;
  for (int g = 0; g < kGames; ++g) {
    GameState s = new_game(rules, deck, deck, derive_seed(123, g));
    p0 += playout_random(rules, s, rng) == Outcome::Player0Wins;
  }
  double rate = double(p0) / kGames;
  CHECK(rate >= 0.40);
  CHECK(rate <= 0.60);
}

TEST_CASE("swap_players is an involution and mirrors the outcome") {
  const Rules& rules = default_rules();
  GameState s = new_game(rules, ordered_deck(), ordered_deck(), 17);
  SplitMix64 rng(4);
  ActionList actions;
  for (int i = 0; i < 25 && s.outcome == Outcome::InProgress; ++i) {
    legal_actions(rules, s, actions);
    step_unchecked(rules, s, actions[(int)rng.next_below(actions.size())]);
  }
  GameState w = swap_players(s);
  CHECK(w.players[0] == s.players[1]);
  CHECK(w.players[1] == s.players[0]);
  CHECK(w.active_player == (s.active_player ^ 1));
  CHECK(swap_players(w) == s);
}

TEST_CASE("rules config file matches the built-in pool") {
  Rules loaded = load_rules(std::string(MCG_SOURCE_DIR) + "/configs/rules_default.cfg");
  CHECK(loaded == default_rules());
}

TEST_CASE("load_rules rejects malformed files") {
  CHECK_THROWS_AS(load_rules("/nonexistent/rules.cfg"), ConfigError);
}

TEST_CASE("deck_hash is order-independent") {
  auto d1 = ordered_deck();
  auto d2 = ordered_deck();
  std::reverse(d2.begin(), d2.end());
  CHECK(deck_hash(d1) == deck_hash(d2));
  d2[0] = 5;
  CHECK(deck_hash(d1) != deck_hash(d2));
}
