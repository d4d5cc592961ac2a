#pragma once

#include <concepts>

#include "mcg/game/engine.hpp"
#include "mcg/util/static_vector.hpp"

namespace mcg {

// Search code (MCTS, rollout policies, minimax test oracles) is generic over
// a small traits surface so the same implementation runs on the card game
// and on tiny fixture games.
template <typename G>
concept GameTraits = requires(const G g, const typename G::State& s,
                              typename G::State& mut,
                              const typename G::Action& a,
                              StaticVector<typename G::Action, G::kMaxActions>& buf) {
  { G::kMaxActions } -> std::convertible_to<int>;
  { g.legal(s, buf) };
  { g.apply(s, a) } -> std::same_as<typename G::State>;
  { g.step(mut, a) };
  { g.terminal(s) } -> std::convertible_to<bool>;
  { g.winner(s) } -> std::convertible_to<int>;   // valid on terminal states
  { g.to_move(s) } -> std::convertible_to<int>;  // 0 or 1
  { G::index_of(a) } -> std::convertible_to<int>;
};

// The card game seen through the traits surface.
struct CardGame {
  using State = GameState;
  using Action = mcg::Action;
  static constexpr int kMaxActions = kActionCount;

  explicit CardGame(const Rules& r) : rules(&r) {}
  const Rules* rules;

  void legal(const State& s, StaticVector<Action, kMaxActions>& out) const {
    legal_actions(*rules, s, out);
  }
  State apply(const State& s, Action a) const {
    State next = s;
    step_unchecked(*rules, next, a);
    return next;
  }
  void step(State& s, Action a) const { step_unchecked(*rules, s, a); }
  bool terminal(const State& s) const { return s.outcome != Outcome::InProgress; }
  int winner(const State& s) const { return s.outcome == Outcome::Player0Wins ? 0 : 1; }
  int to_move(const State& s) const { return s.active_player; }
  static int index_of(Action a) { return a.index; }
};

static_assert(GameTraits<CardGame>);

}  // namespace mcg
