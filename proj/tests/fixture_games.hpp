#pragma once

// Tiny deterministic two-player games for search correctness tests, plus an
// exhaustive minimax oracle. Shared between the unit tests and the
// acceptance suite.

#include <array>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "mcg/agents/game_traits.hpp"

namespace mcg::fixtures {

// Table-driven game tree: explicit nodes, up to 3 actions per ply.
// Hand-built payoffs; used for the depth-2 solved mini-game.
struct TreeGame {
  struct NodeDef {
    int to_move = 0;
    bool terminal = false;
    int winner = -1;
    std::array<int, 3> child = {-1, -1, -1};
  };

  using State = int;  // node id
  using Action = int; // child slot 0..2
  static constexpr int kMaxActions = 3;

  std::vector<NodeDef> nodes;

  void legal(const State& s, StaticVector<Action, kMaxActions>& out) const {
    out.clear();
    for (int i = 0; i < 3; ++i)
      if (nodes[s].child[i] >= 0) out.push_back(i);
  }
  State apply(const State& s, Action a) const { return nodes[s].child[a]; }
  void step(State& s, Action a) const { s = apply(s, a); }
  bool terminal(const State& s) const { return nodes[s].terminal; }
  int winner(const State& s) const { return nodes[s].winner; }
  int to_move(const State& s) const { return nodes[s].to_move; }
  static int index_of(Action a) { return a; }
};

// Depth-2 game, 3 actions per ply. Player 0 moves at the root; player 1
// replies adversarially. Only root action 1 survives best play by player 1.
inline TreeGame depth2_game() {
  TreeGame g;
  g.nodes.resize(13);
  auto leaf = [&](int id, int winner) {
    g.nodes[id].terminal = true;
    g.nodes[id].winner = winner;
    return id;
  };
  g.nodes[0].to_move = 0;
  g.nodes[0].child = {1, 2, 3};
  g.nodes[1].to_move = 1;
  g.nodes[1].child = {leaf(4, 1), leaf(5, 0), leaf(6, 0)};
  g.nodes[2].to_move = 1;
  g.nodes[2].child = {leaf(7, 0), leaf(8, 0), leaf(9, 0)};
  g.nodes[3].to_move = 1;
  g.nodes[3].child = {leaf(10, 1), leaf(11, 1), leaf(12, 0)};
  return g;
}

// Three-pile Nim, take 1..3 from one pile, taking the last object wins.
// Piles (3,4,5) give 240 states, well under the 500-state fixture budget.
struct NimGame {
  struct State {
    std::array<int8_t, 3> piles;
    int8_t to_move;
    bool operator<(const State& o) const {
      return std::tie(piles[0], piles[1], piles[2], to_move) <
             std::tie(o.piles[0], o.piles[1], o.piles[2], o.to_move);
    }
    bool operator==(const State& o) const = default;
  };
  using Action = int;  // pile * 3 + (take - 1)
  static constexpr int kMaxActions = 9;

  void legal(const State& s, StaticVector<Action, kMaxActions>& out) const {
    out.clear();
    for (int pile = 0; pile < 3; ++pile)
      for (int take = 1; take <= std::min<int>(3, s.piles[pile]); ++take)
        out.push_back(pile * 3 + take - 1);
  }
  State apply(const State& s, Action a) const {
    State n = s;
    n.piles[a / 3] = static_cast<int8_t>(n.piles[a / 3] - (a % 3 + 1));
    n.to_move ^= 1;
    return n;
  }
  void step(State& s, Action a) const { s = apply(s, a); }
  bool terminal(const State& s) const {
    return s.piles[0] + s.piles[1] + s.piles[2] == 0;
  }
  // The player who took the last object (the one not to move) wins.
  int winner(const State& s) const { return s.to_move ^ 1; }
  int to_move(const State& s) const { return s.to_move; }
  static int index_of(Action a) { return a; }
};

static_assert(GameTraits<TreeGame>);
static_assert(GameTraits<NimGame>);

// Exhaustive memoized minimax. value(s) == 1 iff the player to move wins
// with optimal play. An action is optimal iff it reaches a state whose value
// (for the opponent) complements value(s).
template <GameTraits G>
class MinimaxOracle {
 public:
  explicit MinimaxOracle(const G& g) : g_(g) {}

  int value(const typename G::State& s) {
    if (g_.terminal(s)) return g_.winner(s) == g_.to_move(s) ? 1 : 0;
    auto it = memo_.find(s);
    if (it != memo_.end()) return it->second;
    StaticVector<typename G::Action, G::kMaxActions> actions;
    g_.legal(s, actions);
    int best = 0;
    for (const auto& a : actions) best = std::max(best, 1 - value(g_.apply(s, a)));
    memo_.emplace(s, best);
    return best;
  }

  bool is_optimal(const typename G::State& s, typename G::Action a) {
    return 1 - value(g_.apply(s, a)) == value(s);
  }

 private:
  G g_;
  std::map<typename G::State, int> memo_;
};

// All reachable states (BFS from the start state).
template <GameTraits G>
std::vector<typename G::State> reachable_states(const G& g,
                                                const typename G::State& start) {
  std::vector<typename G::State> out{start};
  std::map<typename G::State, bool> seen;
  seen[start] = true;
  for (size_t i = 0; i < out.size(); ++i) {
    if (g.terminal(out[i])) continue;
    StaticVector<typename G::Action, G::kMaxActions> actions;
    g.legal(out[i], actions);
    for (const auto& a : actions) {
      auto next = g.apply(out[i], a);
      if (!seen[next]) {
        seen[next] = true;
        out.push_back(next);
      }
    }
  }
  return out;
}

}  // namespace mcg::fixtures
