#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mcg/agents/game_traits.hpp"
#include "mcg/heuristics/heuristics.hpp"
#include "mcg/util/errors.hpp"
#include "mcg/util/rng.hpp"

namespace mcg {

struct MctsConfig {
  int iterations = 1000;
  double exploration_c = 1.4142135623730951;  // sqrt(2), swept in experiments
  uint64_t seed = 0;
  AugmentConfig augment;

  // Final-move rule after the search budget: robust child (highest visit
  // count) by default; max-Q kept as an option.
  enum class FinalMove : uint8_t { RobustChild, MaxQ };
  FinalMove final_move = FinalMove::RobustChild;
};

// Per-action statistics entry of a search node, as exposed to tests and to
// the standalone selection operation below.
struct ActionStats {
  int action_index = 0;
  double q = 0;       // running mean result in [0,1] from the node mover's view
  uint32_t n = 0;     // N(s,a)
  double prior = 0;   // heuristic action value H(s,a); 0 when unused
};

namespace detail {

// Shared selection loop. `bias_w` engages the progressive-bias score.
// Unvisited entries take absolute priority, ordered by `order` position
// (expansion order); visited ties break on the lowest action index.
template <typename GetStats>
int select_index(int count, GetStats get, uint32_t n_s, double c,
                 std::optional<double> bias_w) {
  if (count == 0) throw EmptyNodeError("selection over an empty action set");
  int best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  int best_action = std::numeric_limits<int>::max();
  for (int i = 0; i < count; ++i) {
    ActionStats st = get(i);
    if (st.n == 0) return i;  // +infinity priority, first in expansion order
    double score =
        bias_w ? progressive_bias_score(st.q, static_cast<int>(n_s),
                                        static_cast<int>(st.n), c, st.prior, *bias_w)
               : st.q + c * std::sqrt(std::log(static_cast<double>(n_s)) / st.n);
    if (score > best_score ||
        (score == best_score && st.action_index < best_action)) {
      best = i;
      best_score = score;
      best_action = st.action_index;
    }
  }
  return best;
}

}  // namespace detail

// Standalone UCT selection over a stats table (argmax of
// Q(s,a) + c*sqrt(ln N(s) / N(s,a))); with `bias_w`, the progressive-bias
// variant. Returns the position of the winner within `stats`.
inline int uct_select(std::span<const ActionStats> stats, uint32_t n_s, double c,
                      std::optional<double> bias_w = std::nullopt) {
  return detail::select_index(
      static_cast<int>(stats.size()), [&](int i) { return stats[i]; }, n_s, c, bias_w);
}

// One-tree, single-threaded MCTS implementing the four phases: UCT
// selection, single-child expansion, (optionally biased / cut-off) random
// simulation, and mean back-propagation. Rewards are {0,1} from the
// perspective of the player to move at each node, so opponent plies
// maximize their own results.
template <GameTraits G>
class MctsSearch {
 public:
  using State = typename G::State;
  using Action = typename G::Action;

  struct Child {
    Action action;
    int32_t node = -1;  // index into nodes_, -1 until expanded
    uint32_t n = 0;
    double w = 0;       // sum of back-propagated results (mover perspective)
    double prior = 0;
    double q() const { return n ? w / n : 0.0; }
  };

  struct Node {
    State state;
    uint32_t visits = 0;       // N(s): times an action was chosen here
    int32_t child_begin = 0;
    int16_t child_count = -1;  // -1 until stats are created
    int16_t next_unexpanded = 0;
  };

  struct Counters {
    uint64_t iterations = 0;
    uint64_t simulations = 0;     // rollouts + terminal evaluations
    uint64_t rollout_steps = 0;
  };

  MctsSearch(const G& game, const MctsConfig& cfg,
             const StateEvaluator<State>* heuristic = nullptr)
      : game_(game), cfg_(cfg), heuristic_(heuristic) {
    if (cfg_.iterations < 1) throw ConfigError("mcts: iterations must be >= 1");
    if (cfg_.exploration_c < 0) throw ConfigError("mcts: exploration_c must be >= 0");
    if (cfg_.augment.wants_priors() && !heuristic_)
      throw ConfigError("mcts: augmentation needs a heuristic");
    if ((cfg_.augment.simulation_bias || cfg_.augment.early_cutoff_p) && !heuristic_)
      throw ConfigError("mcts: augmentation needs a heuristic");
  }

  // Runs cfg.iterations iterations from `root` using the caller's stream.
  Action choose(const State& root, SplitMix64& rng) {
    start(root);
    for (int i = 0; i < cfg_.iterations; ++i) iterate(rng);
    return best_move();
  }

  // Convenience overload owning a stream seeded from the config.
  Action choose(const State& root) {
    SplitMix64 rng(cfg_.seed);
    return choose(root, rng);
  }

  // Incremental interface (used by tests that inspect the tree mid-search).
  void start(const State& root) {
    nodes_.clear();
    children_.clear();
    counters_ = {};
    nodes_.push_back(Node{root});
    root_player_ = game_.to_move(root);
  }

  void iterate(SplitMix64& rng) {
    ++counters_.iterations;
    path_.clear();
    int cur = 0;
    double value = 0;
    for (;;) {
      if (game_.terminal(nodes_[cur].state)) {
        ++counters_.simulations;
        value = game_.winner(nodes_[cur].state) == root_player_ ? 1.0 : 0.0;
        break;
      }
      ensure_children(cur);
      Node& nd = nodes_[cur];
      if (nd.next_unexpanded < nd.child_count) {
        int slot = nd.next_unexpanded++;
        Child& ch = children_[nd.child_begin + slot];
        ch.node = static_cast<int32_t>(nodes_.size());
        nodes_.push_back(Node{game_.apply(nd.state, ch.action)});
        path_.push_back({cur, slot});
        ++counters_.simulations;
        value = simulate(nodes_.back().state, rng);
        break;
      }
      int slot = select_child(cur);
      path_.push_back({cur, slot});
      cur = children_[nodes_[cur].child_begin + slot].node;
    }
    // Back-propagation: every node on the path counts one more visit and the
    // chosen edge absorbs the result from its mover's perspective.
    for (const auto& [node_idx, slot] : path_) {
      Node& nd = nodes_[node_idx];
      Child& ch = children_[nd.child_begin + slot];
      nd.visits += 1;
      ch.n += 1;
      int mover = game_.to_move(nd.state);
      ch.w += (mover == root_player_) ? value : 1.0 - value;
    }
  }

  Action best_move() const {
    const Node& root = nodes_[0];
    if (root.child_count <= 0) throw EmptyNodeError("mcts: no expanded root action");
    int best = -1;
    for (int i = 0; i < root.child_count; ++i) {
      const Child& ch = children_[root.child_begin + i];
      if (best < 0) {
        if (ch.n > 0) best = i;
        continue;
      }
      const Child& b = children_[root.child_begin + best];
      bool better;
      if (cfg_.final_move == MctsConfig::FinalMove::RobustChild) {
        better = ch.n > b.n || (ch.n == b.n && G::index_of(ch.action) < G::index_of(b.action));
      } else {
        better = ch.q() > b.q() || (ch.q() == b.q() && G::index_of(ch.action) < G::index_of(b.action));
      }
      if (ch.n > 0 && better) best = i;
    }
    if (best < 0) throw EmptyNodeError("mcts: no visited root action");
    return children_[nodes_[0].child_begin + best].action;
  }

  // Introspection for tests and reports.
  const Counters& counters() const { return counters_; }
  uint32_t root_visits() const { return nodes_[0].visits; }
  std::vector<ActionStats> root_stats() const {
    std::vector<ActionStats> out;
    const Node& root = nodes_[0];
    for (int i = 0; i < std::max<int>(root.child_count, 0); ++i) {
      const Child& ch = children_[root.child_begin + i];
      out.push_back({G::index_of(ch.action), ch.q(), ch.n, ch.prior});
    }
    return out;
  }

 private:
  void ensure_children(int node_idx) {
    Node& nd = nodes_[node_idx];
    if (nd.child_count >= 0) return;
    StaticVector<Action, G::kMaxActions> actions;
    game_.legal(nd.state, actions);
    const AugmentConfig& aug = cfg_.augment;
    double priors[G::kMaxActions] = {};
    if (aug.wants_priors()) {
      evaluate_actions(game_, *heuristic_, nd.state,
                       std::span(actions.begin(), actions.end()), priors);
      if (aug.move_ordering) {
        int order[G::kMaxActions];
        for (int i = 0; i < actions.size(); ++i) order[i] = i;
        std::stable_sort(order, order + actions.size(),
                         [&](int a, int b) { return priors[a] > priors[b]; });
        StaticVector<Action, G::kMaxActions> sorted;
        double sorted_priors[G::kMaxActions];
        for (int i = 0; i < actions.size(); ++i) {
          sorted.push_back(actions[order[i]]);
          sorted_priors[i] = priors[order[i]];
        }
        actions = sorted;
        std::copy(sorted_priors, sorted_priors + actions.size(), priors);
      }
    }
    nd.child_begin = static_cast<int32_t>(children_.size());
    nd.child_count = static_cast<int16_t>(actions.size());
    nd.next_unexpanded = 0;
    for (int i = 0; i < actions.size(); ++i) {
      Child ch;
      ch.action = actions[i];
      ch.prior = priors[i];
      children_.push_back(ch);
    }
  }

  int select_child(int node_idx) {
    const Node& nd = nodes_[node_idx];
    std::optional<double> bias_w;
    if (cfg_.augment.tree_policy_bias_w && *cfg_.augment.tree_policy_bias_w != 0.0)
      bias_w = cfg_.augment.tree_policy_bias_w;
    return detail::select_index(
        nd.child_count,
        [&](int i) {
          const Child& ch = children_[nd.child_begin + i];
          return ActionStats{G::index_of(ch.action), ch.q(), ch.n, ch.prior};
        },
        nd.visits, cfg_.exploration_c, bias_w);
  }

  double simulate(const State& from, SplitMix64& rng) {
    const AugmentConfig& aug = cfg_.augment;
    // An epsilon of exactly 0 means uniform steps; route through the plain
    // path so the stream matches unaugmented search draw for draw.
    const SimulationBias* bias = nullptr;
    if (aug.simulation_bias &&
        !(aug.simulation_bias->mode == SimBiasMode::EpsilonGreedy &&
          aug.simulation_bias->epsilon == 0.0))
      bias = &*aug.simulation_bias;
    double cutoff = aug.early_cutoff_p.value_or(0.0);
    return simulate_rollout(game_, from, root_player_, bias, cutoff, heuristic_, rng,
                            &counters_.rollout_steps);
  }

  G game_;
  MctsConfig cfg_;
  const StateEvaluator<State>* heuristic_;
  std::vector<Node> nodes_;
  std::vector<Child> children_;
  std::vector<std::pair<int, int>> path_;
  Counters counters_{};
  int root_player_ = 0;
};

}  // namespace mcg
