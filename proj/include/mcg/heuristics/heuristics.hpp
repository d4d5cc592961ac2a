#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcg/agents/game_traits.hpp"
#include "mcg/util/rng.hpp"

namespace mcg {

// Heuristic evaluation contract: win probability of `perspective` in a
// state, always finite and in [0, 1]. Implementations must be safe for
// concurrent read-only use (weights frozen during search).
template <typename State>
class StateEvaluator {
 public:
  virtual ~StateEvaluator() = default;

  virtual double evaluate(const State& s, int perspective) const = 0;

  // Batched variant; model-backed evaluators override this with one matrix
  // product per call, which is what makes biased rollouts affordable.
  virtual void evaluate_batch(const State* states, const int* perspectives, int n,
                              double* out) const {
    for (int i = 0; i < n; ++i) out[i] = evaluate(states[i], perspectives[i]);
  }
};

// Action value: value of the successor from the mover's point of view.
template <GameTraits G>
double evaluate_action(const G& g, const StateEvaluator<typename G::State>& h,
                       const typename G::State& s, typename G::Action a) {
  return h.evaluate(g.apply(s, a), g.to_move(s));
}

// Values for a whole action list in one batched call.
template <GameTraits G>
void evaluate_actions(const G& g, const StateEvaluator<typename G::State>& h,
                      const typename G::State& s,
                      std::span<const typename G::Action> actions, double* out) {
  StaticVector<typename G::State, G::kMaxActions> successors;
  StaticVector<int, G::kMaxActions> perspectives;
  int mover = g.to_move(s);
  for (const auto& a : actions) {
    successors.push_back(g.apply(s, a));
    perspectives.push_back(mover);
  }
  h.evaluate_batch(successors.begin(), perspectives.begin(), successors.size(), out);
}

enum class SimBiasMode : uint8_t { EpsilonGreedy, Boltzmann };

struct SimulationBias {
  SimBiasMode mode = SimBiasMode::EpsilonGreedy;
  double epsilon = 0.7;      // EpsilonGreedy: P(pick the heuristic argmax)
  double temperature = 0.5;  // Boltzmann: softmax temperature, > 0
};

// The four augmentation schemes, any subset enabled. Neutral settings
// (w = 0, ordering off, epsilon = 0, p = 0) reproduce plain MCTS decisions
// byte-for-byte under a shared seed: the neutral code paths consume the
// random stream exactly like the unaugmented ones.
struct AugmentConfig {
  std::optional<double> tree_policy_bias_w;       // progressive-bias weight
  bool move_ordering = false;
  std::optional<SimulationBias> simulation_bias;
  std::optional<double> early_cutoff_p;           // per-step stop probability

  bool wants_priors() const {
    return move_ordering || (tree_policy_bias_w && *tree_policy_bias_w != 0.0);
  }
  bool any() const {
    return tree_policy_bias_w || move_ordering || simulation_bias || early_cutoff_p;
  }
};

// Progressive-bias selection score (Chaslot's formulation): plain UCT plus a
// heuristic term that decays as the action accumulates visits.
inline double progressive_bias_score(double q, int n_s, int n_sa, double c, double h,
                                     double w) {
  return q + c * std::sqrt(std::log(static_cast<double>(n_s)) / n_sa) +
         w * h / (n_sa + 1);
}

// Stable descending sort of `actions` by heuristic action value; the search
// expands children in this order.
template <GameTraits G>
StaticVector<typename G::Action, G::kMaxActions> order_moves(
    const G& g, const typename G::State& s,
    const StaticVector<typename G::Action, G::kMaxActions>& actions,
    const StateEvaluator<typename G::State>& h) {
  double values[G::kMaxActions];
  evaluate_actions(g, h, s, std::span(actions.begin(), actions.end()), values);

  StaticVector<typename G::Action, G::kMaxActions> out = actions;
  int order[G::kMaxActions];
  for (int i = 0; i < actions.size(); ++i) order[i] = i;
  std::stable_sort(order, order + actions.size(),
                   [&](int a, int b) { return values[a] > values[b]; });
  for (int i = 0; i < actions.size(); ++i) out[i] = actions[order[i]];
  return out;
}

// Softmax of action values at temperature tau; sums to 1.
inline std::vector<double> boltzmann_probs(std::span<const double> values, double tau) {
  double vmax = values[0];
  for (double v : values) vmax = std::max(vmax, v);
  std::vector<double> p(values.size());
  double z = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    p[i] = std::exp((values[i] - vmax) / tau);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

// One simulation-phase action choice.
//   EpsilonGreedy: with probability epsilon the heuristic argmax (ties by
//   lowest action index), otherwise uniform. epsilon = 0 degenerates to the
//   plain uniform step and draws exactly one random number.
//   Boltzmann: pseudo-roulette over softmax(action values / tau).
template <GameTraits G>
typename G::Action biased_rollout_step(
    const G& g, const typename G::State& s, const SimulationBias& bias,
    const StateEvaluator<typename G::State>& h, SplitMix64& rng) {
  StaticVector<typename G::Action, G::kMaxActions> actions;
  g.legal(s, actions);

  if (bias.mode == SimBiasMode::EpsilonGreedy) {
    if (bias.epsilon > 0.0 && rng.next_double() < bias.epsilon) {
      double values[G::kMaxActions];
      evaluate_actions(g, h, s, std::span(actions.begin(), actions.end()), values);
      int best = 0;
      for (int i = 1; i < actions.size(); ++i)
        if (values[i] > values[best]) best = i;
      return actions[best];
    }
    return actions[static_cast<int>(rng.next_below(actions.size()))];
  }

  double values[G::kMaxActions];
  evaluate_actions(g, h, s, std::span(actions.begin(), actions.end()), values);
  std::vector<double> probs =
      boltzmann_probs(std::span(values, static_cast<size_t>(actions.size())),
                      bias.temperature);
  double u = rng.next_double();
  double acc = 0;
  for (int i = 0; i < actions.size(); ++i) {
    acc += probs[i];
    if (u < acc) return actions[i];
  }
  return actions[actions.size() - 1];  // u landed on accumulated rounding
}

// Full simulation with optional policy bias and early cutoff. Returns a
// value in [0, 1] from `root_player`'s point of view: the true outcome when
// the playout reaches a terminal state, or the heuristic evaluation of the
// current state when the cutoff fires first. With p = 0 and no bias this is
// byte-compatible with playout_random on the same stream.
template <GameTraits G>
double simulate_rollout(const G& g, typename G::State s, int root_player,
                        const SimulationBias* bias, double cutoff_p,
                        const StateEvaluator<typename G::State>* h, SplitMix64& rng,
                        uint64_t* steps_taken = nullptr) {
  StaticVector<typename G::Action, G::kMaxActions> actions;
  while (!g.terminal(s)) {
    if (cutoff_p > 0.0 && rng.next_double() < cutoff_p)
      return h->evaluate(s, root_player);
    if (steps_taken) ++*steps_taken;
    if (bias) {
      g.step(s, biased_rollout_step(g, s, *bias, *h, rng));
    } else {
      g.legal(s, actions);
      g.step(s, actions[static_cast<int>(rng.next_below(actions.size()))]);
    }
  }
  return g.winner(s) == root_player ? 1.0 : 0.0;
}

// Spec-shaped wrapper: uniform policy with probabilistic early termination.
template <GameTraits G>
double rollout_with_cutoff(const G& g, const typename G::State& s, double p,
                           const StateEvaluator<typename G::State>& h, int root_player,
                           SplitMix64& rng) {
  return simulate_rollout(g, s, root_player, nullptr, p, &h, rng);
}

}  // namespace mcg
