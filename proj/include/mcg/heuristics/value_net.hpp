#pragma once

#include <Eigen/Dense>

#include "mcg/features/encoder.hpp"
#include "mcg/heuristics/heuristics.hpp"
#include "mcg/nn/network.hpp"

namespace mcg {

// Value-network heuristic over game states. Wraps a dense sigmoid network
// behind the evaluator contract with a float32 batched inference path
// (weights copied out of the model once); biased rollouts hit this millions
// of times per move, so the whole candidate set is evaluated with one GEMM
// per layer. Terminal states short-circuit to their true outcome.
class ValueNetEvaluator : public StateEvaluator<GameState> {
 public:
  // Throws EncodingMismatchError when the model width does not match the
  // encoder, ShapeMismatchError when the topology is not dense + sigmoid(1).
  ValueNetEvaluator(const Rules& rules, const Encoder& encoder, const nn::Network& net);

  double evaluate(const GameState& s, int perspective) const override;
  void evaluate_batch(const GameState* states, const int* perspectives, int n,
                      double* out) const override;

 private:
  const Rules* rules_;
  const Encoder* encoder_;
  std::vector<Eigen::MatrixXf> weights_;  // [out x in] per dense layer
  std::vector<Eigen::VectorXf> biases_;
  std::vector<nn::Activation> activations_;
};

}  // namespace mcg
