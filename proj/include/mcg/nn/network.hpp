#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mcg/util/errors.hpp"
#include "mcg/util/rng.hpp"

namespace mcg::nn {

enum class Activation : uint8_t { Linear, Relu, Tanh, Sigmoid, Softmax };

struct LayerSpec {
  enum class Kind : uint8_t { Dense, GatedRecurrent, Dropout };
  Kind kind = Kind::Dense;
  int in_width = 0;   // filled in when the network is assembled
  int out_width = 0;  // Dense: outputs; GatedRecurrent: hidden cells
  Activation activation = Activation::Linear;  // Dense only
  double rate = 0.0;                           // Dropout only

  static LayerSpec dense(int out, Activation a) {
    return {Kind::Dense, 0, out, a, 0.0};
  }
  static LayerSpec gated_recurrent(int hidden) {
    return {Kind::GatedRecurrent, 0, hidden, Activation::Linear, 0.0};
  }
  static LayerSpec dropout(double rate) {
    return {Kind::Dropout, 0, 0, Activation::Linear, rate};
  }

  // Parameter layout (flat, row-major, documented in docs/formats.md):
  //   Dense:          W [out x in] then b [out]
  //   GatedRecurrent: Wx [4H x in], Wh [4H x H], b [4H]; gate row order
  //                   input, forget, candidate, output
  size_t param_count() const {
    switch (kind) {
      case Kind::Dense: return size_t(out_width) * in_width + out_width;
      case Kind::GatedRecurrent:
        return size_t(4 * out_width) * (in_width + out_width + 1);
      case Kind::Dropout: return 0;
    }
    return 0;
  }

  bool operator==(const LayerSpec&) const = default;
};

enum class Mode : uint8_t { Train, Eval };

enum class Loss : uint8_t { BinaryCrossEntropy, CategoricalCrossEntropy };

// Layered differentiable model. Parameters live as IEEE float32 (the model
// file stores them verbatim, so save/load round-trips bit-exactly); all
// arithmetic runs in double.
class Network {
 public:
  // `layers` out_width/rate fields are read, in_width is inferred. Weights
  // are scaled-uniform fan-in init, U(-1,1)/sqrt(fan_in), drawn from a
  // SplitMix64 stream; the recurrent forget-gate bias starts at 1.
  Network(int input_width, std::vector<LayerSpec> layers, uint64_t init_seed);

  // Forward pass. `input` is row-major [rows x width]; sequence networks
  // take rows = batch * steps, sample-major (all steps of sample 0 first),
  // and emit the head applied to the last timestep. Train mode applies
  // inverted dropout with masks drawn from `dropout_seed`.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, int steps = 1,
                          Mode mode = Mode::Eval, uint64_t dropout_seed = 0) const;

  // Loss and d(loss)/d(parameters) for a batch. For BinaryCrossEntropy the
  // head must be a sigmoid Dense of width 1 and `targets` holds 0/1 (or soft)
  // labels; for CategoricalCrossEntropy the head must be a softmax Dense and
  // `targets` holds class indices. Losses are computed from logits with the
  // log-sum-exp / softplus forms. Also returns the batch outputs.
  struct BackwardResult {
    double loss = 0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd output;
  };
  BackwardResult backward(const Eigen::MatrixXd& input, int steps,
                          const Eigen::VectorXd& targets, Loss loss,
                          Mode mode = Mode::Train, uint64_t dropout_seed = 0) const;

  int input_width() const { return input_width_; }
  int output_width() const { return layers_.empty() ? input_width_ : final_dense().out_width; }
  bool recurrent() const;
  const std::vector<LayerSpec>& layers() const { return layers_; }

  const std::vector<float>& parameters() const { return params_; }
  std::vector<float>& parameters() { return params_; }
  size_t parameter_count() const { return params_.size(); }
  size_t layer_offset(int layer) const { return offsets_[layer]; }

  bool operator==(const Network&) const = default;

 private:
  const LayerSpec& final_dense() const;

  int input_width_ = 0;
  std::vector<LayerSpec> layers_;
  std::vector<size_t> offsets_;
  std::vector<float> params_;
};

}  // namespace mcg::nn
