#pragma once

#include <span>
#include <vector>

#include "mcg/nn/network.hpp"

namespace mcg::nn {

struct TrainConfig {
  enum class Optimizer : uint8_t { SGD, Adam };
  Optimizer optimizer = Optimizer::Adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int batch_size = 64;
  int epochs = 5;
  uint64_t seed = 0;
  Loss loss = Loss::BinaryCrossEntropy;
};

// Batch feeder. fill() writes a [n*steps x width] input block (sample-major)
// and one target per sample.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual long size() const = 0;
  virtual int steps() const = 0;
  virtual int width() const = 0;
  virtual void fill(std::span<const long> indices, Eigen::MatrixXd& input,
                    Eigen::VectorXd& targets) const = 0;
};

// Flat in-memory dataset; rows stored as float32.
class DenseDataset : public BatchSource {
 public:
  DenseDataset(int width) : width_(width) {}
  void add(std::span<const float> row, double target) {
    if (static_cast<int>(row.size()) != width_)
      throw ShapeMismatchError("dataset row width mismatch");
    rows_.insert(rows_.end(), row.begin(), row.end());
    targets_.push_back(target);
  }
  long size() const override { return static_cast<long>(targets_.size()); }
  int steps() const override { return 1; }
  int width() const override { return width_; }
  void fill(std::span<const long> indices, Eigen::MatrixXd& input,
            Eigen::VectorXd& targets) const override {
    input.resize(static_cast<long>(indices.size()), width_);
    targets.resize(static_cast<long>(indices.size()));
    for (size_t k = 0; k < indices.size(); ++k) {
      const float* row = rows_.data() + indices[k] * width_;
      for (int c = 0; c < width_; ++c) input(static_cast<long>(k), c) = row[c];
      targets(static_cast<long>(k)) = targets_[indices[k]];
    }
  }
  double target(long i) const { return targets_[i]; }

 private:
  int width_;
  std::vector<float> rows_;
  std::vector<double> targets_;
};

struct TrainResult {
  std::vector<double> epoch_loss;  // mean training loss per epoch
};

// Mini-batch gradient descent over the dataset. Batch order reshuffles each
// epoch from cfg.seed; parameter updates run in double and are stored back
// as float32, so a rerun with the same seed reproduces the model bit for
// bit. Throws DivergedLossError when the loss goes NaN/Inf.
TrainResult train(Network& net, const BatchSource& data, const TrainConfig& cfg);

}  // namespace mcg::nn
