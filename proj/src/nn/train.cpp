#include "mcg/nn/train.hpp"

#include <cmath>

#include "mcg/util/rng.hpp"

namespace mcg::nn {

TrainResult train(Network& net, const BatchSource& data, const TrainConfig& cfg) {
  if (data.size() < 1) throw ConfigError("train: empty dataset");
  if (data.width() != net.input_width())
    throw ShapeMismatchError("train: dataset width " + std::to_string(data.width()) +
                             " vs network width " + std::to_string(net.input_width()));
  if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (cfg.learning_rate <= 0) throw ConfigError("train: learning rate must be > 0");

  TrainResult result;
  const long n = data.size();
  std::vector<long> order(n);
  for (long i = 0; i < n; ++i) order[i] = i;

  std::vector<double> m, v;
  if (cfg.optimizer == TrainConfig::Optimizer::Adam) {
    m.assign(net.parameter_count(), 0.0);
    v.assign(net.parameter_count(), 0.0);
  }
  long adam_t = 0;

  Eigen::MatrixXd input;
  Eigen::VectorXd targets;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    SplitMix64 shuffle_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch)));
    for (long i = n - 1; i >= 1; --i) {
      long j = static_cast<long>(shuffle_rng.next_below(static_cast<uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }

    double loss_sum = 0;
    long samples = 0;
    long batches = (n + cfg.batch_size - 1) / cfg.batch_size;
    for (long b = 0; b < batches; ++b) {
      long begin = b * cfg.batch_size;
      long count = std::min<long>(cfg.batch_size, n - begin);
      std::span<const long> idx(order.data() + begin, static_cast<size_t>(count));
      data.fill(idx, input, targets);

      uint64_t mask_seed =
          derive_seed(cfg.seed, 0x10000ULL * static_cast<uint64_t>(epoch) + b + 1);
      auto back = net.backward(input, data.steps(), targets, cfg.loss, Mode::Train,
                               mask_seed);
      if (!std::isfinite(back.loss))
        throw DivergedLossError("training loss diverged at epoch " +
                                std::to_string(epoch) + ", batch " + std::to_string(b));
      loss_sum += back.loss * count;
      samples += count;

      auto& params = net.parameters();
      if (cfg.optimizer == TrainConfig::Optimizer::SGD) {
        for (size_t k = 0; k < params.size(); ++k)
          params[k] = static_cast<float>(double(params[k]) -
                                         cfg.learning_rate * back.grad(k));
      } else {
        ++adam_t;
        double bc1 = 1.0 - std::pow(cfg.beta1, double(adam_t));
        double bc2 = 1.0 - std::pow(cfg.beta2, double(adam_t));
        for (size_t k = 0; k < params.size(); ++k) {
          double g = back.grad(k);
          m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
          v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
          double update = cfg.learning_rate * (m[k] / bc1) /
                          (std::sqrt(v[k] / bc2) + cfg.adam_eps);
          params[k] = static_cast<float>(double(params[k]) - update);
        }
      }
    }
    result.epoch_loss.push_back(loss_sum / double(samples));
  }
  return result;
}

}  // namespace mcg::nn
