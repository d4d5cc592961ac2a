#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "mcg/nn/network.hpp"
#include "mcg/nn/serialize.hpp"
#include "mcg/nn/train.hpp"

using namespace mcg;
using namespace mcg::nn;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Central finite differences through the loss, perturbing the stored float32
// parameters and measuring the realized step in double. Independent of the
// analytic backward path.
double finite_difference_max_rel_error(Network& net, const MatrixXd& x, int steps,
                                       const VectorXd& y, Loss loss,
                                       uint64_t mask_seed = 0, Mode mode = Mode::Eval) {
  auto loss_at = [&]() {
    return net.backward(x, steps, y, loss, mode, mask_seed).loss;
  };
  auto analytic = net.backward(x, steps, y, loss, mode, mask_seed);

  double max_rel = 0;
  auto& params = net.parameters();
  for (size_t k = 0; k < params.size(); ++k) {
    const float saved = params[k];
    const double delta = 1e-5 * std::max(1.0, std::abs(double(saved)));
    params[k] = static_cast<float>(double(saved) + delta);
    double up = double(params[k]);
    double loss_up = loss_at();
    params[k] = static_cast<float>(double(saved) - delta);
    double down = double(params[k]);
    double loss_down = loss_at();
    params[k] = saved;

    double numeric = (loss_up - loss_down) / (up - down);
    double denom = std::max({std::abs(numeric), std::abs(analytic.grad(k)), 1e-6});
    max_rel = std::max(max_rel, std::abs(numeric - analytic.grad(k)) / denom);
  }
  return max_rel;
}

MatrixXd random_matrix(long rows, long cols, SplitMix64& rng) {
  MatrixXd m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = rng.next_double() * 2 - 1;
  return m;
}

std::string temp_path(const char* name) {
  return (std::filesystem::path(MCG_BINARY_DIR) / name).string();
}

}  // namespace

TEST_CASE("zero-weight nets produce the neutral outputs") {
  Network value(5, {LayerSpec::dense(1, Activation::Sigmoid)}, 1);
  std::fill(value.parameters().begin(), value.parameters().end(), 0.0f);
  MatrixXd x = MatrixXd::Random(4, 5);
  MatrixXd out = value.forward(x);
  for (long b = 0; b < 4; ++b) CHECK(out(b, 0) == 0.5);

  Network policy(5, {LayerSpec::dense(42, Activation::Softmax)}, 1);
  std::fill(policy.parameters().begin(), policy.parameters().end(), 0.0f);
  MatrixXd probs = policy.forward(x);
  for (long c = 0; c < 42; ++c) CHECK(probs(0, c) == doctest::Approx(1.0 / 42).epsilon(1e-12));
}

TEST_CASE("hand-computed dense forward: sigma(2) through weights [1,-1]") {
  Network net(2, {LayerSpec::dense(1, Activation::Sigmoid)}, 1);
  net.parameters() = {1.0f, -1.0f, 0.0f};  // W = [1,-1], b = 0
  MatrixXd x(1, 2);
  x << 3.0, 1.0;
  double out = net.forward(x)(0, 0);
  CHECK(out == doctest::Approx(0.8807970779778823).epsilon(1e-6));
}

TEST_CASE("BCE gradient at output 0.5 with target 0.5 has zero bias gradient") {
  Network net(3, {LayerSpec::dense(1, Activation::Sigmoid)}, 1);
  std::fill(net.parameters().begin(), net.parameters().end(), 0.0f);
  MatrixXd x = MatrixXd::Random(6, 3);
  VectorXd y = VectorXd::Constant(6, 0.5);
  auto back = net.backward(x, 1, y, Loss::BinaryCrossEntropy, Mode::Eval);
  CHECK(back.grad(net.parameter_count() - 1) == 0.0);  // output bias slot
}

TEST_CASE("gradient check: dense stacks across 20 random configurations") {
  SplitMix64 cfg_rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    int in = 2 + int(cfg_rng.next_below(6));
    int hidden = 1 + int(cfg_rng.next_below(8));
    Activation acts[] = {Activation::Relu, Activation::Tanh, Activation::Sigmoid,
                         Activation::Linear};
    Activation act = acts[cfg_rng.next_below(4)];
    bool cce = trial % 3 == 0;
    int out = cce ? 2 + int(cfg_rng.next_below(4)) : 1;

    std::vector<LayerSpec> layers = {LayerSpec::dense(hidden, act)};
    if (cce)
      layers.push_back(LayerSpec::dense(out, Activation::Softmax));
    else
      layers.push_back(LayerSpec::dense(1, Activation::Sigmoid));
    Network net(in, layers, derive_seed(7, trial));

    SplitMix64 data_rng(derive_seed(11, trial));
    MatrixXd x = random_matrix(4, in, data_rng);
    VectorXd y(4);
    for (int b = 0; b < 4; ++b)
      y(b) = cce ? double(data_rng.next_below(out)) : double(data_rng.next_below(2));

    double err = finite_difference_max_rel_error(
        net, x, 1, y, cce ? Loss::CategoricalCrossEntropy : Loss::BinaryCrossEntropy);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("gradient check: gated recurrent layer through time") {
  SplitMix64 cfg_rng(123);
  for (int trial = 0; trial < 6; ++trial) {
    int in = 2 + int(cfg_rng.next_below(4));
    int hidden = 2 + int(cfg_rng.next_below(4));
    int steps = 3;
    bool stacked = trial % 2 == 1;

    std::vector<LayerSpec> layers;
    layers.push_back(LayerSpec::gated_recurrent(hidden));
    if (stacked) layers.push_back(LayerSpec::gated_recurrent(hidden));
    layers.push_back(LayerSpec::dense(3, Activation::Softmax));
    Network net(in, layers, derive_seed(17, trial));

    SplitMix64 data_rng(derive_seed(31, trial));
    MatrixXd x = random_matrix(2 * steps, in, data_rng);  // batch of 2
    VectorXd y(2);
    y << double(data_rng.next_below(3)), double(data_rng.next_below(3));

    double err = finite_difference_max_rel_error(net, x, steps, y,
                                                 Loss::CategoricalCrossEntropy);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("gradient check: dropout with a fixed mask seed") {
  Network net(4, {LayerSpec::dense(8, Activation::Tanh), LayerSpec::dropout(0.4),
                  LayerSpec::dense(1, Activation::Sigmoid)},
              3);
  SplitMix64 rng(5);
  MatrixXd x = random_matrix(4, 4, rng);
  VectorXd y(4);
  y << 1, 0, 1, 0;
  double err = finite_difference_max_rel_error(net, x, 1, y, Loss::BinaryCrossEntropy,
                                               /*mask_seed=*/42, Mode::Train);
  CHECK(err < 1e-4);
}

TEST_CASE("softmax rows sum to one, sigmoid stays strictly inside (0,1)") {
  Network net(6, {LayerSpec::dense(10, Activation::Tanh),
                  LayerSpec::dense(7, Activation::Softmax)},
              21);
  SplitMix64 rng(2);
  MatrixXd x = random_matrix(32, 6, rng) * 5.0;
  MatrixXd p = net.forward(x);
  for (long r = 0; r < p.rows(); ++r)
    CHECK(std::abs(p.row(r).sum() - 1.0) < 1e-6);

  Network vnet(6, {LayerSpec::dense(1, Activation::Sigmoid)}, 4);
  MatrixXd v = vnet.forward(x);
  for (long r = 0; r < v.rows(); ++r) {
    CHECK(v(r, 0) > 0.0);
    CHECK(v(r, 0) < 1.0);
  }
}

TEST_CASE("dropout: identity in eval mode, mean-preserving in train mode") {
  Network net(8, {LayerSpec::dropout(0.3), LayerSpec::dense(1, Activation::Sigmoid)}, 9);
  SplitMix64 rng(7);
  MatrixXd x = random_matrix(4, 8, rng);
  CHECK(net.forward(x, 1, Mode::Eval) == net.forward(x, 1, Mode::Eval));

  // Inverted dropout keeps the expected activation: average many masks.
  MatrixXd ones = MatrixXd::Constant(1, 8, 1.0);
  Network drop_only(8, {LayerSpec::dropout(0.3), LayerSpec::dense(8, Activation::Linear)}, 1);
  // Make the dense an identity so we observe the mask directly.
  auto& p = drop_only.parameters();
  std::fill(p.begin(), p.end(), 0.0f);
  for (int i = 0; i < 8; ++i) p[size_t(i) * 8 + i] = 1.0f;

  double sum = 0;
  const int kMasks = 10000;
  for (int i = 0; i < kMasks; ++i)
    sum += drop_only.forward(ones, 1, Mode::Train, derive_seed(55, i)).sum();
  double mean = sum / (kMasks * 8.0);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("memorization: a small net drives BCE below 0.01") {
  SplitMix64 rng(13);
  DenseDataset data(6);
  for (int i = 0; i < 10; ++i) {
    std::vector<float> row(6);
    for (auto& v : row) v = static_cast<float>(rng.next_double() * 2 - 1);
    data.add(row, double(rng.next_below(2)));
  }
  Network net(6, {LayerSpec::dense(32, Activation::Relu),
                  LayerSpec::dense(32, Activation::Relu),
                  LayerSpec::dense(1, Activation::Sigmoid)},
              77);
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.batch_size = 10;
  cfg.learning_rate = 3e-3;
  cfg.seed = 5;
  TrainResult res = train(net, data, cfg);
  CHECK(res.epoch_loss.back() < 0.01);
}

TEST_CASE("linearly separable blobs reach >95% held-out accuracy") {
  SplitMix64 rng(17);
  DenseDataset train_data(2), test_data(2);
  auto sample = [&](DenseDataset& ds, int n) {
    for (int i = 0; i < n; ++i) {
      int label = int(rng.next_below(2));
      float cx = label ? 2.0f : -2.0f;
      std::vector<float> row = {cx + float(rng.next_double() * 2 - 1),
                                cx + float(rng.next_double() * 2 - 1)};
      ds.add(row, label);
    }
  };
  sample(train_data, 400);
  sample(test_data, 200);

  Network net(2, {LayerSpec::dense(16, Activation::Relu),
                  LayerSpec::dense(1, Activation::Sigmoid)},
              3);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 32;
  cfg.learning_rate = 5e-3;
  TrainResult res = train(net, train_data, cfg);
  CHECK(res.epoch_loss.size() == 30);

  int correct = 0;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<long> idx(test_data.size());
  for (long i = 0; i < test_data.size(); ++i) idx[i] = i;
  test_data.fill(idx, x, y);
  MatrixXd out = net.forward(x);
  for (long i = 0; i < out.rows(); ++i)
    correct += (out(i, 0) > 0.5) == (y(i) > 0.5);
  CHECK(double(correct) / double(test_data.size()) > 0.95);
}

TEST_CASE("epochs = 0 leaves the network bit-identical") {
  Network net(4, {LayerSpec::dense(8, Activation::Relu),
                  LayerSpec::dense(1, Activation::Sigmoid)},
              11);
  std::vector<float> before = net.parameters();
  DenseDataset data(4);
  data.add(std::vector<float>{1, 2, 3, 4}, 1.0);
  TrainConfig cfg;
  cfg.epochs = 0;
  train(net, data, cfg);
  CHECK(net.parameters() == before);
}

TEST_CASE("diverged loss raises with diagnostics") {
  SplitMix64 rng(23);
  DenseDataset data(3);
  for (int i = 0; i < 64; ++i) {
    std::vector<float> row = {float(rng.next_double() * 1e3), float(rng.next_double()),
                              float(rng.next_double())};
    data.add(row, double(rng.next_below(2)));
  }
  Network net(3, {LayerSpec::dense(16, Activation::Relu),
                  LayerSpec::dense(1, Activation::Sigmoid)},
              2);
  TrainConfig cfg;
  cfg.optimizer = TrainConfig::Optimizer::SGD;
  cfg.learning_rate = 1e18;  // guaranteed blow-up
  cfg.epochs = 50;
  CHECK_THROWS_AS(train(net, data, cfg), DivergedLossError);
}

TEST_CASE("save/load round-trips bit-exactly and preserves forward output") {
  Network net(7, {LayerSpec::gated_recurrent(5), LayerSpec::dropout(0.2),
                  LayerSpec::dense(42, Activation::Softmax)},
              31);
  std::string path = temp_path("roundtrip.mcgnet");
  save_network(net, path, "{\"note\":\"test\"}");
  LoadedNetwork loaded = load_network(path);

  CHECK(loaded.net == net);
  CHECK(loaded.metadata_json == "{\"note\":\"test\"}");

  SplitMix64 rng(3);
  MatrixXd x = random_matrix(6, 7, rng);  // batch 2, steps 3
  MatrixXd a = net.forward(x, 3);
  MatrixXd b = loaded.net.forward(x, 3);
  CHECK(a == b);  // bit-identical

  CHECK_THROWS_AS(load_network("/nonexistent/model.mcgnet"), ConfigError);
}

TEST_CASE("shape errors are reported") {
  Network net(4, {LayerSpec::dense(1, Activation::Sigmoid)}, 1);
  MatrixXd bad = MatrixXd::Zero(2, 5);
  CHECK_THROWS_AS(net.forward(bad), ShapeMismatchError);
  MatrixXd seq = MatrixXd::Zero(4, 4);
  CHECK_THROWS_AS(net.forward(seq, 2), ShapeMismatchError);  // non-recurrent
  CHECK_THROWS_AS(Network(3, {LayerSpec::dense(2, Activation::Softmax),
                              LayerSpec::dense(1, Activation::Sigmoid)},
                          1),
                  ShapeMismatchError);  // softmax mid-network
}
