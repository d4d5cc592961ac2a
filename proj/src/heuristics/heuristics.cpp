#include "mcg/heuristics/value_net.hpp"

namespace mcg {

ValueNetEvaluator::ValueNetEvaluator(const Rules& rules, const Encoder& encoder,
                                     const nn::Network& net)
    : rules_(&rules), encoder_(&encoder) {
  if (net.input_width() != encoder.width())
    throw EncodingMismatchError("value model expects input width " +
                                std::to_string(net.input_width()) + ", encoder is " +
                                std::to_string(encoder.width()));
  const auto& params = net.parameters();
  for (size_t li = 0; li < net.layers().size(); ++li) {
    const nn::LayerSpec& l = net.layers()[li];
    if (l.kind == nn::LayerSpec::Kind::Dropout) continue;  // identity in eval
    if (l.kind != nn::LayerSpec::Kind::Dense)
      throw ShapeMismatchError("value evaluator supports dense networks only");
    size_t off = net.layer_offset(static_cast<int>(li));
    Eigen::MatrixXf w(l.out_width, l.in_width);
    for (int r = 0; r < l.out_width; ++r)
      for (int c = 0; c < l.in_width; ++c)
        w(r, c) = params[off + size_t(r) * l.in_width + c];
    Eigen::VectorXf b(l.out_width);
    size_t boff = off + size_t(l.out_width) * l.in_width;
    for (int r = 0; r < l.out_width; ++r) b(r) = params[boff + r];
    weights_.push_back(std::move(w));
    biases_.push_back(std::move(b));
    activations_.push_back(l.activation);
  }
  if (weights_.empty() || activations_.back() != nn::Activation::Sigmoid ||
      weights_.back().rows() != 1)
    throw ShapeMismatchError("value model must end in a sigmoid head of width 1");
}

double ValueNetEvaluator::evaluate(const GameState& s, int perspective) const {
  double out;
  int p = perspective;
  evaluate_batch(&s, &p, 1, &out);
  return out;
}

void ValueNetEvaluator::evaluate_batch(const GameState* states, const int* perspectives,
                                       int n, double* out) const {
  thread_local Eigen::MatrixXf x, next;
  x.resize(n, encoder_->width());
  thread_local std::vector<float> row;
  row.resize(encoder_->width());

  // Terminal states report their true result; the model sees the rest.
  for (int i = 0; i < n; ++i) {
    if (states[i].outcome != Outcome::InProgress) {
      bool won = (states[i].outcome == Outcome::Player0Wins) == (perspectives[i] == 0);
      out[i] = won ? 1.0 : 0.0;
    } else {
      out[i] = -1.0;
    }
    encoder_->encode(states[i], perspectives[i], row.data());
    for (int c = 0; c < encoder_->width(); ++c) x(i, c) = row[c];
  }

  for (size_t li = 0; li < weights_.size(); ++li) {
    next.noalias() = x * weights_[li].transpose();
    next.rowwise() += biases_[li].transpose();
    switch (activations_[li]) {
      case nn::Activation::Relu: next = next.cwiseMax(0.0f); break;
      case nn::Activation::Tanh: next = next.array().tanh().matrix(); break;
      case nn::Activation::Sigmoid:
        next = (1.0f / (1.0f + (-next.array()).exp())).matrix();
        break;
      case nn::Activation::Linear: break;
      case nn::Activation::Softmax:
        throw ShapeMismatchError("softmax in value evaluator");
    }
    x.swap(next);
  }
  for (int i = 0; i < n; ++i)
    if (out[i] < 0.0) out[i] = static_cast<double>(x(i, 0));
}

}  // namespace mcg
