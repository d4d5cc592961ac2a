#include "mcg/nn/network.hpp"

#include <cmath>

namespace mcg::nn {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd dense_weight(const std::vector<float>& params, size_t off, int out, int in) {
  MatrixXd w(out, in);
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < in; ++c) w(r, c) = params[off + size_t(r) * in + c];
  return w;
}

VectorXd dense_bias(const std::vector<float>& params, size_t off, int out) {
  VectorXd b(out);
  for (int i = 0; i < out; ++i) b(i) = params[off + i];
  return b;
}

void add_dense_weight_grad(Eigen::VectorXd& grad, size_t off, const MatrixXd& dw) {
  for (int r = 0; r < dw.rows(); ++r)
    for (int c = 0; c < dw.cols(); ++c) grad(off + size_t(r) * dw.cols() + c) += dw(r, c);
}

MatrixXd apply_activation(Activation a, const MatrixXd& z) {
  switch (a) {
    case Activation::Linear: return z;
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh().matrix();
    case Activation::Sigmoid:
      return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    case Activation::Softmax: {
      MatrixXd out(z.rows(), z.cols());
      for (int r = 0; r < z.rows(); ++r) {
        double m = z.row(r).maxCoeff();
        Eigen::ArrayXd e = (z.row(r).array() - m).exp();
        out.row(r) = (e / e.sum()).matrix();
      }
      return out;
    }
  }
  return z;
}

MatrixXd activation_grad(Activation a, const MatrixXd& z, const MatrixXd& out,
                         const MatrixXd& dout) {
  switch (a) {
    case Activation::Linear: return dout;
    case Activation::Relu:
      return (z.array() > 0.0).select(dout, MatrixXd::Zero(z.rows(), z.cols()));
    case Activation::Tanh:
      return (dout.array() * (1.0 - out.array().square())).matrix();
    case Activation::Sigmoid:
      return (dout.array() * out.array() * (1.0 - out.array())).matrix();
    case Activation::Softmax:
      throw ShapeMismatchError("softmax is only supported fused with the CCE head");
  }
  return dout;
}

struct LstmStep {
  MatrixXd x, i, f, g, o, c, tanh_c, h;
};

struct LayerTrace {
  MatrixXd input;  // as consumed by the layer (after any last-step slice)
  MatrixXd z;      // dense pre-activation
  MatrixXd out;
  MatrixXd mask;   // dropout scaled mask (empty in eval mode)
  std::vector<LstmStep> steps;
  bool sliced = false;  // dense consumed the last timestep of a sequence
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

const LayerSpec& Network::final_dense() const {
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
    if (it->kind == LayerSpec::Kind::Dense) return *it;
  throw ShapeMismatchError("network has no dense head");
}

bool Network::recurrent() const {
  for (const auto& l : layers_)
    if (l.kind == LayerSpec::Kind::GatedRecurrent) return true;
  return false;
}

Network::Network(int input_width, std::vector<LayerSpec> layers, uint64_t init_seed)
    : input_width_(input_width), layers_(std::move(layers)) {
  if (input_width_ < 1) throw ShapeMismatchError("input width must be >= 1");
  int width = input_width_;
  size_t total = 0;
  bool saw_softmax = false;
  for (auto& l : layers_) {
    if (saw_softmax) throw ShapeMismatchError("softmax must be the final activation");
    l.in_width = width;
    switch (l.kind) {
      case LayerSpec::Kind::Dense:
        if (l.out_width < 1) throw ShapeMismatchError("dense width must be >= 1");
        width = l.out_width;
        if (l.activation == Activation::Softmax) saw_softmax = true;
        break;
      case LayerSpec::Kind::GatedRecurrent:
        if (l.out_width < 1) throw ShapeMismatchError("hidden width must be >= 1");
        width = l.out_width;
        break;
      case LayerSpec::Kind::Dropout:
        if (l.rate < 0.0 || l.rate >= 1.0)
          throw ShapeMismatchError("dropout rate must be in [0,1)");
        l.out_width = width;
        break;
    }
    offsets_.push_back(total);
    total += l.param_count();
  }

  // Scaled-uniform fan-in init: U(-1,1)/sqrt(fan_in), biases 0, recurrent
  // forget-gate bias 1. Drawn in flat parameter order, quantized to float32.
  params_.assign(total, 0.0f);
  SplitMix64 rng(init_seed);
  auto uniform = [&](double limit) {
    return static_cast<float>((rng.next_double() * 2.0 - 1.0) * limit);
  };
  for (size_t li = 0; li < layers_.size(); ++li) {
    const LayerSpec& l = layers_[li];
    size_t off = offsets_[li];
    if (l.kind == LayerSpec::Kind::Dense) {
      double limit = 1.0 / std::sqrt(double(l.in_width));
      for (int k = 0; k < l.out_width * l.in_width; ++k)
        params_[off + k] = uniform(limit);
    } else if (l.kind == LayerSpec::Kind::GatedRecurrent) {
      int h = l.out_width;
      double lx = 1.0 / std::sqrt(double(l.in_width));
      double lh = 1.0 / std::sqrt(double(h));
      size_t p = off;
      for (int k = 0; k < 4 * h * l.in_width; ++k) params_[p++] = uniform(lx);
      for (int k = 0; k < 4 * h * h; ++k) params_[p++] = uniform(lh);
      for (int k = 0; k < h; ++k) params_[p + h + k] = 1.0f;  // forget-gate bias
    }
  }
}

namespace {

// Shared forward walk; fills `traces` when non-null.
MatrixXd run_forward(const Network& net, const MatrixXd& input, int steps, Mode mode,
                     uint64_t dropout_seed, std::vector<LayerTrace>* traces) {
  if (input.cols() != net.input_width())
    throw ShapeMismatchError("input width " + std::to_string(input.cols()) +
                             " does not match network width " +
                             std::to_string(net.input_width()));
  if (steps < 1 || input.rows() % steps != 0)
    throw ShapeMismatchError("rows not divisible into timesteps");
  if (steps > 1 && !net.recurrent())
    throw ShapeMismatchError("sequence input on a non-recurrent network");

  const auto& params = net.parameters();
  long batch = input.rows() / steps;
  MatrixXd cur = input;
  int cur_steps = steps;

  for (size_t li = 0; li < net.layers().size(); ++li) {
    const LayerSpec& l = net.layers()[li];
    size_t off = net.layer_offset(static_cast<int>(li));
    LayerTrace trace;
    switch (l.kind) {
      case LayerSpec::Kind::Dense: {
        if (cur_steps > 1) {
          // The head consumes the last timestep of the sequence.
          MatrixXd last(batch, cur.cols());
          for (long b = 0; b < batch; ++b)
            last.row(b) = cur.row(b * cur_steps + cur_steps - 1);
          cur = last;
          cur_steps = 1;
          trace.sliced = true;
        }
        MatrixXd w = dense_weight(params, off, l.out_width, l.in_width);
        VectorXd bias =
            dense_bias(params, off + size_t(l.out_width) * l.in_width, l.out_width);
        MatrixXd z = (cur * w.transpose()).rowwise() + bias.transpose();
        MatrixXd out = apply_activation(l.activation, z);
        if (traces) {
          trace.input = cur;
          trace.z = z;
          trace.out = out;
        }
        cur = std::move(out);
        break;
      }
      case LayerSpec::Kind::GatedRecurrent: {
        int h = l.out_width;
        int in = l.in_width;
        MatrixXd wx = dense_weight(params, off, 4 * h, in);
        MatrixXd wh = dense_weight(params, off + size_t(4 * h) * in, 4 * h, h);
        VectorXd bias = dense_bias(params, off + size_t(4 * h) * (in + h), 4 * h);
        MatrixXd hprev = MatrixXd::Zero(batch, h);
        MatrixXd cprev = MatrixXd::Zero(batch, h);
        MatrixXd seq_out(batch * cur_steps, h);
        for (int t = 0; t < cur_steps; ++t) {
          MatrixXd xt(batch, in);
          for (long b = 0; b < batch; ++b) xt.row(b) = cur.row(b * cur_steps + t);
          MatrixXd z = (xt * wx.transpose() + hprev * wh.transpose()).rowwise() +
                       bias.transpose();
          MatrixXd ig = (1.0 / (1.0 + (-z.leftCols(h).array()).exp())).matrix();
          MatrixXd fg = (1.0 / (1.0 + (-z.middleCols(h, h).array()).exp())).matrix();
          MatrixXd gg = z.middleCols(2 * h, h).array().tanh().matrix();
          MatrixXd og = (1.0 / (1.0 + (-z.rightCols(h).array()).exp())).matrix();
          MatrixXd ct = (fg.array() * cprev.array() + ig.array() * gg.array()).matrix();
          MatrixXd tanh_ct = ct.array().tanh().matrix();
          MatrixXd ht = (og.array() * tanh_ct.array()).matrix();
          for (long b = 0; b < batch; ++b) seq_out.row(b * cur_steps + t) = ht.row(b);
          if (traces) trace.steps.push_back({xt, ig, fg, gg, og, ct, tanh_ct, ht});
          hprev = std::move(ht);
          cprev = std::move(ct);
        }
        if (traces) trace.out = seq_out;
        cur = std::move(seq_out);
        break;
      }
      case LayerSpec::Kind::Dropout: {
        if (mode == Mode::Train && l.rate > 0.0) {
          // Inverted dropout: surviving units scale by 1/(1-rate).
          SplitMix64 rng(derive_seed(dropout_seed, li));
          double keep = 1.0 - l.rate;
          MatrixXd mask(cur.rows(), cur.cols());
          for (long r = 0; r < cur.rows(); ++r)
            for (long c = 0; c < cur.cols(); ++c)
              mask(r, c) = rng.next_double() < keep ? 1.0 / keep : 0.0;
          cur = cur.cwiseProduct(mask);
          if (traces) trace.mask = std::move(mask);
        }
        if (traces) trace.out = cur;
        break;
      }
    }
    if (traces) traces->push_back(std::move(trace));
  }
  return cur;
}

}  // namespace

MatrixXd Network::forward(const MatrixXd& input, int steps, Mode mode,
                          uint64_t dropout_seed) const {
  return run_forward(*this, input, steps, mode, dropout_seed, nullptr);
}

Network::BackwardResult Network::backward(const MatrixXd& input, int steps,
                                          const VectorXd& targets, Loss loss,
                                          Mode mode, uint64_t dropout_seed) const {
  std::vector<LayerTrace> traces;
  MatrixXd output = run_forward(*this, input, steps, mode, dropout_seed, &traces);
  long batch = input.rows() / steps;
  if (targets.size() != batch)
    throw ShapeMismatchError("targets size does not match batch");

  const LayerSpec& head = final_dense();
  if (loss == Loss::BinaryCrossEntropy &&
      (head.activation != Activation::Sigmoid || head.out_width != 1))
    throw ShapeMismatchError("BCE needs a sigmoid dense head of width 1");
  if (loss == Loss::CategoricalCrossEntropy && head.activation != Activation::Softmax)
    throw ShapeMismatchError("CCE needs a softmax dense head");

  int head_layer = -1;
  for (int li = static_cast<int>(layers_.size()) - 1; li >= 0; --li)
    if (layers_[li].kind == LayerSpec::Kind::Dense) {
      head_layer = li;
      break;
    }

  // Loss and its gradient w.r.t. the head logits (softplus / log-sum-exp
  // forms; probabilities never enter the loss).
  const MatrixXd& zf = traces[head_layer].z;
  double loss_value = 0;
  MatrixXd dz(zf.rows(), zf.cols());
  if (loss == Loss::BinaryCrossEntropy) {
    for (long b = 0; b < batch; ++b) {
      double z = zf(b, 0), y = targets(b);
      loss_value += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
      dz(b, 0) = (sigmoid(z) - y) / double(batch);
    }
    loss_value /= double(batch);
  } else {
    for (long b = 0; b < batch; ++b) {
      int label = static_cast<int>(targets(b));
      if (label < 0 || label >= zf.cols())
        throw ShapeMismatchError("class label out of range");
      double m = zf.row(b).maxCoeff();
      double lse = m + std::log((zf.row(b).array() - m).exp().sum());
      loss_value += lse - zf(b, label);
      dz.row(b) = traces[head_layer].out.row(b) / double(batch);
      dz(b, label) -= 1.0 / double(batch);
    }
    loss_value /= double(batch);
  }

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<long>(params_.size()));
  MatrixXd dout;  // gradient w.r.t. the current layer's output
  bool dout_is_logit_grad = false;

  for (int li = static_cast<int>(layers_.size()) - 1; li >= 0; --li) {
    const LayerSpec& l = layers_[li];
    const LayerTrace& tr = traces[li];
    size_t off = offsets_[li];
    if (li == head_layer) {
      dout = dz;
      dout_is_logit_grad = true;
    }
    switch (l.kind) {
      case LayerSpec::Kind::Dense: {
        MatrixXd dzl = dout_is_logit_grad
                           ? dout
                           : activation_grad(l.activation, tr.z, tr.out, dout);
        dout_is_logit_grad = false;
        MatrixXd w = dense_weight(params_, off, l.out_width, l.in_width);
        add_dense_weight_grad(grad, off, dzl.transpose() * tr.input);
        size_t boff = off + size_t(l.out_width) * l.in_width;
        Eigen::RowVectorXd db = dzl.colwise().sum();
        for (int k = 0; k < l.out_width; ++k) grad(boff + k) += db(k);
        MatrixXd dx = dzl * w;
        if (tr.sliced) {
          // Scatter back into the full sequence (earlier steps get zero).
          long prev_rows = li > 0 ? traces[li - 1].out.rows() : input.rows();
          int prev_steps = static_cast<int>(prev_rows / batch);
          MatrixXd full = MatrixXd::Zero(batch * prev_steps, l.in_width);
          for (long b = 0; b < batch; ++b)
            full.row(b * prev_steps + prev_steps - 1) = dx.row(b);
          dout = std::move(full);
        } else {
          dout = std::move(dx);
        }
        break;
      }
      case LayerSpec::Kind::GatedRecurrent: {
        int h = l.out_width;
        int in = l.in_width;
        int t_steps = static_cast<int>(tr.steps.size());
        MatrixXd wx = dense_weight(params_, off, 4 * h, in);
        MatrixXd wh = dense_weight(params_, off + size_t(4 * h) * in, 4 * h, h);
        MatrixXd dwx = MatrixXd::Zero(4 * h, in);
        MatrixXd dwh = MatrixXd::Zero(4 * h, h);
        Eigen::RowVectorXd db = Eigen::RowVectorXd::Zero(4 * h);
        MatrixXd dh_next = MatrixXd::Zero(batch, h);
        MatrixXd dc_next = MatrixXd::Zero(batch, h);
        MatrixXd dx_seq(batch * t_steps, in);
        for (int t = t_steps - 1; t >= 0; --t) {
          const LstmStep& st = tr.steps[t];
          MatrixXd dh(batch, h);
          for (long b = 0; b < batch; ++b) dh.row(b) = dout.row(b * t_steps + t);
          dh += dh_next;
          MatrixXd d_o = (dh.array() * st.tanh_c.array()).matrix();
          MatrixXd dzo = (d_o.array() * st.o.array() * (1.0 - st.o.array())).matrix();
          MatrixXd dc =
              (dh.array() * st.o.array() * (1.0 - st.tanh_c.array().square())).matrix() +
              dc_next;
          MatrixXd di = (dc.array() * st.g.array()).matrix();
          MatrixXd dzi = (di.array() * st.i.array() * (1.0 - st.i.array())).matrix();
          MatrixXd dg = (dc.array() * st.i.array()).matrix();
          MatrixXd dzg = (dg.array() * (1.0 - st.g.array().square())).matrix();
          MatrixXd cprev = t > 0 ? tr.steps[t - 1].c : MatrixXd::Zero(batch, h);
          MatrixXd df = (dc.array() * cprev.array()).matrix();
          MatrixXd dzf = (df.array() * st.f.array() * (1.0 - st.f.array())).matrix();
          MatrixXd dz4(batch, 4 * h);
          dz4 << dzi, dzf, dzg, dzo;
          MatrixXd hprev = t > 0 ? tr.steps[t - 1].h : MatrixXd::Zero(batch, h);
          dwx += dz4.transpose() * st.x;
          dwh += dz4.transpose() * hprev;
          db += dz4.colwise().sum();
          MatrixXd dxt = dz4 * wx;
          for (long b = 0; b < batch; ++b) dx_seq.row(b * t_steps + t) = dxt.row(b);
          dh_next = dz4 * wh;
          dc_next = (dc.array() * st.f.array()).matrix();
        }
        add_dense_weight_grad(grad, off, dwx);
        add_dense_weight_grad(grad, off + size_t(4 * h) * in, dwh);
        size_t boff = off + size_t(4 * h) * (in + h);
        for (int k = 0; k < 4 * h; ++k) grad(boff + k) += db(k);
        dout = std::move(dx_seq);
        break;
      }
      case LayerSpec::Kind::Dropout: {
        if (tr.mask.size() > 0) dout = dout.cwiseProduct(tr.mask);
        break;
      }
    }
  }
  return {loss_value, std::move(grad), std::move(output)};
}

}  // namespace mcg::nn
