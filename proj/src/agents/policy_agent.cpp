#include "mcg/agents/policy_agent.hpp"

namespace mcg {

GreedyPolicyAgent::GreedyPolicyAgent(const Rules& rules, const Encoder& encoder,
                                     const nn::Network& policy, int window_len,
                                     std::string name)
    : rules_(&rules),
      encoder_(&encoder),
      policy_(&policy),
      window_len_(window_len),
      state_width_(encoder.width()),
      row_width_(encoder.width() + kActionCount),
      name_(std::move(name)) {
  if (policy.input_width() != row_width_)
    throw EncodingMismatchError("policy model expects width " +
                                std::to_string(policy.input_width()) +
                                ", window rows are " + std::to_string(row_width_));
  if (policy.output_width() != kActionCount)
    throw EncodingMismatchError("policy model must emit one logit per action");
}

void GreedyPolicyAgent::reset(uint64_t, int seat) {
  seat_ = seat;
  history_rows_.clear();
  history_acts_.clear();
}

void GreedyPolicyAgent::observe(const GameState& before, Action a) {
  size_t off = history_rows_.size();
  history_rows_.resize(off + static_cast<size_t>(state_width_));
  encoder_->encode(before, seat_, history_rows_.data() + off);
  history_acts_.push_back(a.index);
}

Action GreedyPolicyAgent::choose(const GameState& s) {
  const int t = static_cast<int>(history_acts_.size());
  Eigen::MatrixXd window = Eigen::MatrixXd::Zero(window_len_, row_width_);
  for (int k = 0; k < window_len_; ++k) {
    int j = t - window_len_ + 1 + k;
    if (j < 0) continue;
    if (j < t) {
      const float* src = history_rows_.data() + static_cast<size_t>(j) * state_width_;
      for (int c = 0; c < state_width_; ++c) window(k, c) = src[c];
    } else {
      std::vector<float> row = encoder_->encode(s, seat_);
      for (int c = 0; c < state_width_; ++c) window(k, c) = row[c];
    }
    if (j >= 1) window(k, state_width_ + history_acts_[j - 1]) = 1.0;
  }

  Eigen::MatrixXd probs = policy_->forward(window, window_len_);
  int raw_best = 0;
  for (int a = 1; a < kActionCount; ++a)
    if (probs(0, a) > probs(0, raw_best)) raw_best = a;

  ActionList legal;
  legal_actions(*rules_, s, legal);
  int best = -1;
  for (const Action& a : legal)
    if (best < 0 || probs(0, a.index) > probs(0, best)) best = a.index;

  ++decisions_;
  raw_argmax_illegal_ += !is_legal(*rules_, s, Action{static_cast<uint8_t>(raw_best)});
  return Action{static_cast<uint8_t>(best)};
}

}  // namespace mcg
