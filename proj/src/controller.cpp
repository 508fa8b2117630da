// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "stratsearch/controller.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "stratsearch/errors.hpp"
#include "stratsearch/rng.hpp"

namespace stratsearch {

namespace {

constexpr double kInitWeightRange = 0.08;
constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * ln(2*pi)

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Softmax over two channels, first channel. Kept strictly inside (0,1) so
// the log-density stays finite even for saturated logits.
double softmax_first(double o1, double o2) {
  const double m = logistic(o1 - o2);
  return std::clamp(m, 1e-12, 1.0 - 1e-12);
}

double gaussian_log_density(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return -0.5 * z * z - std::log(stddev) - kHalfLog2Pi;
}

struct ForwardPass {
  Eigen::VectorXd hidden_after;  // tanh activations
  Eigen::VectorXd means;
};

ForwardPass run_forward(const ControllerParams& params, const ControllerConfig& config,
                        const Eigen::VectorXd& input, const Eigen::VectorXd& hidden_before) {
  ForwardPass f;
  f.hidden_after = (params.w_xh * input + params.w_hh * hidden_before + params.b_h)
                       .array()
                       .tanh()
                       .matrix();
  const Eigen::VectorXd logits = params.w_ho * f.hidden_after + params.b_o;
  f.means.resize(config.dim);
  for (int k = 0; k < config.dim; ++k)
    f.means[k] = softmax_first(logits[2 * k], logits[2 * k + 1]);
  return f;
}

void check_forward_args(const ControllerParams& params, const ControllerConfig& config,
                        const Eigen::VectorXd& input, const Eigen::VectorXd& hidden) {
  if (input.size() != config.dim)
    throw std::invalid_argument("controller input has wrong dimension");
  if (hidden.size() != config.hidden_size)
    throw std::invalid_argument("controller hidden state has wrong dimension");
  if (!params.all_finite())
    throw std::invalid_argument("controller weights contain non-finite values");
}

}  // namespace

void ControllerConfig::validate() const {
  if (dim <= 0) throw ConfigError("controller dim must be positive");
  if (hidden_size <= 0) throw ConfigError("controller hidden_size must be positive");
  if (!(policy_stddev > 0.0)) throw ConfigError("policy_stddev must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("controller learning_rate must be positive");
  if (!(rmsprop_decay > 0.0 && rmsprop_decay < 1.0))
    throw ConfigError("rmsprop_decay must lie in (0, 1)");
  if (!(rmsprop_epsilon > 0.0)) throw ConfigError("rmsprop_epsilon must be positive");
  if (!(baseline_momentum > 0.0 && baseline_momentum < 1.0))
    throw ConfigError("baseline_momentum must lie in (0, 1)");
}

ControllerParams ControllerParams::zeros(const ControllerConfig& config) {
  ControllerParams p;
  p.w_xh = Eigen::MatrixXd::Zero(config.hidden_size, config.dim);
  p.w_hh = Eigen::MatrixXd::Zero(config.hidden_size, config.hidden_size);
  p.b_h = Eigen::VectorXd::Zero(config.hidden_size);
  p.w_ho = Eigen::MatrixXd::Zero(2 * config.dim, config.hidden_size);
  p.b_o = Eigen::VectorXd::Zero(2 * config.dim);
  return p;
}

bool ControllerParams::same_shape(const ControllerParams& other) const {
  return w_xh.rows() == other.w_xh.rows() && w_xh.cols() == other.w_xh.cols() &&
         w_hh.rows() == other.w_hh.rows() && w_hh.cols() == other.w_hh.cols() &&
         b_h.size() == other.b_h.size() &&
         w_ho.rows() == other.w_ho.rows() && w_ho.cols() == other.w_ho.cols() &&
         b_o.size() == other.b_o.size();
}

bool ControllerParams::all_finite() const {
  return w_xh.allFinite() && w_hh.allFinite() && b_h.allFinite() &&
         w_ho.allFinite() && b_o.allFinite();
}

bool ControllerParams::equals(const ControllerParams& other) const {
  return same_shape(other) && w_xh == other.w_xh && w_hh == other.w_hh &&
         b_h == other.b_h && w_ho == other.w_ho && b_o == other.b_o;
}

std::pair<ControllerParams, ControllerState> init_controller(
    const ControllerConfig& config, std::uint64_t rng_seed) {
  config.validate();
  Rng rng(rng_seed);
  ControllerParams params = ControllerParams::zeros(config);
  const auto fill = [&](auto& tensor) {
    double* data = tensor.data();
    for (Eigen::Index i = 0; i < tensor.size(); ++i)
      data[i] = rng.uniform(-kInitWeightRange, kInitWeightRange);
  };
  fill(params.w_xh);
  fill(params.w_hh);
  fill(params.b_h);
  fill(params.w_ho);
  fill(params.b_o);

  ControllerState state;
  state.hidden = Eigen::VectorXd::Zero(config.hidden_size);
  state.rms_acc = ControllerParams::zeros(config);
  state.reward_baseline = 0.0;
  return {std::move(params), std::move(state)};
}

std::pair<PolicyStep, ControllerState> policy_forward(
    const ControllerParams& params, const ControllerState& state,
    const StrategyVector& prev, const ControllerConfig& config,
    std::uint64_t rng_seed) {
  check_forward_args(params, config, prev, state.hidden);

  const ForwardPass f = run_forward(params, config, prev, state.hidden);

  Rng rng(rng_seed);
  PolicyStep step;
  step.input = prev;
  step.hidden_before = state.hidden;
  step.means = f.means;
  step.sampled_action.resize(config.dim);
  step.log_prob = 0.0;
  for (int k = 0; k < config.dim; ++k) {
    const double raw = f.means[k] + config.policy_stddev * rng.normal();
    const double action = std::clamp(raw, kActionLow, kActionHigh);
    step.sampled_action[k] = action;
    // Density of the pre-clamp Gaussian evaluated at the clamped value.
    step.log_prob += gaussian_log_density(action, f.means[k], config.policy_stddev);
  }

  ControllerState next = state;
  next.hidden = f.hidden_after;
  return {std::move(step), std::move(next)};
}

double log_prob_of(const ControllerParams& params, const ControllerConfig& config,
                   const Eigen::VectorXd& input, const Eigen::VectorXd& hidden_before,
                   const Eigen::VectorXd& action) {
  check_forward_args(params, config, input, hidden_before);
  if (action.size() != config.dim)
    throw std::invalid_argument("action has wrong dimension");
  const ForwardPass f = run_forward(params, config, input, hidden_before);
  double lp = 0.0;
  for (int k = 0; k < config.dim; ++k)
    lp += gaussian_log_density(action[k], f.means[k], config.policy_stddev);
  return lp;
}

ControllerParams log_prob_gradient(const ControllerParams& params,
                                   const ControllerConfig& config,
                                   const PolicyStep& step) {
  check_forward_args(params, config, step.input, step.hidden_before);
  if (step.sampled_action.size() != config.dim)
    throw std::invalid_argument("policy step action has wrong dimension");

  const ForwardPass f = run_forward(params, config, step.input, step.hidden_before);
  const double var = config.policy_stddev * config.policy_stddev;

  // d log pi / d logits. Channel 2k carries the mean; channel 2k+1 only
  // balances the softmax and receives the mirrored gradient.
  Eigen::VectorXd d_logits(2 * config.dim);
  for (int k = 0; k < config.dim; ++k) {
    const double mean = f.means[k];
    const double d_mean = (step.sampled_action[k] - mean) / var;
    const double d_delta = d_mean * mean * (1.0 - mean);
    d_logits[2 * k] = d_delta;
    d_logits[2 * k + 1] = -d_delta;
  }

  ControllerParams grad = ControllerParams::zeros(config);
  grad.w_ho = d_logits * f.hidden_after.transpose();
  grad.b_o = d_logits;

  const Eigen::VectorXd d_hidden = params.w_ho.transpose() * d_logits;
  const Eigen::VectorXd d_pre =
      ((1.0 - f.hidden_after.array().square()) * d_hidden.array()).matrix();

  grad.w_xh = d_pre * step.input.transpose();
  grad.w_hh = d_pre * step.hidden_before.transpose();
  grad.b_h = d_pre;
  return grad;
}

std::pair<ControllerParams, ControllerState> policy_update(
    const ControllerParams& params, const ControllerState& state,
    const PolicyStep& step, double reward, const ControllerConfig& config) {
  if (!std::isfinite(reward))
    throw std::invalid_argument("policy_update: reward must be finite");
  if (!state.rms_acc.same_shape(params))
    throw std::invalid_argument("policy_update: accumulator/param shape mismatch");

  const ControllerParams grad = log_prob_gradient(params, config, step);

  const double effective =
      config.use_reward_baseline ? reward - state.reward_baseline : reward;

  ControllerParams new_params = params;
  ControllerState new_state = state;

  const double rho = config.rmsprop_decay;
  const double lr = config.learning_rate;
  const double eps = config.rmsprop_epsilon;
  const auto ascend = [&](Eigen::MatrixXd& theta, Eigen::MatrixXd& acc,
                          const Eigen::MatrixXd& g) {
    acc = rho * acc.array() + (1.0 - rho) * g.array().square();
    theta.array() += lr * effective * g.array() / (acc.array().sqrt() + eps);
  };
  const auto ascend_vec = [&](Eigen::VectorXd& theta, Eigen::VectorXd& acc,
                              const Eigen::VectorXd& g) {
    acc = rho * acc.array() + (1.0 - rho) * g.array().square();
    theta.array() += lr * effective * g.array() / (acc.array().sqrt() + eps);
  };

  ascend(new_params.w_xh, new_state.rms_acc.w_xh, grad.w_xh);
  ascend(new_params.w_hh, new_state.rms_acc.w_hh, grad.w_hh);
  ascend_vec(new_params.b_h, new_state.rms_acc.b_h, grad.b_h);
  ascend(new_params.w_ho, new_state.rms_acc.w_ho, grad.w_ho);
  ascend_vec(new_params.b_o, new_state.rms_acc.b_o, grad.b_o);

  if (config.use_reward_baseline) {
    const double m = config.baseline_momentum;
    new_state.reward_baseline = m * state.reward_baseline + (1.0 - m) * reward;
  }
  return {std::move(new_params), std::move(new_state)};
}

// --- checkpoint encoding ---------------------------------------------------
//
// Layout (all integers and doubles little-endian):
//   magic "SSCP" | u32 version | i32 dim | i32 hidden_size
//   f64 policy_stddev, learning_rate, rmsprop_decay, rmsprop_epsilon
//   u8 use_reward_baseline | f64 baseline_momentum
//   tensors: w_xh, w_hh, b_h, w_ho, b_o, hidden, acc.{w_xh,w_hh,b_h,w_ho,b_o}
//   f64 reward_baseline

namespace {

constexpr char kMagic[4] = {'S', 'S', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  template <typename Tensor>
  void tensor(const Tensor& t) {
    const double* data = t.data();
    for (Eigen::Index i = 0; i < t.size(); ++i) f64(data[i]);
  }

 private:
  std::vector<std::uint8_t>& out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  template <typename Tensor>
  void tensor(Tensor& t) {
    double* data = t.data();
    for (Eigen::Index i = 0; i < t.size(); ++i) data[i] = f64();
  }
  bool exhausted() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > in_.size())
      throw DecodeError("checkpoint blob truncated");
  }

  const std::vector<std::uint8_t>& in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_checkpoint(const ControllerConfig& config,
                                          const ControllerParams& params,
                                          const ControllerState& state) {
  std::vector<std::uint8_t> out;
  ByteWriter w(out);
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kVersion);
  w.i32(config.dim);
  w.i32(config.hidden_size);
  w.f64(config.policy_stddev);
  w.f64(config.learning_rate);
  w.f64(config.rmsprop_decay);
  w.f64(config.rmsprop_epsilon);
  w.u8(config.use_reward_baseline ? 1 : 0);
  w.f64(config.baseline_momentum);
  w.tensor(params.w_xh);
  w.tensor(params.w_hh);
  w.tensor(params.b_h);
  w.tensor(params.w_ho);
  w.tensor(params.b_o);
  w.tensor(state.hidden);
  w.tensor(state.rms_acc.w_xh);
  w.tensor(state.rms_acc.w_hh);
  w.tensor(state.rms_acc.b_h);
  w.tensor(state.rms_acc.w_ho);
  w.tensor(state.rms_acc.b_o);
  w.f64(state.reward_baseline);
  return out;
}

ControllerCheckpoint load_checkpoint(const std::vector<std::uint8_t>& blob) {
  ByteReader r(blob);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c))
      throw DecodeError("checkpoint blob has wrong magic");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    std::ostringstream msg;
    msg << "unsupported checkpoint version " << version;
    throw DecodeError(msg.str());
  }

  ControllerCheckpoint ckpt;
  ckpt.config.dim = r.i32();
  ckpt.config.hidden_size = r.i32();
  ckpt.config.policy_stddev = r.f64();
  ckpt.config.learning_rate = r.f64();
  ckpt.config.rmsprop_decay = r.f64();
  ckpt.config.rmsprop_epsilon = r.f64();
  ckpt.config.use_reward_baseline = r.u8() != 0;
  ckpt.config.baseline_momentum = r.f64();
  if (ckpt.config.dim <= 0 || ckpt.config.hidden_size <= 0)
    throw DecodeError("checkpoint blob has invalid tensor shapes");

  ckpt.params = ControllerParams::zeros(ckpt.config);
  r.tensor(ckpt.params.w_xh);
  r.tensor(ckpt.params.w_hh);
  r.tensor(ckpt.params.b_h);
  r.tensor(ckpt.params.w_ho);
  r.tensor(ckpt.params.b_o);
  ckpt.state.hidden = Eigen::VectorXd::Zero(ckpt.config.hidden_size);
  r.tensor(ckpt.state.hidden);
  ckpt.state.rms_acc = ControllerParams::zeros(ckpt.config);
  r.tensor(ckpt.state.rms_acc.w_xh);
  r.tensor(ckpt.state.rms_acc.w_hh);
  r.tensor(ckpt.state.rms_acc.b_h);
  r.tensor(ckpt.state.rms_acc.w_ho);
  r.tensor(ckpt.state.rms_acc.b_o);
  ckpt.state.reward_baseline = r.f64();
  if (!r.exhausted()) throw DecodeError("checkpoint blob has trailing bytes");
  return ckpt;
}

}  // namespace stratsearch
