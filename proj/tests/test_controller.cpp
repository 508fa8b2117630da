// Copyright (c) 2026 stratsearch contributors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <vector>

#include "stratsearch/controller.hpp"
#include "stratsearch/errors.hpp"
#include "stratsearch/rng.hpp"

using namespace stratsearch;

namespace {

ControllerConfig small_config(int dim, int hidden = 5) {
  ControllerConfig cc;
  cc.dim = dim;
  cc.hidden_size = hidden;
  return cc;
}

// Central finite differences of log_prob_of with respect to every weight,
// independent of the backprop path.
ControllerParams finite_difference_gradient(const ControllerParams& params,
                                            const ControllerConfig& cc,
                                            const PolicyStep& step, double h) {
  ControllerParams grad = ControllerParams::zeros(cc);
  ControllerParams work = params;
  const auto diff_tensor = [&](auto& tensor, auto& out) {
    for (Eigen::Index i = 0; i < tensor.size(); ++i) {
      const double saved = tensor.data()[i];
      tensor.data()[i] = saved + h;
      const double up = log_prob_of(work, cc, step.input, step.hidden_before,
                                    step.sampled_action);
      tensor.data()[i] = saved - h;
      const double down = log_prob_of(work, cc, step.input, step.hidden_before,
                                      step.sampled_action);
      tensor.data()[i] = saved;
      out.data()[i] = (up - down) / (2.0 * h);
    }
  };
  diff_tensor(work.w_xh, grad.w_xh);
  diff_tensor(work.w_hh, grad.w_hh);
  diff_tensor(work.b_h, grad.b_h);
  diff_tensor(work.w_ho, grad.w_ho);
  diff_tensor(work.b_o, grad.b_o);
  return grad;
}

double max_relative_error(const ControllerParams& a, const ControllerParams& b) {
  double worst = 0.0;
  const auto compare = [&](const auto& x, const auto& y) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double va = x.data()[i];
      const double vb = y.data()[i];
      const double denom = std::max({std::abs(va), std::abs(vb), 1e-4});
      worst = std::max(worst, std::abs(va - vb) / denom);
    }
  };
  compare(a.w_xh, b.w_xh);
  compare(a.w_hh, b.w_hh);
  compare(a.b_h, b.b_h);
  compare(a.w_ho, b.w_ho);
  compare(a.b_o, b.b_o);
  return worst;
}

// Forward pass with a fresh random hidden state, for gradient fixtures.
PolicyStep random_step(const ControllerParams& params, ControllerConfig& cc,
                       std::uint64_t seed) {
  Rng rng(seed);
  ControllerState state;
  state.hidden = Eigen::VectorXd::Zero(cc.hidden_size);
  for (int i = 0; i < cc.hidden_size; ++i) state.hidden[i] = rng.uniform(-1.0, 1.0);
  state.rms_acc = ControllerParams::zeros(cc);
  StrategyVector prev(cc.dim);
  for (int k = 0; k < cc.dim; ++k) prev[k] = rng.uniform();
  auto [step, next] = policy_forward(params, state, prev, cc, rng.next_u64());
  (void)next;
  return step;
}

}  // namespace

TEST_CASE("init_controller is deterministic, zeroed, and bounded") {
  ControllerConfig cc = small_config(3, 8);
  auto [p1, s1] = init_controller(cc, 99);
  auto [p2, s2] = init_controller(cc, 99);
  CHECK(p1.equals(p2));
  CHECK(s1.hidden == s2.hidden);

  CHECK(s1.hidden.isZero(0.0));
  CHECK(s1.rms_acc.w_xh.isZero(0.0));
  CHECK(s1.reward_baseline == 0.0);

  const auto in_range = [](const auto& t) {
    return (t.array().abs() <= 0.08).all();
  };
  CHECK(in_range(p1.w_xh));
  CHECK(in_range(p1.w_hh));
  CHECK(in_range(p1.b_h));
  CHECK(in_range(p1.w_ho));
  CHECK(in_range(p1.b_o));

  auto [p3, s3] = init_controller(cc, 100);
  (void)s3;
  CHECK_FALSE(p1.equals(p3));
}

TEST_CASE("zero weights and zero hidden state give means of exactly 0.5") {
  ControllerConfig cc = small_config(4);
  const ControllerParams params = ControllerParams::zeros(cc);
  ControllerState state;
  state.hidden = Eigen::VectorXd::Zero(cc.hidden_size);
  state.rms_acc = ControllerParams::zeros(cc);
  auto [step, next] = policy_forward(params, state, StrategyVector::Constant(4, 0.2),
                                     cc, 7);
  (void)next;
  for (int k = 0; k < 4; ++k) CHECK(step.means[k] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sigma -> 0 collapses the action onto the mean") {
  ControllerConfig cc = small_config(3);
  cc.policy_stddev = 1e-9;
  auto [params, state] = init_controller(cc, 5);
  auto [step, next] = policy_forward(params, state, StrategyVector::Constant(3, 0.5),
                                     cc, 11);
  (void)next;
  for (int k = 0; k < 3; ++k)
    CHECK(std::abs(step.sampled_action[k] - step.means[k]) < 1e-6);
}

TEST_CASE("log_prob matches the closed-form Gaussian density") {
  // d = 1, mean 0.5, sigma 0.1, action 0.5 -> ln(1 / (0.1 sqrt(2 pi))).
  const double expected = -std::log(0.1) - 0.5 * std::log(2.0 * M_PI);
  CHECK(expected == doctest::Approx(1.3836).epsilon(1e-4));

  ControllerConfig cc = small_config(1);
  const ControllerParams params = ControllerParams::zeros(cc);  // mean = 0.5
  Eigen::VectorXd input(1), hidden = Eigen::VectorXd::Zero(cc.hidden_size), action(1);
  input << 0.4;
  action << 0.5;
  CHECK(log_prob_of(params, cc, input, hidden, action) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("PolicyStep log_prob equals the analytic sum over dimensions") {
  ControllerConfig cc = small_config(4, 6);
  auto [params, state] = init_controller(cc, 21);
  auto [step, next] = policy_forward(params, state, StrategyVector::Constant(4, 0.3),
                                     cc, 22);
  (void)next;
  double expected = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double z = (step.sampled_action[k] - step.means[k]) / cc.policy_stddev;
    expected += -0.5 * z * z - std::log(cc.policy_stddev) - 0.5 * std::log(2.0 * M_PI);
  }
  CHECK(step.log_prob == doctest::Approx(expected).epsilon(1e-12));
  CHECK(step.log_prob ==
        doctest::Approx(log_prob_of(params, cc, step.input, step.hidden_before,
                                    step.sampled_action))
            .epsilon(1e-12));
}

TEST_CASE("backprop gradient matches central finite differences") {
  Rng seeds(4242);
  for (int rep = 0; rep < 20; ++rep) {
    ControllerConfig cc = small_config(1 + rep % 4, 3 + rep % 5);
    auto [params, state] = init_controller(cc, seeds.next_u64());
    (void)state;
    const PolicyStep step = random_step(params, cc, seeds.next_u64());
    const ControllerParams analytic = log_prob_gradient(params, cc, step);
    const ControllerParams numeric = finite_difference_gradient(params, cc, step, 1e-5);
    CHECK(max_relative_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("reward zero leaves weights unchanged but feeds the accumulator") {
  ControllerConfig cc = small_config(2);
  auto [params, state] = init_controller(cc, 3);
  auto [step, next_state] = policy_forward(params, state,
                                           StrategyVector::Constant(2, 0.5), cc, 4);
  auto [new_params, new_state] = policy_update(params, next_state, step, 0.0, cc);
  CHECK(new_params.equals(params));
  CHECK(new_state.rms_acc.w_xh.array().abs().sum() > 0.0);
}

TEST_CASE("non-finite reward is rejected") {
  ControllerConfig cc = small_config(1);
  auto [params, state] = init_controller(cc, 3);
  auto [step, next_state] = policy_forward(params, state,
                                           StrategyVector::Constant(1, 0.5), cc, 4);
  CHECK_THROWS_AS(
      policy_update(params, next_state, step, std::nan(""), cc),
      std::invalid_argument);
}

TEST_CASE("repeated identical updates take different step sizes") {
  // The accumulator grows between the two updates, so the deltas differ.
  ControllerConfig cc = small_config(1, 4);
  auto [params0, state0] = init_controller(cc, 17);
  auto [step, state1] = policy_forward(params0, state0,
                                       StrategyVector::Constant(1, 0.5), cc, 18);
  auto [params1, state2] = policy_update(params0, state1, step, 0.8, cc);
  auto [params2, state3] = policy_update(params1, state2, step, 0.8, cc);
  (void)state3;
  const Eigen::MatrixXd delta1 = params1.w_ho - params0.w_ho;
  const Eigen::MatrixXd delta2 = params2.w_ho - params1.w_ho;
  CHECK_FALSE(delta1 == delta2);
}

TEST_CASE("positive reward ascends the log-probability at small step sizes") {
  // Identity-scaled equivalent of the RMSprop step: plain theta + gamma r g.
  Rng seeds(909);
  for (int rep = 0; rep < 10; ++rep) {
    ControllerConfig cc = small_config(2, 5);
    auto [params, state] = init_controller(cc, seeds.next_u64());
    (void)state;
    const PolicyStep step = random_step(params, cc, seeds.next_u64());
    const ControllerParams grad = log_prob_gradient(params, cc, step);
    const double gamma = 1e-4;
    const double reward = 0.7;
    ControllerParams moved = params;
    moved.w_xh += gamma * reward * grad.w_xh;
    moved.w_hh += gamma * reward * grad.w_hh;
    moved.b_h += gamma * reward * grad.b_h;
    moved.w_ho += gamma * reward * grad.w_ho;
    moved.b_o += gamma * reward * grad.b_o;
    const double before =
        log_prob_of(params, cc, step.input, step.hidden_before, step.sampled_action);
    const double after =
        log_prob_of(moved, cc, step.input, step.hidden_before, step.sampled_action);
    CHECK(after > before);
  }
}

TEST_CASE("means stay in (0,1) and actions in the clamp interval") {
  Rng seeds(31337);
  for (int rep = 0; rep < 50; ++rep) {
    ControllerConfig cc = small_config(1 + rep % 5, 4);
    cc.policy_stddev = 0.5;  // wide exploration forces clamping
    auto [params, state] = init_controller(cc, seeds.next_u64());
    StrategyVector prev(cc.dim);
    for (int k = 0; k < cc.dim; ++k) prev[k] = seeds.uniform();
    auto [step, next] = policy_forward(params, state, prev, cc, seeds.next_u64());
    (void)next;
    for (int k = 0; k < cc.dim; ++k) {
      CHECK(step.means[k] > 0.0);
      CHECK(step.means[k] < 1.0);
      CHECK(step.sampled_action[k] >= kActionLow);
      CHECK(step.sampled_action[k] <= kActionHigh);
    }
  }
}

TEST_CASE("sampled actions have the configured spread") {
  // Empirical stddev over 10,000 forwards with fixed weights: within
  // [0.09, 0.11] for sigma = 0.1 and means near 0.5.
  ControllerConfig cc = small_config(1, 4);
  const ControllerParams params = ControllerParams::zeros(cc);  // mean exactly 0.5
  ControllerState state;
  state.hidden = Eigen::VectorXd::Zero(cc.hidden_size);
  state.rms_acc = ControllerParams::zeros(cc);

  double sum = 0.0, sum_sq = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto [step, next] = policy_forward(params, state, StrategyVector::Constant(1, 0.5),
                                       cc, static_cast<std::uint64_t>(i));
    (void)next;
    sum += step.sampled_action[0];
    sum_sq += step.sampled_action[0] * step.sampled_action[0];
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum_sq / n - mean * mean);
  CHECK(stddev > 0.09);
  CHECK(stddev < 0.11);
}

TEST_CASE("forward and update sequences are bit-reproducible") {
  ControllerConfig cc = small_config(3, 6);
  const auto run_chain = [&cc]() {
    auto [params, state] = init_controller(cc, 55);
    StrategyVector prev = StrategyVector::Constant(3, 0.5);
    for (int i = 0; i < 10; ++i) {
      auto [step, s1] = policy_forward(params, state, prev, cc,
                                       static_cast<std::uint64_t>(1000 + i));
      std::tie(params, state) = policy_update(params, s1, step, 0.1 * i, cc);
      prev = step.sampled_action;
    }
    return std::make_pair(params, state);
  };
  auto [pa, sa] = run_chain();
  auto [pb, sb] = run_chain();
  CHECK(pa.equals(pb));
  CHECK(sa.hidden == sb.hidden);
  CHECK(sa.rms_acc.equals(sb.rms_acc));
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  ControllerConfig cc = small_config(2, 7);
  cc.use_reward_baseline = true;
  auto [params, state] = init_controller(cc, 12);

  // Fresh init round trip.
  {
    const auto blob = save_checkpoint(cc, params, state);
    const ControllerCheckpoint ckpt = load_checkpoint(blob);
    CHECK(ckpt.params.equals(params));
    CHECK(ckpt.state.hidden == state.hidden);
    CHECK(ckpt.config.dim == cc.dim);
    CHECK(ckpt.config.use_reward_baseline == cc.use_reward_baseline);
  }

  // After 10 updates the restored controller continues identically.
  StrategyVector prev = StrategyVector::Constant(2, 0.5);
  for (int i = 0; i < 10; ++i) {
    auto [step, s1] = policy_forward(params, state, prev, cc,
                                     static_cast<std::uint64_t>(i));
    std::tie(params, state) = policy_update(params, s1, step, 0.3 + 0.01 * i, cc);
    prev = step.sampled_action;
  }
  const auto blob = save_checkpoint(cc, params, state);
  const ControllerCheckpoint ckpt = load_checkpoint(blob);
  CHECK(ckpt.params.equals(params));
  CHECK(ckpt.state.rms_acc.equals(state.rms_acc));
  CHECK(ckpt.state.reward_baseline == state.reward_baseline);

  auto [step_a, sa] = policy_forward(params, state, prev, cc, 777);
  auto [step_b, sb] = policy_forward(ckpt.params, ckpt.state, prev, ckpt.config, 777);
  CHECK(step_a.sampled_action == step_b.sampled_action);
  CHECK(step_a.log_prob == step_b.log_prob);
  CHECK(sa.hidden == sb.hidden);
}

TEST_CASE("corrupt checkpoint blobs are rejected, never half-decoded") {
  ControllerConfig cc = small_config(2, 3);
  auto [params, state] = init_controller(cc, 8);
  auto blob = save_checkpoint(cc, params, state);

  // Truncation at every prefix length a few bytes wide.
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{9},
                          blob.size() / 2, blob.size() - 1}) {
    std::vector<std::uint8_t> truncated(blob.begin(),
                                        blob.begin() + static_cast<long>(cut));
    CHECK_THROWS_AS(load_checkpoint(truncated), DecodeError);
  }

  // Wrong magic.
  auto bad_magic = blob;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(load_checkpoint(bad_magic), DecodeError);

  // Wrong version.
  auto bad_version = blob;
  bad_version[4] = 0xEE;
  CHECK_THROWS_AS(load_checkpoint(bad_version), DecodeError);

  // Trailing garbage.
  auto trailing = blob;
  trailing.push_back(0);
  CHECK_THROWS_AS(load_checkpoint(trailing), DecodeError);
}
