#include <doctest.h>

#include <cmath>
#include <random>

#include "convoysim/control.hpp"

using namespace convoysim;

namespace {

SimConfig table_cfg() {
  return effective_config(table1_defaults(), PhysicalSpec{});
}

UpstreamView single_pred_view(const Bsm& pred, double receipt_t,
                              double loss = 0.0) {
  UpstreamView view;
  view.predecessor_id = pred.sender_id;
  view.leader_id = pred.sender_id;
  view.by_sender[pred.sender_id] = UpstreamEntry{pred, receipt_t, loss};
  return view;
}

}  // namespace

TEST_CASE("stanley on-path aligned gives zero steer") {
  CHECK(stanley_steer(0.0, 0.0, 1.0, 2.5, 0.1, 0.44) == doctest::Approx(0.0));
}

TEST_CASE("stanley cross-track term evaluates the arctangent law") {
  const double steer = stanley_steer(0.1, 0.0, 1.0, 2.5, 0.1, 0.44);
  CHECK(steer == doctest::Approx(std::atan2(0.25, 1.1)).epsilon(1e-12));
  CHECK(steer == doctest::Approx(0.2234).epsilon(1e-3));
}

TEST_CASE("stanley saturates at the steering limit") {
  CHECK(stanley_steer(10.0, 0.0, 1.0, 2.5, 0.1, 0.44) == doctest::Approx(0.44));
  CHECK(stanley_steer(-10.0, 0.0, 3.0, 2.5, 0.1, 0.44) ==
        doctest::Approx(-0.44));
}

TEST_CASE("stanley is odd in (cross_track, heading_error) jointly") {
  std::mt19937 gen(21);
  std::uniform_real_distribution<double> e(-0.5, 0.5), psi(-0.8, 0.8),
      v(0.0, 6.0);
  for (int i = 0; i < 5000; ++i) {
    const double ct = e(gen), he = psi(gen), sp = v(gen);
    const double pos = stanley_steer(ct, he, sp, 2.5, 0.1, 0.44);
    const double neg = stanley_steer(-ct, -he, sp, 2.5, 0.1, 0.44);
    CHECK(pos == doctest::Approx(-neg).epsilon(1e-12));
  }
}

TEST_CASE("stanley magnitude is nondecreasing in the cross-track error") {
  for (double v : {0.0, 0.5, 2.0}) {
    double prev = -1.0;
    for (double ct = 0.0; ct <= 3.0; ct += 0.05) {
      const double mag = std::abs(stanley_steer(ct, 0.0, v, 2.5, 0.1, 0.44));
      CHECK(mag >= prev - 1e-12);
      prev = mag;
    }
  }
}

TEST_CASE("stanley rejects non-finite input") {
  CHECK_THROWS_AS(
      stanley_steer(std::nan(""), 0.0, 1.0, 2.5, 0.1, 0.44), NumericError);
}

TEST_CASE("curvature feedforward holds a circle") {
  // On a 2 m radius arc a 0.48006 m wheelbase needs atan(L/R).
  CHECK(curvature_feedforward(0.5, 0.48006) ==
        doctest::Approx(std::atan(0.24003)).epsilon(1e-12));
  CHECK(curvature_feedforward(0.0, 0.48006) == doctest::Approx(0.0));
  CHECK(curvature_feedforward(-0.5, 0.48006) ==
        doctest::Approx(-std::atan(0.24003)).epsilon(1e-12));
}

TEST_CASE("speed loop at zero error rests at cruise throttle") {
  SimConfig cfg = table_cfg();
  auto [throttle, st] = speed_pid_step(SpeedLoopState{}, 2.0, 2.0, cfg, 0.01);
  CHECK(throttle == doctest::Approx(30.0));
  CHECK(st.integrator_pct == doctest::Approx(0.0));
}

TEST_CASE("speed loop proportional step matches the published arithmetic") {
  // Gains handed in raw: P = 0.25 %/(m/s), scaler 1, no integral action.
  SimConfig cfg = table_cfg();
  cfg.speed_p_pct_per_mps = 0.25;
  cfg.speed_i_pct_per_mps_s = 0.0;
  auto [throttle, st] = speed_pid_step(SpeedLoopState{}, 3.0, 2.0, cfg, 0.01);
  CHECK(throttle == doctest::Approx(30.25).epsilon(1e-12));
  CHECK(st.last_error_mps == doctest::Approx(1.0));
}

TEST_CASE("speed loop pins the integrator and caps the throttle") {
  // Sustained +10 m/s error for 100 s with the raw published limits.
  SimConfig cfg = table_cfg();
  cfg.speed_p_pct_per_mps = 0.25;
  cfg.integrator_limit_pct = 0.125;
  cfg.speed_i_pct_per_mps_s = 0.05;
  SpeedLoopState st;
  double throttle = 0.0;
  for (int i = 0; i < 10000; ++i) {
    auto [thr, next] = speed_pid_step(st, 10.0, 0.0, cfg, 0.01);
    throttle = thr;
    st = next;
    CHECK(std::abs(st.integrator_pct) <= 0.125 + 1e-12);
    CHECK(thr <= 50.0);
    CHECK(thr >= 0.0);
  }
  CHECK(st.integrator_pct == doctest::Approx(0.125));
  CHECK(throttle <= 50.0);
}

TEST_CASE("speed loop clamps stay inside the throttle band under fuzz") {
  SimConfig cfg = table_cfg();
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> target(-2.0, 8.0), meas(0.0, 6.0);
  SpeedLoopState st;
  for (int i = 0; i < 1000000; ++i) {
    auto [thr, next] = speed_pid_step(st, target(gen), meas(gen), cfg, 0.01);
    st = next;
    if (!(thr >= cfg.thr_min_pct && thr <= cfg.thr_max_pct))
      FAIL("throttle outside band at tick ", i, ": ", thr);
    if (!(std::abs(st.integrator_pct) <= cfg.integrator_limit_pct + 1e-12))
      FAIL("integrator outside limit at tick ", i, ": ", st.integrator_pct);
  }
}

TEST_CASE("desired gap stretches with the loss estimate") {
  GapPolicy policy;
  CHECK(desired_gap(policy, 2.0, 0.0) == doctest::Approx(3.0));
  // p=0.5, alpha=1, h=1: effective headway 1.5 s.
  CHECK(desired_gap(policy, 2.0, 0.5) == doctest::Approx(1.0 + 1.5 * 2.0));
  CHECK(desired_gap(policy, 0.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("timegap equilibrium keeps the current speed") {
  const Path path = oval_path(8.0, 4.0, 0.02);
  GapPolicy policy;
  const double len = 0.75;
  // Predecessor ahead by exactly d0 + h*v + vehicle length, same speed.
  const double v = 1.5;
  const double gap_des = desired_gap(policy, v, 0.0);
  const PathSample self_p = path.at_s(1.0);
  const PathSample pred_p = path.at_s(1.0 + gap_des + len);
  VehicleState self{self_p.x_m, self_p.y_m, self_p.heading_rad, v};
  Bsm pred{0, 5, 10.0, pred_p.x_m, pred_p.y_m, v, pred_p.heading_rad};
  const double target = timegap_target_speed(
      self, single_pred_view(pred, 10.0), policy, path, len, 6.0, 10.0);
  CHECK(target == doctest::Approx(v).epsilon(5e-3));
}

TEST_CASE("timegap widens the desired gap under loss") {
  const Path path = oval_path(8.0, 4.0, 0.02);
  GapPolicy policy;
  const double len = 0.75;
  const double v = 2.0;
  const PathSample self_p = path.at_s(0.5);
  const PathSample pred_p = path.at_s(0.5 + desired_gap(policy, v, 0.0) + len);
  VehicleState self{self_p.x_m, self_p.y_m, self_p.heading_rad, v};
  Bsm pred{0, 5, 10.0, pred_p.x_m, pred_p.y_m, v, pred_p.heading_rad};
  // With p=0.5 the same geometry is suddenly too close: slow down.
  const double clean = timegap_target_speed(
      self, single_pred_view(pred, 10.0, 0.0), policy, path, len, 6.0, 10.0);
  const double lossy = timegap_target_speed(
      self, single_pred_view(pred, 10.0, 0.5), policy, path, len, 6.0, 10.0);
  CHECK(lossy < clean);
  // The gap deficit is h*alpha*p*v = 1.0, scaled by the gap gain.
  CHECK(clean - lossy ==
        doctest::Approx(policy.gap_p_1ps * 1.0 * 0.5 * 2.0).epsilon(1e-2));
}

TEST_CASE("timegap decays toward zero on a stale predecessor") {
  const Path path = oval_path(8.0, 4.0, 0.02);
  GapPolicy policy;
  const PathSample self_p = path.at_s(1.0);
  VehicleState self{self_p.x_m, self_p.y_m, self_p.heading_rad, 2.0};
  const PathSample pred_p = path.at_s(3.0);
  Bsm pred{0, 5, 10.0, pred_p.x_m, pred_p.y_m, 2.0, pred_p.heading_rad};
  // Message is 0.8 s old at now = 10.8: over the 0.5 s threshold.
  const double target = timegap_target_speed(
      self, single_pred_view(pred, 10.0), policy, path, 0.75, 6.0, 10.8);
  CHECK(target < self.speed_mps);
  CHECK(target == doctest::Approx(2.0 - 1.0 * 0.3).epsilon(1e-9));
  // Far beyond the threshold the command reaches zero.
  const double dead = timegap_target_speed(
      self, single_pred_view(pred, 10.0), policy, path, 0.75, 6.0, 20.0);
  CHECK(dead == doctest::Approx(0.0));
}

TEST_CASE("timegap requires the predecessor entry") {
  const Path path = oval_path(8.0, 4.0, 0.02);
  UpstreamView empty;
  empty.predecessor_id = 1;
  VehicleState self{0, -2, 0, 1.0};
  CHECK_THROWS_AS(timegap_target_speed(self, empty, GapPolicy{}, path, 0.75,
                                       6.0, 0.0),
                  ContractError);
}

TEST_CASE("estimate_loss counting examples") {
  // All expected messages received.
  std::vector<double> all;
  for (int i = 0; i < 10; ++i) all.push_back(9.0 + 0.1 * i);
  CHECK(estimate_loss(all, 10.0, 1.0, 9.9) == doctest::Approx(0.0));
  // None received.
  CHECK(estimate_loss({}, 10.0, 1.0, 9.9) == doctest::Approx(1.0));
  // 5 of 10 expected in a 1 s window at 10 Hz.
  std::vector<double> half = {9.0, 9.2, 9.4, 9.6, 9.8};
  CHECK(estimate_loss(half, 10.0, 1.0, 9.9) == doctest::Approx(0.5));
  // Receipts outside the window do not count.
  CHECK(estimate_loss({1.0, 2.0}, 10.0, 1.0, 9.9) == doctest::Approx(1.0));
  // A window too short to expect anything reports no loss.
  CHECK(estimate_loss({}, 10.0, 0.05, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("estimate_loss converges on deterministic drop patterns") {
  // Drop every k-th message; expected loss 1/k, binomial bound 2/sqrt(N).
  for (int k : {2, 4, 5, 10}) {
    const double cadence = 10.0;
    const double window = 60.0;
    const double now = 100.0;
    std::vector<double> receipts;
    int index = 0;
    for (double t = 0.0; t <= now + 1e-9; t += 1.0 / cadence, ++index)
      if (index % k != 0) receipts.push_back(t);
    const double expected_n = std::floor(window * cadence);
    const double p_hat = estimate_loss(receipts, cadence, window, now);
    CHECK(std::abs(p_hat - 1.0 / k) <= 2.0 / std::sqrt(expected_n));
  }
}
