#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "convoysim/dynamics.hpp"
#include "convoysim/params.hpp"
#include "convoysim/track.hpp"
#include "convoysim/v2v.hpp"

namespace convoysim {

/// Stanley lateral law: heading correction plus the arctangent of the
/// speed-scaled cross-track error, clamped to the steering range.
///
/// `cross_track_m` is signed positive when the path lies to the vehicle's
/// left (vehicle right of the path); `heading_error_rad` is path tangent
/// minus vehicle heading. Both conventions make positive outputs steer left.
/// The softening constant keeps the law finite as speed approaches zero.
/// Throws NumericError on non-finite inputs.
double stanley_steer(double cross_track_m, double heading_error_rad,
                     double speed_mps, double gain_1ps, double softening_mps,
                     double max_steer_rad);

/// Feedforward steering that holds a path of the given curvature.
double curvature_feedforward(double curvature_1pm, double wheelbase_m);

struct SpeedLoopState {
  double integrator_pct = 0.0;  // clamped to +-integrator_limit_pct
  double last_error_mps = 0.0;
};

/// One PI speed-loop step with integrator anti-windup:
///   e  = target - measured
///   I' = clamp(I + Ki * e * dt, +-IMAX)
///   throttle = clamp(CRUISE + SCALER * (Kp * e + I'), THR_MIN, THR_MAX)
std::pair<double, SpeedLoopState> speed_pid_step(const SpeedLoopState& st,
                                                 double v_target_mps,
                                                 double v_meas_mps,
                                                 const SimConfig& cfg,
                                                 double dt_s);

/// Convoy gap policy. The effective headway stretches with the estimated
/// packet loss toward the predecessor: h_eff = h * (1 + alpha * p_hat).
struct GapPolicy {
  double standstill_gap_m = 1.0;   // d0
  double headway_s = 1.0;          // h
  double loss_gain = 1.0;          // alpha
  double gap_p_1ps = 0.8;
  double speed_match_gain = 0.3;   // blend toward the leader's reported speed
  double stale_after_s = 0.5;      // predecessor silence that triggers decay
  double stale_decel_mps2 = 1.0;
  double loss_window_s = 2.0;      // loss estimation window
};

/// Latest knowledge about one upstream vehicle.
struct UpstreamEntry {
  Bsm latest;
  double receipt_t_s = 0.0;
  double loss_estimate = 0.0;  // p_hat in [0, 1]
};

/// Everything a follower knows about the vehicles ahead of it.
struct UpstreamView {
  std::map<int, UpstreamEntry> by_sender;
  int predecessor_id = 0;
  int leader_id = 0;
};

/// Desired gap (front bumper to rear bumper) for the current speed.
double desired_gap(const GapPolicy& policy, double speed_mps,
                   double loss_estimate);

/// Adaptive time-gap speed command for a follower.
///
/// The predecessor's position is coasted forward from its last message by
/// its reported speed and the message staleness, projected onto the path,
/// and turned into a bumper-to-bumper gap. The command is the predecessor's
/// speed blended toward the leader's, plus a proportional correction on the
/// gap error, clamped to [0, max speed]. A predecessor silent for longer
/// than the staleness threshold makes the command decay toward zero.
/// Throws ContractError when the view lacks the predecessor.
double timegap_target_speed(const VehicleState& self, const UpstreamView& view,
                            const GapPolicy& policy, const Path& path,
                            double vehicle_length_m, double max_speed_mps,
                            double now_s);

/// Windowed packet-loss estimate: 1 - received/expected over the trailing
/// window, clamped to [0, 1]. expected = floor(window * cadence); a window
/// too short to expect any message yields 0.
double estimate_loss(const std::vector<double>& receipt_times_s,
                     double cadence_hz, double window_s, double now_s);

}  // namespace convoysim
