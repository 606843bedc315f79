#include "convoysim/control.hpp"

#include <algorithm>
#include <cmath>

namespace convoysim {

double stanley_steer(double cross_track_m, double heading_error_rad,
                     double speed_mps, double gain_1ps, double softening_mps,
                     double max_steer_rad) {
  for (double v : {cross_track_m, heading_error_rad, speed_mps, gain_1ps,
                   softening_mps, max_steer_rad})
    if (!std::isfinite(v)) throw NumericError("non-finite stanley input");
  if (!(speed_mps >= 0)) throw ContractError("speed must be non-negative");
  if (!(gain_1ps > 0) || !(softening_mps > 0))
    throw ContractError("stanley gain and softening must be positive");

  const double steer =
      heading_error_rad +
      std::atan2(gain_1ps * cross_track_m, speed_mps + softening_mps);
  return std::clamp(steer, -max_steer_rad, max_steer_rad);
}

double curvature_feedforward(double curvature_1pm, double wheelbase_m) {
  return std::atan(wheelbase_m * curvature_1pm);
}

std::pair<double, SpeedLoopState> speed_pid_step(const SpeedLoopState& st,
                                                 double v_target_mps,
                                                 double v_meas_mps,
                                                 const SimConfig& cfg,
                                                 double dt_s) {
  if (!(dt_s > 0)) throw ContractError("dt must be positive");
  const double error = v_target_mps - v_meas_mps;

  SpeedLoopState next;
  next.integrator_pct =
      std::clamp(st.integrator_pct + cfg.speed_i_pct_per_mps_s * error * dt_s,
                 -cfg.integrator_limit_pct, cfg.integrator_limit_pct);
  next.last_error_mps = error;

  const double raw = cfg.speed_p_pct_per_mps * error + next.integrator_pct;
  const double throttle =
      std::clamp(cfg.thr_cruise_pct + cfg.throttle_scaler * raw,
                 cfg.thr_min_pct, cfg.thr_max_pct);
  return {throttle, next};
}

double desired_gap(const GapPolicy& policy, double speed_mps,
                   double loss_estimate) {
  const double h_eff =
      policy.headway_s * (1.0 + policy.loss_gain * loss_estimate);
  return policy.standstill_gap_m + h_eff * speed_mps;
}

double timegap_target_speed(const VehicleState& self, const UpstreamView& view,
                            const GapPolicy& policy, const Path& path,
                            double vehicle_length_m, double max_speed_mps,
                            double now_s) {
  auto pred_it = view.by_sender.find(view.predecessor_id);
  if (pred_it == view.by_sender.end())
    throw ContractError("upstream view lacks the immediate predecessor");
  const UpstreamEntry& pred = pred_it->second;

  const double staleness = std::max(0.0, now_s - pred.latest.t_s);

  // Fail safe: predecessor has gone quiet, bleed speed off.
  if (staleness > policy.stale_after_s) {
    const double over = staleness - policy.stale_after_s;
    return std::clamp(self.speed_mps - policy.stale_decel_mps2 * over, 0.0,
                      max_speed_mps);
  }

  // Coast the predecessor forward from its last report.
  const double coast = pred.latest.speed_mps * staleness;
  const double px = pred.latest.x_m + coast * std::cos(pred.latest.heading_rad);
  const double py = pred.latest.y_m + coast * std::sin(pred.latest.heading_rad);

  const double s_self = path.nearest(self.x_m, self.y_m).s_m;
  const double s_pred = path.nearest(px, py).s_m;
  const double gap = path.forward_distance(s_self, s_pred) - vehicle_length_m;
  const double gap_err =
      gap - desired_gap(policy, self.speed_mps, pred.loss_estimate);

  // Base speed: predecessor's report blended toward the leader's.
  double base = pred.latest.speed_mps;
  if (auto leader_it = view.by_sender.find(view.leader_id);
      leader_it != view.by_sender.end() && view.leader_id != view.predecessor_id)
    base += policy.speed_match_gain * (leader_it->second.latest.speed_mps - base);

  const double target = base + policy.gap_p_1ps * gap_err;
  return std::clamp(target, 0.0, max_speed_mps);
}

double estimate_loss(const std::vector<double>& receipt_times_s,
                     double cadence_hz, double window_s, double now_s) {
  if (!(cadence_hz > 0)) throw ContractError("cadence must be positive");
  if (!(window_s > 0)) throw ContractError("window must be positive");

  const double expected = std::floor(window_s * cadence_hz);
  if (expected < 1.0) return 0.0;

  long received = 0;
  for (double t : receipt_times_s)
    if (t >= now_s - window_s && t <= now_s) ++received;

  const double p = 1.0 - static_cast<double>(received) / expected;
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace convoysim
