#include "convoysim/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace convoysim {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite ") + what);
}

}  // namespace

double normalize_angle(double rad) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(rad + std::numbers::pi, two_pi);
  if (r <= 0.0) r += two_pi;
  return r - std::numbers::pi;
}

VehicleState step_bicycle(const VehicleState& state, double steer_rad,
                          double dt_s, double wheelbase_m) {
  require_finite({state.x_m, state.y_m, state.heading_rad, state.speed_mps,
                  steer_rad, dt_s, wheelbase_m},
                 "bicycle step input");
  if (!(dt_s > 0)) throw ContractError("dt must be positive");
  if (!(wheelbase_m > 0)) throw ContractError("wheelbase must be positive");

  const double yaw_rate = state.speed_mps / wheelbase_m * std::tan(steer_rad);
  const double dheading = yaw_rate * dt_s;
  const double mid_heading = state.heading_rad + 0.5 * dheading;

  VehicleState next = state;
  next.x_m += state.speed_mps * std::cos(mid_heading) * dt_s;
  next.y_m += state.speed_mps * std::sin(mid_heading) * dt_s;
  next.heading_rad = normalize_angle(state.heading_rad + dheading);
  return next;
}

double step_speed(double speed_mps, double throttle_pct, double dt_s,
                  double max_speed_mps, double tau_s) {
  require_finite({speed_mps, throttle_pct, dt_s, max_speed_mps, tau_s},
                 "speed step input");
  if (!(tau_s > 0)) throw ContractError("tau must be positive");
  const double commanded = throttle_pct / 100.0 * max_speed_mps;
  double next = speed_mps + dt_s * (commanded - speed_mps) / tau_s;
  return std::max(0.0, next);
}

PwmPair command_to_pwm(const ActuatorCommand& cmd, const SimConfig& cfg) {
  if (!cmd.armed) return PwmPair{cfg.pwm_trim_us, cfg.pwm_trim_us};

  const double trim = cfg.pwm_trim_us;
  double steer_us;
  if (cmd.steer_rad >= 0.0)
    steer_us = trim + cmd.steer_rad / cfg.max_steer_rad * (cfg.pwm_max_us - trim);
  else
    steer_us = trim + cmd.steer_rad / cfg.max_steer_rad * (trim - cfg.pwm_min_us);
  double throttle_us = trim + cmd.throttle_pct / 100.0 * (cfg.pwm_max_us - trim);

  if (cfg.pwm_quantize) {
    steer_us = std::round(steer_us);
    throttle_us = std::round(throttle_us);
  }
  return PwmPair{steer_us, throttle_us};
}

ActuatorCommand pwm_to_command(const PwmPair& pwm, const SimConfig& cfg) {
  const double trim = cfg.pwm_trim_us;
  ActuatorCommand cmd;
  cmd.armed = true;
  if (pwm.steer_us >= trim)
    cmd.steer_rad = (pwm.steer_us - trim) / (cfg.pwm_max_us - trim) * cfg.max_steer_rad;
  else
    cmd.steer_rad = (pwm.steer_us - trim) / (trim - cfg.pwm_min_us) * cfg.max_steer_rad;
  cmd.throttle_pct = (pwm.throttle_us - trim) / (cfg.pwm_max_us - trim) * 100.0;
  return cmd;
}

std::optional<GpsFix> gps_measure(const VehicleState& state, double t_s,
                                  double sigma_m, double rate_hz, Rng& rng) {
  if (!(sigma_m >= 0)) throw ContractError("sigma must be non-negative");
  if (!(rate_hz > 0)) throw ContractError("rate must be positive");
  const double beats = t_s * rate_hz;
  if (std::abs(beats - std::round(beats)) > 1e-6) return std::nullopt;

  GpsFix fix;
  fix.t_s = t_s;
  fix.valid = true;
  if (sigma_m > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_m);
    fix.x_m = state.x_m + noise(rng);
    fix.y_m = state.y_m + noise(rng);
  } else {
    fix.x_m = state.x_m;
    fix.y_m = state.y_m;
  }
  return fix;
}

}  // namespace convoysim
