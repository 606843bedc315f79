#pragma once

#include <optional>

#include "convoysim/params.hpp"
#include "convoysim/rng.hpp"

namespace convoysim {

/// Planar pose and speed of one vehicle. Heading is kept in (-pi, pi];
/// speed never goes negative (no reverse is modeled).
struct VehicleState {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double rad);

/// Kinematic bicycle step. Position advances along the mid-step heading,
/// which keeps constant-steer motion on a circle instead of spiraling
/// outward the way a plain forward-Euler update does. Speed is untouched
/// (longitudinal dynamics are separate). Throws NumericError on non-finite
/// inputs.
VehicleState step_bicycle(const VehicleState& state, double steer_rad,
                          double dt_s, double wheelbase_m);

/// First-order throttle-to-speed response toward (throttle/100) * v_max,
/// clamped at zero. Throws NumericError on non-finite inputs.
double step_speed(double speed_mps, double throttle_pct, double dt_s,
                  double max_speed_mps, double tau_s);

struct ActuatorCommand {
  double steer_rad = 0.0;     // clamped to +-max steering by the producer
  double throttle_pct = 0.0;  // within [THR_MIN, THR_MAX]
  bool armed = false;
};

struct PwmPair {
  double steer_us = 1500.0;
  double throttle_us = 1500.0;
  bool operator==(const PwmPair&) const = default;
};

/// Servo pulse widths for a command. Disarmed is exactly (trim, trim).
/// Steering maps +-max_steer onto [pwm_min, pwm_max] around the trim;
/// throttle maps [0, 100] %% onto [trim, pwm_max]. With cfg.pwm_quantize the
/// result is rounded to whole microseconds.
PwmPair command_to_pwm(const ActuatorCommand& cmd, const SimConfig& cfg);

/// Inverse of command_to_pwm for an armed command.
ActuatorCommand pwm_to_command(const PwmPair& pwm, const SimConfig& cfg);

struct GpsFix {
  double x_m = 0.0;
  double y_m = 0.0;
  double t_s = 0.0;
  bool valid = false;
};

/// Position fix with independent zero-mean Gaussian noise on each axis.
/// Emits only when t lies on the rate grid; returns nothing in between.
std::optional<GpsFix> gps_measure(const VehicleState& state, double t_s,
                                  double sigma_m, double rate_hz, Rng& rng);

}  // namespace convoysim
