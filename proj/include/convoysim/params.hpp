#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "convoysim/errors.hpp"

namespace convoysim {

enum class Severity { Warning, Error };

enum class ParamSource { File, TableDefault };

struct Provenance {
  ParamSource source = ParamSource::TableDefault;
  int line = 0;  // 1-based, meaningful when source == File
};

/// Value of one autopilot parameter: a decimal number or an enumerated token.
class ParamValue {
 public:
  ParamValue() : v_(0.0) {}
  ParamValue(double number) : v_(number) {}
  ParamValue(std::string token) : v_(std::move(token)) {}
  ParamValue(const char* token) : v_(std::string(token)) {}

  bool is_number() const { return std::holds_alternative<double>(v_); }
  double number() const;              // throws ContractError on a token
  const std::string& token() const;   // throws ContractError on a number
  std::string text() const;           // serialized form

  bool operator==(const ParamValue&) const = default;

 private:
  std::variant<double, std::string> v_;
};

struct ParamEntry {
  ParamValue value;
  Provenance provenance;
};

/// Named autopilot parameters. Names are unique; every entry carries its
/// provenance (file line or table default).
class ParamSet {
 public:
  void set(const std::string& name, ParamValue value, Provenance prov);
  bool has(std::string_view name) const;
  const ParamEntry& at(std::string_view name) const;  // throws NotFoundError
  double number(std::string_view name) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Value equality, provenance ignored (parse/serialize round trips).
  bool same_values(const ParamSet& other) const;

 private:
  std::map<std::string, ParamEntry, std::less<>> entries_;
};

/// Parses `NAME VALUE` lines. `#` starts a comment, blank lines are skipped,
/// the value is everything after the first whitespace run (tokens may contain
/// spaces, e.g. "Ground Rover"). Duplicate names raise DuplicateParamError;
/// a non-numeric value for a known numeric parameter raises ParseError.
ParamSet parse_param_file(std::string_view text);

/// Name-ordered `NAME VALUE` lines; reparsing yields an equal set.
std::string serialize(const ParamSet& params);

/// All 19 stock parameters with their published values.
ParamSet table1_defaults();

/// ArduPilot equivalent for a stock parameter name (verbatim, including
/// `=value` forms). Unknown names raise NotFoundError.
std::string_view to_ardupilot(std::string_view px4_name);

const std::vector<std::string>& table1_names();

/// Measured properties of the physical vehicle.
struct PhysicalSpec {
  double wheelbase_m = 0.48006;
  double vehicle_length_m = 0.75;
  double max_steer_rad = 0.44;
  double max_motor_speed_mps = 6.0;

  void validate() const;  // throws ContractError
};

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string rule;
  std::vector<std::string> params;  // parameter names, or PHYSICAL_SPEC
  std::string message;

  std::string format() const;  // "SEVERITY RULE PARAM,...: message"
  bool operator==(const Diagnostic&) const = default;
};

/// Order-stable consistency checks over the effective parameter set
/// (file entries overlaid on the stock defaults):
///   R1 error   throttle ordering THR_MIN <= THR_CRUISE <= THR_MAX
///   R2 warning GND_THR_MAX above 50 % risks abrupt torque onset
///   R3 error   wheelbase parameter vs. measured wheelbase (> 1 cm apart)
///   R4 error   disarmed PWM outside [800, 2200] us
///   R5 warning MAV_1_RATE * 10 exceeds the SER_TEL2_BAUD link rate
///   R6 error   enumerated parameter carries an unknown token
std::vector<Diagnostic> lint(const ParamSet& params, const PhysicalSpec& spec);

/// Simulator configuration, SI units throughout.
///
/// The speed-loop gains arrive in PX4's normalized-throttle convention
/// ([0..1] full scale); effective_config() scales them by 100 so they act on
/// the percent throttle used everywhere else.
struct SimConfig {
  // Parameter-derived fields.
  double wheelbase_m = 0.48006;
  double thr_min_pct = 0.0;
  double thr_cruise_pct = 30.0;
  double thr_max_pct = 50.0;
  double speed_p_pct_per_mps = 25.0;
  double integrator_limit_pct = 12.5;
  double throttle_scaler = 1.0;
  double pwm_trim_us = 1500.0;

  // Simulator fields with design defaults.
  double speed_i_pct_per_mps_s = 5.0;
  double pwm_min_us = 1000.0;
  double pwm_max_us = 2000.0;
  bool pwm_quantize = false;
  double gps_rate_hz = 10.0;
  double gps_sigma_m = 0.02;
  double bsm_rate_hz = 10.0;
  double physics_dt_s = 0.01;
  double motor_tau_s = 0.5;
  double stanley_gain = 2.5;       // 1/s
  double stanley_softening_mps = 0.1;

  // Vehicle geometry and limits, filled from PhysicalSpec.
  double vehicle_length_m = 0.75;
  double max_steer_rad = 0.44;
  double max_speed_mps = 6.0;

  void validate() const;  // throws ContractError
};

class ConfigError : public SimError {
 public:
  ConfigError(const std::string& msg, std::vector<Diagnostic> diags)
      : SimError(msg), diags_(std::move(diags)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Translates a linted parameter set into simulator configuration
/// (feet -> meters via 0.3048 exactly, normalized gains -> percent).
/// Lint errors raise ConfigError carrying the diagnostics.
SimConfig effective_config(const ParamSet& params, const PhysicalSpec& spec);

}  // namespace convoysim
