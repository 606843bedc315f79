#include "convoysim/params.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

namespace convoysim {

namespace {

constexpr double kFeetToMeters = 0.3048;

// Parameters whose values must be numeric.
const std::set<std::string, std::less<>>& numeric_names() {
  static const std::set<std::string, std::less<>> names = {
      "GND_SPEED_IMAX", "GND_SPEED_P",    "GND_SPEED_THR_SC",
      "GND_THR_CRUISE", "GND_THR_MAX",    "GND_THR_MIN",
      "GND_WHEEL_BASE", "GPS_UBX_BAUD2",  "MAV_1_RATE",
      "PWM_MAIN_DIS2",  "PWM_MAIN_DIS7",  "SER_GPS1_BAUD",
      "SER_TEL2_BAUD"};
  return names;
}

// Enumerated parameters and their accepted tokens.
const std::map<std::string, std::vector<std::string>, std::less<>>&
enum_tokens() {
  static const std::map<std::string, std::vector<std::string>, std::less<>>
      tokens = {
          {"GPS_UBX_DYNMODEL", {"automotive"}},
          {"GPS_UBX_MODE", {"Rover+Base"}},
          {"MAV_1_CONFIG", {"TELEM2"}},
          {"MAV_TYPE", {"Ground Rover"}},
          {"PWM_MAIN_FUNC2", {"Steering"}},
          {"PWM_MAIN_FUNC7", {"Throttle"}},
      };
  return tokens;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double param_number(const ParamSet& p, std::string_view name) {
  return p.at(name).value.number();
}

// File entries overlaid on the stock defaults; lint and config translation
// both evaluate this effective set.
ParamSet merged_with_defaults(const ParamSet& params) {
  ParamSet merged = table1_defaults();
  for (const auto& [name, entry] : params)
    merged.set(name, entry.value, entry.provenance);
  return merged;
}

}  // namespace

double ParamValue::number() const {
  if (!is_number()) throw ContractError("parameter value is not numeric");
  return std::get<double>(v_);
}

const std::string& ParamValue::token() const {
  if (is_number()) throw ContractError("parameter value is not a token");
  return std::get<std::string>(v_);
}

std::string ParamValue::text() const {
  return is_number() ? format_double(std::get<double>(v_))
                     : std::get<std::string>(v_);
}

void ParamSet::set(const std::string& name, ParamValue value, Provenance prov) {
  entries_[name] = ParamEntry{std::move(value), prov};
}

bool ParamSet::has(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const ParamEntry& ParamSet::at(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end())
    throw NotFoundError("unknown parameter: " + std::string(name));
  return it->second;
}

double ParamSet::number(std::string_view name) const {
  return at(name).value.number();
}

bool ParamSet::same_values(const ParamSet& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (const auto& [name, entry] : entries_) {
    auto it = other.entries_.find(name);
    if (it == other.entries_.end() || !(it->second.value == entry.value))
      return false;
  }
  return true;
}

ParamSet parse_param_file(std::string_view text) {
  ParamSet out;
  std::map<std::string, int, std::less<>> seen_lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t split = line.find_first_of(" \t");
    if (split == std::string_view::npos)
      throw ParseError("line " + std::to_string(line_no) + ": missing value",
                       line_no);
    std::string name(trim(line.substr(0, split)));
    std::string_view value_text = trim(line.substr(split));
    if (value_text.empty())
      throw ParseError("line " + std::to_string(line_no) + ": missing value",
                       line_no);

    if (auto it = seen_lines.find(name); it != seen_lines.end())
      throw DuplicateParamError("duplicate parameter " + name + " on lines " +
                                    std::to_string(it->second) + " and " +
                                    std::to_string(line_no),
                                it->second, line_no);

    double num = 0.0;
    ParamValue value;
    if (parse_double(value_text, num)) {
      value = ParamValue(num);
    } else {
      if (numeric_names().count(name) > 0)
        throw ParseError("line " + std::to_string(line_no) + ": " + name +
                             " expects a numeric value, got '" +
                             std::string(value_text) + "'",
                         line_no);
      value = ParamValue(std::string(value_text));
    }
    seen_lines.emplace(name, line_no);
    out.set(name, value, Provenance{ParamSource::File, line_no});
  }
  return out;
}

std::string serialize(const ParamSet& params) {
  std::string out;
  for (const auto& [name, entry] : params) {
    out += name;
    out += ' ';
    out += entry.value.text();
    out += '\n';
  }
  return out;
}

ParamSet table1_defaults() {
  ParamSet p;
  const Provenance d{ParamSource::TableDefault, 0};
  p.set("GND_SPEED_IMAX", 0.125, d);
  p.set("GND_SPEED_P", 0.250, d);
  p.set("GND_SPEED_THR_SC", 1.000, d);
  p.set("GND_THR_CRUISE", 30.0, d);
  p.set("GND_THR_MAX", 50.0, d);
  p.set("GND_THR_MIN", 0.0, d);
  p.set("GND_WHEEL_BASE", 1.575, d);  // feet
  p.set("GPS_UBX_BAUD2", 115200.0, d);
  p.set("GPS_UBX_DYNMODEL", "automotive", d);
  p.set("GPS_UBX_MODE", "Rover+Base", d);
  p.set("MAV_1_CONFIG", "TELEM2", d);
  p.set("MAV_1_RATE", 10000.0, d);
  p.set("MAV_TYPE", "Ground Rover", d);
  p.set("PWM_MAIN_DIS2", 1500.0, d);
  p.set("PWM_MAIN_DIS7", 1500.0, d);
  p.set("PWM_MAIN_FUNC2", "Steering", d);
  p.set("PWM_MAIN_FUNC7", "Throttle", d);
  p.set("SER_GPS1_BAUD", 115200.0, d);
  p.set("SER_TEL2_BAUD", 115200.0, d);
  return p;
}

std::string_view to_ardupilot(std::string_view px4_name) {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"GND_SPEED_IMAX", "SPEED_IMAX"},
      {"GND_SPEED_P", "SPEED_P"},
      {"GND_SPEED_THR_SC", "SPEED_SCALER"},
      {"GND_THR_CRUISE", "THR_CRUISE"},
      {"GND_THR_MAX", "THR_MAX"},
      {"GND_THR_MIN", "THR_MIN"},
      {"GND_WHEEL_BASE", "WHEEL_BASE"},
      {"GPS_UBX_BAUD2", "GPS_BAUD"},
      {"GPS_UBX_DYNMODEL", "GPS_NAVFILTER"},
      {"GPS_UBX_MODE", "GPS_TYPE"},
      {"MAV_1_CONFIG", "SERIALn_PROTOCOL=1"},
      {"MAV_1_RATE", "SERIALn_BAUD"},
      {"MAV_TYPE", "FRAME_CLASS=ROVER"},
      {"PWM_MAIN_DIS2", "SERVOx_TRIM"},
      {"PWM_MAIN_DIS7", "SERVOx_TRIM"},
      {"PWM_MAIN_FUNC2", "SERVOx_FUNCTION=26"},
      {"PWM_MAIN_FUNC7", "SERVOx_FUNCTION=70"},
      {"SER_GPS1_BAUD", "SERIALn_BAUD"},
      {"SER_TEL2_BAUD", "SERIALn_BAUD"},
  };
  auto it = table.find(px4_name);
  if (it == table.end())
    throw NotFoundError("no ArduPilot equivalent for " + std::string(px4_name));
  return it->second;
}

const std::vector<std::string>& table1_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, entry] : table1_defaults()) v.push_back(name);
    return v;
  }();
  return names;
}

void PhysicalSpec::validate() const {
  if (!(wheelbase_m > 0) || !(vehicle_length_m > 0) || !(max_steer_rad > 0) ||
      !(max_motor_speed_mps > 0))
    throw ContractError("physical spec fields must be strictly positive");
  if (!(max_steer_rad < std::numbers::pi / 2))
    throw ContractError("max steering angle must be below pi/2");
}

std::string Diagnostic::format() const {
  std::string out = severity == Severity::Error ? "error" : "warning";
  out += ' ';
  out += rule;
  out += ' ';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ',';
    out += params[i];
  }
  out += ": ";
  out += message;
  return out;
}

std::vector<Diagnostic> lint(const ParamSet& params, const PhysicalSpec& spec) {
  spec.validate();
  const ParamSet p = merged_with_defaults(params);
  std::vector<Diagnostic> diags;

  char buf[160];

  // R1: throttle ordering.
  {
    double mn = param_number(p, "GND_THR_MIN");
    double cr = param_number(p, "GND_THR_CRUISE");
    double mx = param_number(p, "GND_THR_MAX");
    if (!(0.0 <= mn && mn <= cr && cr <= mx && mx <= 100.0)) {
      std::snprintf(buf, sizeof buf,
                    "throttle ordering 0 <= MIN <= CRUISE <= MAX <= 100 "
                    "violated (%g, %g, %g)",
                    mn, cr, mx);
      diags.push_back({Severity::Error,
                       "R1",
                       {"GND_THR_MIN", "GND_THR_CRUISE", "GND_THR_MAX"},
                       buf});
    }
  }

  // R2: throttle cap above 50 % risks abrupt torque onset at low speed.
  {
    double mx = param_number(p, "GND_THR_MAX");
    if (mx > 50.0) {
      std::snprintf(buf, sizeof buf,
                    "GND_THR_MAX %g%% exceeds 50%%: abrupt torque onset risk",
                    mx);
      diags.push_back({Severity::Warning, "R2", {"GND_THR_MAX"}, buf});
    }
  }

  // R3: configured wheelbase must match the measured axle separation.
  {
    double wb_m = param_number(p, "GND_WHEEL_BASE") * kFeetToMeters;
    if (std::abs(wb_m - spec.wheelbase_m) > 0.01) {
      std::snprintf(buf, sizeof buf,
                    "GND_WHEEL_BASE %.5f m differs from measured wheelbase "
                    "%.5f m by more than 0.01 m",
                    wb_m, spec.wheelbase_m);
      diags.push_back(
          {Severity::Error, "R3", {"GND_WHEEL_BASE", "PHYSICAL_SPEC"}, buf});
    }
  }

  // R4: disarmed PWM must stay inside the safe servo band.
  for (const char* name : {"PWM_MAIN_DIS2", "PWM_MAIN_DIS7"}) {
    double us = param_number(p, name);
    if (us < 800.0 || us > 2200.0) {
      std::snprintf(buf, sizeof buf,
                    "%s %g us outside the safe disarmed band [800, 2200] us",
                    name, us);
      diags.push_back({Severity::Error, "R4", {name}, buf});
    }
  }

  // R5: telemetry payload rate vs. serial link rate.
  {
    double rate = param_number(p, "MAV_1_RATE");
    double baud = param_number(p, "SER_TEL2_BAUD");
    if (rate * 10.0 > baud) {
      std::snprintf(buf, sizeof buf,
                    "MAV_1_RATE %g B/s needs ~%g baud, link is %g baud", rate,
                    rate * 10.0, baud);
      diags.push_back(
          {Severity::Warning, "R5", {"MAV_1_RATE", "SER_TEL2_BAUD"}, buf});
    }
  }

  // R6: enumerated parameters must carry a known token.
  for (const auto& [name, allowed] : enum_tokens()) {
    const ParamEntry& entry = p.at(name);
    bool ok = !entry.value.is_number() &&
              std::find(allowed.begin(), allowed.end(), entry.value.token()) !=
                  allowed.end();
    if (!ok) {
      std::snprintf(buf, sizeof buf, "%s value '%s' is not a known token",
                    name.c_str(), entry.value.text().c_str());
      diags.push_back({Severity::Error, "R6", {name}, buf});
    }
  }

  return diags;
}

void SimConfig::validate() const {
  if (!(0.0 <= thr_min_pct && thr_min_pct <= thr_cruise_pct &&
        thr_cruise_pct <= thr_max_pct && thr_max_pct <= 100.0))
    throw ContractError("throttle percentages must satisfy 0 <= min <= cruise <= max <= 100");
  if (!(wheelbase_m > 0)) throw ContractError("wheelbase must be positive");
  if (!(physics_dt_s > 0)) throw ContractError("physics step must be positive");
  if (!(motor_tau_s > 0)) throw ContractError("motor time constant must be positive");
  if (!(gps_sigma_m >= 0)) throw ContractError("GPS sigma must be non-negative");
  if (!(vehicle_length_m > 0) || !(max_speed_mps > 0))
    throw ContractError("vehicle length and max speed must be positive");
  if (!(max_steer_rad > 0 && max_steer_rad < std::numbers::pi / 2))
    throw ContractError("max steering angle must lie in (0, pi/2)");
  const double physics_rate = 1.0 / physics_dt_s;
  for (double rate : {gps_rate_hz, bsm_rate_hz}) {
    if (!(rate > 0)) throw ContractError("sensor/message rates must be positive");
    double div = physics_rate / rate;
    if (std::abs(div - std::round(div)) > 1e-9 || std::round(div) < 1.0)
      throw ContractError("GPS and BSM rates must divide the physics rate");
  }
}

SimConfig effective_config(const ParamSet& params, const PhysicalSpec& spec) {
  std::vector<Diagnostic> diags = lint(params, spec);
  bool has_error = std::any_of(diags.begin(), diags.end(), [](const auto& d) {
    return d.severity == Severity::Error;
  });
  if (has_error)
    throw ConfigError("parameter set has lint errors", std::move(diags));

  const ParamSet p = merged_with_defaults(params);
  SimConfig cfg;
  cfg.wheelbase_m = param_number(p, "GND_WHEEL_BASE") * kFeetToMeters;
  cfg.thr_min_pct = param_number(p, "GND_THR_MIN");
  cfg.thr_cruise_pct = param_number(p, "GND_THR_CRUISE");
  cfg.thr_max_pct = param_number(p, "GND_THR_MAX");
  // Normalized-throttle gains to percent.
  cfg.speed_p_pct_per_mps = param_number(p, "GND_SPEED_P") * 100.0;
  cfg.integrator_limit_pct = param_number(p, "GND_SPEED_IMAX") * 100.0;
  cfg.throttle_scaler = param_number(p, "GND_SPEED_THR_SC");
  cfg.pwm_trim_us = param_number(p, "PWM_MAIN_DIS2");

  cfg.vehicle_length_m = spec.vehicle_length_m;
  cfg.max_steer_rad = spec.max_steer_rad;
  cfg.max_speed_mps = spec.max_motor_speed_mps;

  cfg.validate();
  return cfg;
}

}  // namespace convoysim
