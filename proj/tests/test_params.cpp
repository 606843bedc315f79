#include <doctest.h>

#include <random>

#include "convoysim/params.hpp"

using namespace convoysim;

namespace {

ParamSet defaults_with(const std::string& name, ParamValue value) {
  ParamSet p = table1_defaults();
  p.set(name, std::move(value), Provenance{ParamSource::File, 1});
  return p;
}

int count_rule(const std::vector<Diagnostic>& diags, const std::string& rule) {
  int n = 0;
  for (const auto& d : diags)
    if (d.rule == rule) ++n;
  return n;
}

}  // namespace

TEST_CASE("parse_param_file basic lines") {
  ParamSet p = parse_param_file("GND_THR_MAX 50.0\n");
  CHECK(p.size() == 1);
  CHECK(p.number("GND_THR_MAX") == doctest::Approx(50.0));
  CHECK(p.at("GND_THR_MAX").provenance.source == ParamSource::File);
  CHECK(p.at("GND_THR_MAX").provenance.line == 1);
}

TEST_CASE("parse_param_file empty input") {
  ParamSet p = parse_param_file("");
  CHECK(p.empty());
}

TEST_CASE("parse_param_file comments, blanks, tokens with spaces") {
  ParamSet p = parse_param_file(
      "# comment line\n"
      "\n"
      "MAV_TYPE Ground Rover   # trailing comment\n"
      "GPS_UBX_MODE Rover+Base\n");
  CHECK(p.size() == 2);
  CHECK(p.at("MAV_TYPE").value.token() == "Ground Rover");
  CHECK(p.at("GPS_UBX_MODE").value.token() == "Rover+Base");
  CHECK(p.at("MAV_TYPE").provenance.line == 3);
}

TEST_CASE("parse_param_file duplicate names rejected with both lines") {
  try {
    parse_param_file("GND_THR_MAX 50.0\nGND_THR_MAX 50.0\n");
    FAIL("expected DuplicateParamError");
  } catch (const DuplicateParamError& e) {
    CHECK(e.first_line() == 1);
    CHECK(e.second_line() == 2);
  }
}

TEST_CASE("parse_param_file malformed lines carry the line number") {
  try {
    parse_param_file("# ok\nGND_THR_MAX\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where() == 2);
  }
  try {
    parse_param_file("GND_THR_MAX not_a_number\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where() == 1);
  }
}

TEST_CASE("parse/serialize round trip") {
  // Random subsets of the stock set plus made-up numeric parameters.
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> value(-1e4, 1e4);
  for (int trial = 0; trial < 200; ++trial) {
    ParamSet original = table1_defaults();
    for (int extra = 0; extra < 5; ++extra)
      original.set("EXTRA_PARAM_" + std::to_string(extra),
                   ParamValue(value(gen)), Provenance{ParamSource::File, 1});
    ParamSet reparsed = parse_param_file(serialize(original));
    CHECK(reparsed.same_values(original));
  }
}

TEST_CASE("table1_defaults carries the published values") {
  ParamSet d = table1_defaults();
  CHECK(d.size() == 19);
  CHECK(d.number("GND_SPEED_IMAX") == doctest::Approx(0.125));
  CHECK(d.number("GND_SPEED_P") == doctest::Approx(0.250));
  CHECK(d.number("GND_SPEED_THR_SC") == doctest::Approx(1.000));
  CHECK(d.number("GND_THR_CRUISE") == doctest::Approx(30.0));
  CHECK(d.number("GND_THR_MAX") == doctest::Approx(50.0));
  CHECK(d.number("GND_THR_MIN") == doctest::Approx(0.0));
  CHECK(d.number("GND_WHEEL_BASE") == doctest::Approx(1.575));
  CHECK(d.number("GPS_UBX_BAUD2") == doctest::Approx(115200.0));
  CHECK(d.number("MAV_1_RATE") == doctest::Approx(10000.0));
  CHECK(d.number("PWM_MAIN_DIS2") == doctest::Approx(1500.0));
  CHECK(d.number("PWM_MAIN_DIS7") == doctest::Approx(1500.0));
  CHECK(d.number("SER_GPS1_BAUD") == doctest::Approx(115200.0));
  CHECK(d.number("SER_TEL2_BAUD") == doctest::Approx(115200.0));
  CHECK(d.at("GPS_UBX_DYNMODEL").value.token() == "automotive");
  CHECK(d.at("GPS_UBX_MODE").value.token() == "Rover+Base");
  CHECK(d.at("MAV_1_CONFIG").value.token() == "TELEM2");
  CHECK(d.at("MAV_TYPE").value.token() == "Ground Rover");
  CHECK(d.at("PWM_MAIN_FUNC2").value.token() == "Steering");
  CHECK(d.at("PWM_MAIN_FUNC7").value.token() == "Throttle");
  for (const auto& [name, entry] : d)
    CHECK(entry.provenance.source == ParamSource::TableDefault);
}

TEST_CASE("to_ardupilot full mapping") {
  CHECK(to_ardupilot("GND_SPEED_IMAX") == "SPEED_IMAX");
  CHECK(to_ardupilot("GND_SPEED_P") == "SPEED_P");
  CHECK(to_ardupilot("GND_SPEED_THR_SC") == "SPEED_SCALER");
  CHECK(to_ardupilot("GND_THR_CRUISE") == "THR_CRUISE");
  CHECK(to_ardupilot("GND_THR_MAX") == "THR_MAX");
  CHECK(to_ardupilot("GND_THR_MIN") == "THR_MIN");
  CHECK(to_ardupilot("GND_WHEEL_BASE") == "WHEEL_BASE");
  CHECK(to_ardupilot("GPS_UBX_BAUD2") == "GPS_BAUD");
  CHECK(to_ardupilot("GPS_UBX_DYNMODEL") == "GPS_NAVFILTER");
  CHECK(to_ardupilot("GPS_UBX_MODE") == "GPS_TYPE");
  CHECK(to_ardupilot("MAV_1_CONFIG") == "SERIALn_PROTOCOL=1");
  CHECK(to_ardupilot("MAV_1_RATE") == "SERIALn_BAUD");
  CHECK(to_ardupilot("MAV_TYPE") == "FRAME_CLASS=ROVER");
  CHECK(to_ardupilot("PWM_MAIN_DIS2") == "SERVOx_TRIM");
  CHECK(to_ardupilot("PWM_MAIN_DIS7") == "SERVOx_TRIM");
  CHECK(to_ardupilot("PWM_MAIN_FUNC2") == "SERVOx_FUNCTION=26");
  CHECK(to_ardupilot("PWM_MAIN_FUNC7") == "SERVOx_FUNCTION=70");
  CHECK(to_ardupilot("SER_GPS1_BAUD") == "SERIALn_BAUD");
  CHECK(to_ardupilot("SER_TEL2_BAUD") == "SERIALn_BAUD");
  CHECK_THROWS_AS(to_ardupilot("FOO"), NotFoundError);
  // Every stock row maps to a non-empty token.
  for (const std::string& name : table1_names())
    CHECK(!to_ardupilot(name).empty());
}

TEST_CASE("lint is clean on the stock defaults") {
  CHECK(lint(table1_defaults(), PhysicalSpec{}).empty());
  CHECK(lint(ParamSet{}, PhysicalSpec{}).empty());  // defaults fill in
}

TEST_CASE("lint is pure and order-stable") {
  ParamSet p = defaults_with("GND_THR_MAX", 60.0);
  p.set("GND_THR_MIN", 40.0, Provenance{ParamSource::File, 2});
  auto a = lint(p, PhysicalSpec{});
  auto b = lint(p, PhysicalSpec{});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].format() == b[i].format());
  }
}

TEST_CASE("lint R1 throttle ordering") {
  ParamSet p = defaults_with("GND_THR_MIN", 40.0);
  p.set("GND_THR_CRUISE", 30.0, Provenance{ParamSource::File, 2});
  auto diags = lint(p, PhysicalSpec{});
  CHECK(count_rule(diags, "R1") == 1);
  CHECK(diags[0].severity == Severity::Error);
}

TEST_CASE("lint R2 throttle cap warning uses strict comparison") {
  auto warn = lint(defaults_with("GND_THR_MAX", 60.0), PhysicalSpec{});
  REQUIRE(count_rule(warn, "R2") == 1);
  CHECK(warn[0].severity == Severity::Warning);
  // 50.0 exactly passes.
  CHECK(count_rule(lint(defaults_with("GND_THR_MAX", 50.0), PhysicalSpec{}),
                   "R2") == 0);
}

TEST_CASE("lint R3 wheelbase mismatch") {
  auto diags = lint(defaults_with("GND_WHEEL_BASE", 1.0), PhysicalSpec{});
  REQUIRE(count_rule(diags, "R3") == 1);
  CHECK(diags[0].severity == Severity::Error);
  // Mentions the physical spec token per the diagnostic contract.
  bool has_spec_token = false;
  for (const auto& name : diags[0].params) has_spec_token |= (name == "PHYSICAL_SPEC");
  CHECK(has_spec_token);
}

TEST_CASE("lint R4 disarmed PWM band") {
  auto diags = lint(defaults_with("PWM_MAIN_DIS2", 500.0), PhysicalSpec{});
  CHECK(count_rule(diags, "R4") == 1);
  auto both = lint(defaults_with("PWM_MAIN_DIS7", 2500.0), PhysicalSpec{});
  CHECK(count_rule(both, "R4") == 1);
}

TEST_CASE("lint R5 payload rate vs link rate") {
  auto diags = lint(defaults_with("MAV_1_RATE", 20000.0), PhysicalSpec{});
  REQUIRE(count_rule(diags, "R5") == 1);
  CHECK(diags[0].severity == Severity::Warning);
  // 11520 * 10 = 115200 is exactly the link rate: no warning.
  CHECK(count_rule(lint(defaults_with("MAV_1_RATE", 11520.0), PhysicalSpec{}),
                   "R5") == 0);
}

TEST_CASE("lint R6 enum membership") {
  auto diags = lint(defaults_with("GPS_UBX_DYNMODEL", "submarine"),
                    PhysicalSpec{});
  REQUIRE(count_rule(diags, "R6") == 1);
  CHECK(diags[0].severity == Severity::Error);
}

TEST_CASE("every diagnostic names at least one parameter") {
  ParamSet p = defaults_with("GND_THR_MAX", 60.0);
  p.set("GND_THR_MIN", 40.0, Provenance{ParamSource::File, 2});
  p.set("MAV_1_RATE", 20000.0, Provenance{ParamSource::File, 3});
  p.set("PWM_MAIN_DIS2", 100.0, Provenance{ParamSource::File, 4});
  for (const auto& d : lint(p, PhysicalSpec{})) CHECK(!d.params.empty());
}

TEST_CASE("effective_config converts feet to meters exactly") {
  SimConfig cfg = effective_config(table1_defaults(), PhysicalSpec{});
  CHECK(cfg.wheelbase_m == doctest::Approx(1.575 * 0.3048).epsilon(1e-12));
  CHECK(std::abs(cfg.wheelbase_m - 0.48006) < 1e-6);  // 1 um
  CHECK(cfg.thr_cruise_pct == doctest::Approx(30.0));
  CHECK(cfg.thr_min_pct == doctest::Approx(0.0));
  CHECK(cfg.thr_max_pct == doctest::Approx(50.0));
  CHECK(cfg.throttle_scaler == doctest::Approx(1.0));
  // Normalized-throttle gains scale to percent.
  CHECK(cfg.speed_p_pct_per_mps == doctest::Approx(25.0));
  CHECK(cfg.integrator_limit_pct == doctest::Approx(12.5));
  CHECK(cfg.pwm_trim_us == doctest::Approx(1500.0));
}

TEST_CASE("effective_config refuses lint errors with diagnostics attached") {
  try {
    effective_config(defaults_with("GND_WHEEL_BASE", 0.0), PhysicalSpec{});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(!e.diagnostics().empty());
    CHECK(e.diagnostics()[0].rule == "R3");
  }
  // Warnings alone do not refuse.
  SimConfig cfg =
      effective_config(defaults_with("GND_THR_MAX", 60.0), PhysicalSpec{});
  CHECK(cfg.thr_max_pct == doctest::Approx(60.0));
}

TEST_CASE("physical spec validation") {
  PhysicalSpec bad;
  bad.wheelbase_m = 0.0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = PhysicalSpec{};
  bad.max_steer_rad = 1.6;  // >= pi/2
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("sim config rate divisor invariant") {
  SimConfig cfg;
  cfg.gps_rate_hz = 7.0;  // does not divide 100 Hz
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = SimConfig{};
  cfg.validate();  // defaults are consistent
}
