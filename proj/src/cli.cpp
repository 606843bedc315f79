#include "convoysim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "convoysim/engine.hpp"
#include "convoysim/export.hpp"
#include "convoysim/svg_plot.hpp"

namespace convoysim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitLintErrors = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SimError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Config file

struct CliConfig {
  ParamSet params;  // overrides on top of the stock defaults
  PhysicalSpec physical;
  SimConfig sim_overrides_applied;  // filled by resolve()
  Scenario scenario;
  bool scenario_kind_set = false;
  bool vehicle_count_set = false;
  bool duration_set = false;
  bool seed_set = false;
  // Raw simulator overrides, applied after effective_config().
  json sim = json::object();
};

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok |= (it.key() == k);
    if (!ok) throw SimError("unknown key '" + it.key() + "' in " + where);
  }
}

double require_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SimError(where + " must be a number");
  return v.get<double>();
}

CliConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SimError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SimError("config root must be an object");
  reject_unknown(doc, {"params", "physical", "sim", "scenario"}, "config");

  CliConfig cfg;

  if (doc.contains("params")) {
    const json& p = doc["params"];
    if (!p.is_object()) throw SimError("config params must be an object");
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (it.value().is_number())
        cfg.params.set(it.key(), ParamValue(it.value().get<double>()),
                       Provenance{ParamSource::File, 0});
      else if (it.value().is_string())
        cfg.params.set(it.key(), ParamValue(it.value().get<std::string>()),
                       Provenance{ParamSource::File, 0});
      else
        throw SimError("parameter " + it.key() + " must be a number or string");
    }
  }

  if (doc.contains("physical")) {
    const json& p = doc["physical"];
    reject_unknown(p,
                   {"wheelbase_m", "vehicle_length_m", "max_steer_rad",
                    "max_motor_speed_mps"},
                   "config physical");
    if (p.contains("wheelbase_m"))
      cfg.physical.wheelbase_m = require_number(p["wheelbase_m"], "wheelbase_m");
    if (p.contains("vehicle_length_m"))
      cfg.physical.vehicle_length_m =
          require_number(p["vehicle_length_m"], "vehicle_length_m");
    if (p.contains("max_steer_rad"))
      cfg.physical.max_steer_rad =
          require_number(p["max_steer_rad"], "max_steer_rad");
    if (p.contains("max_motor_speed_mps"))
      cfg.physical.max_motor_speed_mps =
          require_number(p["max_motor_speed_mps"], "max_motor_speed_mps");
  }

  if (doc.contains("sim")) {
    const json& s = doc["sim"];
    reject_unknown(s,
                   {"speed_i_pct_per_mps_s", "pwm_min_us", "pwm_max_us",
                    "pwm_quantize", "gps_rate_hz", "gps_sigma_m", "bsm_rate_hz",
                    "physics_dt_s", "motor_tau_s", "stanley_gain",
                    "stanley_softening_mps"},
                   "config sim");
    cfg.sim = s;
  }

  if (doc.contains("scenario")) {
    const json& s = doc["scenario"];
    reject_unknown(s,
                   {"kind", "vehicle_count", "duration_s", "laps", "seed",
                    "settle_time_s", "channel", "gap", "oval"},
                   "config scenario");
    if (s.contains("kind")) {
      const std::string kind = s["kind"].get<std::string>();
      if (kind == "baseline")
        cfg.scenario.kind = ScenarioKind::BaselineOval;
      else if (kind == "convoy")
        cfg.scenario.kind = ScenarioKind::Convoy;
      else
        throw SimError("scenario kind must be 'baseline' or 'convoy'");
      cfg.scenario_kind_set = true;
    }
    if (s.contains("vehicle_count")) {
      cfg.scenario.vehicle_count = s["vehicle_count"].get<int>();
      cfg.vehicle_count_set = true;
    }
    if (s.contains("duration_s") && s.contains("laps"))
      throw SimError("scenario duration_s and laps are mutually exclusive");
    if (s.contains("duration_s")) {
      cfg.scenario.duration =
          Duration::seconds(require_number(s["duration_s"], "duration_s"));
      cfg.duration_set = true;
    }
    if (s.contains("laps")) {
      cfg.scenario.duration = Duration::laps(require_number(s["laps"], "laps"));
      cfg.duration_set = true;
    }
    if (s.contains("seed")) {
      cfg.scenario.seed = s["seed"].get<std::uint64_t>();
      cfg.seed_set = true;
    }
    if (s.contains("settle_time_s"))
      cfg.scenario.settle_time_s =
          require_number(s["settle_time_s"], "settle_time_s");
    if (s.contains("channel")) {
      const json& c = s["channel"];
      reject_unknown(c, {"drop_p", "latency_s"}, "config channel");
      if (c.contains("drop_p"))
        cfg.scenario.channel.drop_p = require_number(c["drop_p"], "drop_p");
      if (c.contains("latency_s"))
        cfg.scenario.channel.latency_s =
            require_number(c["latency_s"], "latency_s");
    }
    if (s.contains("gap")) {
      const json& g = s["gap"];
      reject_unknown(g,
                     {"standstill_gap_m", "headway_s", "loss_gain", "gap_p_1ps",
                      "speed_match_gain", "stale_after_s", "stale_decel_mps2",
                      "loss_window_s"},
                     "config gap");
      GapPolicy& gp = cfg.scenario.gap;
      if (g.contains("standstill_gap_m"))
        gp.standstill_gap_m = require_number(g["standstill_gap_m"], "standstill_gap_m");
      if (g.contains("headway_s"))
        gp.headway_s = require_number(g["headway_s"], "headway_s");
      if (g.contains("loss_gain"))
        gp.loss_gain = require_number(g["loss_gain"], "loss_gain");
      if (g.contains("gap_p_1ps"))
        gp.gap_p_1ps = require_number(g["gap_p_1ps"], "gap_p_1ps");
      if (g.contains("speed_match_gain"))
        gp.speed_match_gain = require_number(g["speed_match_gain"], "speed_match_gain");
      if (g.contains("stale_after_s"))
        gp.stale_after_s = require_number(g["stale_after_s"], "stale_after_s");
      if (g.contains("stale_decel_mps2"))
        gp.stale_decel_mps2 = require_number(g["stale_decel_mps2"], "stale_decel_mps2");
      if (g.contains("loss_window_s"))
        gp.loss_window_s = require_number(g["loss_window_s"], "loss_window_s");
    }
    if (s.contains("oval")) {
      const json& o = s["oval"];
      reject_unknown(o, {"length_m", "width_m", "spacing_m"}, "config oval");
      if (o.contains("length_m"))
        cfg.scenario.oval_length_m = require_number(o["length_m"], "length_m");
      if (o.contains("width_m"))
        cfg.scenario.oval_width_m = require_number(o["width_m"], "width_m");
      if (o.contains("spacing_m"))
        cfg.scenario.path_spacing_m = require_number(o["spacing_m"], "spacing_m");
    }
  }
  return cfg;
}

SimConfig resolve_sim_config(const CliConfig& cli) {
  SimConfig cfg = effective_config(cli.params, cli.physical);
  const json& s = cli.sim;
  if (s.contains("speed_i_pct_per_mps_s"))
    cfg.speed_i_pct_per_mps_s = s["speed_i_pct_per_mps_s"].get<double>();
  if (s.contains("pwm_min_us")) cfg.pwm_min_us = s["pwm_min_us"].get<double>();
  if (s.contains("pwm_max_us")) cfg.pwm_max_us = s["pwm_max_us"].get<double>();
  if (s.contains("pwm_quantize")) cfg.pwm_quantize = s["pwm_quantize"].get<bool>();
  if (s.contains("gps_rate_hz")) cfg.gps_rate_hz = s["gps_rate_hz"].get<double>();
  if (s.contains("gps_sigma_m")) cfg.gps_sigma_m = s["gps_sigma_m"].get<double>();
  if (s.contains("bsm_rate_hz")) cfg.bsm_rate_hz = s["bsm_rate_hz"].get<double>();
  if (s.contains("physics_dt_s")) cfg.physics_dt_s = s["physics_dt_s"].get<double>();
  if (s.contains("motor_tau_s")) cfg.motor_tau_s = s["motor_tau_s"].get<double>();
  if (s.contains("stanley_gain")) cfg.stanley_gain = s["stanley_gain"].get<double>();
  if (s.contains("stanley_softening_mps"))
    cfg.stanley_softening_mps = s["stanley_softening_mps"].get<double>();
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// Shared command plumbing

struct SimFlags {
  std::string config_path;
  std::string scenario_name;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

std::uint64_t resolve_seed(const SimFlags& flags, const CliConfig& cfg) {
  if (flags.seed) return *flags.seed;
  if (const char* env = std::getenv("CONVOYSIM_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw SimError("CONVOYSIM_SEED is not an unsigned integer");
    return v;
  }
  if (cfg.seed_set) return cfg.scenario.seed;
  return 1;
}

Scenario resolve_scenario(const SimFlags& flags, const CliConfig& cfg) {
  Scenario s = cfg.scenario;
  if (!flags.scenario_name.empty()) {
    if (flags.scenario_name == "baseline")
      s.kind = ScenarioKind::BaselineOval;
    else if (flags.scenario_name == "convoy")
      s.kind = ScenarioKind::Convoy;
    else
      throw SimError("scenario must be 'baseline' or 'convoy'");
  }
  if (!cfg.vehicle_count_set)
    s.vehicle_count = (s.kind == ScenarioKind::Convoy) ? 3 : 1;
  if (!cfg.duration_set)
    s.duration = (s.kind == ScenarioKind::Convoy) ? Duration::seconds(60.0)
                                                  : Duration::laps(2.0);
  return s;
}

void write_run_outputs(const fs::path& dir, const RunResult& result,
                       const Path& path) {
  fs::create_directories(dir);
  write_file((dir / "trace.csv").string(), trace_csv(result));
  write_file((dir / "metrics.json").string(), metrics_json(result));
  write_file((dir / "path.csv").string(), path.to_csv());
  write_file((dir / "bsm.log").string(), bsm_log_text(result));
  write_file((dir / "delivery.log").string(), delivery_log_text(result));
}

void print_summary(std::ostream& out, const RunResult& result) {
  double worst_rmse = 0.0;
  for (const VehicleMetrics& vm : result.metrics.per_vehicle)
    worst_rmse = std::max(worst_rmse, vm.cross_track_rmse_m);
  char buf[128];
  if (std::isinf(result.metrics.min_gap_m))
    std::snprintf(buf, sizeof buf, "RMSE=%.4f m, min_gap=nan m, collisions=%d",
                  worst_rmse, result.metrics.collision ? 1 : 0);
  else
    std::snprintf(buf, sizeof buf, "RMSE=%.4f m, min_gap=%.4f m, collisions=%d",
                  worst_rmse, result.metrics.min_gap_m,
                  result.metrics.collision ? 1 : 0);
  out << buf << "\n";
}

void print_diagnostics(std::ostream& out, const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) out << d.format() << "\n";
}

// ---------------------------------------------------------------------------
// CSV ingestion for plotting

struct TracePoints {
  // vehicle id -> polyline
  std::map<int, std::vector<XY>> by_vehicle;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

TracePoints read_trace_csv(const std::string& file) {
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(file + ": empty trace file", 1);
  auto header = split_csv(line);
  int xi = -1, yi = -1, vi = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") xi = static_cast<int>(i);
    if (header[i] == "y") yi = static_cast<int>(i);
    if (header[i] == "vehicle") vi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0 || vi < 0)
    throw ParseError(file + ": header needs vehicle,x,y columns", 1);

  TracePoints out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw ParseError(file + ": row " + std::to_string(row) +
                           " has the wrong field count",
                       row);
    try {
      int vehicle = std::stoi(fields[static_cast<std::size_t>(vi)]);
      double x = std::stod(fields[static_cast<std::size_t>(xi)]);
      double y = std::stod(fields[static_cast<std::size_t>(yi)]);
      out.by_vehicle[vehicle].emplace_back(x, y);
    } catch (const std::exception&) {
      throw ParseError(file + ": row " + std::to_string(row) +
                           " has a malformed number",
                       row);
    }
  }
  if (out.by_vehicle.empty())
    throw ParseError(file + ": no data rows", row);
  return out;
}

std::vector<XY> read_path_csv(const std::string& file) {
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(file + ": empty path file", 1);
  auto header = split_csv(line);
  int xi = -1, yi = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") xi = static_cast<int>(i);
    if (header[i] == "y") yi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0)
    throw ParseError(file + ": header needs x,y columns", 1);

  std::vector<XY> pts;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != header.size())
      throw ParseError(file + ": row " + std::to_string(row) +
                           " has the wrong field count",
                       row);
    try {
      pts.emplace_back(std::stod(fields[static_cast<std::size_t>(xi)]),
                       std::stod(fields[static_cast<std::size_t>(yi)]));
    } catch (const std::exception&) {
      throw ParseError(file + ": row " + std::to_string(row) +
                           " has a malformed number",
                       row);
    }
  }
  if (pts.empty()) throw ParseError(file + ": no data rows", row);
  // Close the loop visually if the file describes a closed track.
  pts.push_back(pts.front());
  return pts;
}

std::string file_stem(const std::string& path) {
  return fs::path(path).stem().string();
}

// ---------------------------------------------------------------------------
// Commands

int cmd_simulate(const SimFlags& flags, std::ostream& out, std::ostream& err) {
  CliConfig cli;
  if (!flags.config_path.empty()) cli = parse_config(read_file(flags.config_path));

  SimConfig cfg;
  try {
    cfg = resolve_sim_config(cli);
  } catch (const ConfigError& e) {
    print_diagnostics(err, e.diagnostics());
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  Scenario scenario = resolve_scenario(flags, cli);
  scenario.seed = resolve_seed(flags, cli);

  RunResult result;
  try {
    result = run(scenario, cfg);
  } catch (const EngineAbort& e) {
    err << "numeric abort: " << e.what() << "\n";
    return kExitNumeric;
  }

  write_run_outputs(flags.out_dir, result, scenario_path(scenario));
  print_summary(out, result);
  return kExitOk;
}

int cmd_sweep(const SimFlags& flags, const std::vector<double>& rates,
              std::ostream& out, std::ostream& err) {
  for (double r : rates)
    if (!(r >= 0.0 && r <= 1.0)) {
      err << "error: drop rate " << r << " outside [0, 1]\n";
      return kExitValidation;
    }

  CliConfig cli;
  if (!flags.config_path.empty()) cli = parse_config(read_file(flags.config_path));

  SimConfig cfg;
  try {
    cfg = resolve_sim_config(cli);
  } catch (const ConfigError& e) {
    print_diagnostics(err, e.diagnostics());
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  SimFlags convoy_flags = flags;
  convoy_flags.scenario_name = "convoy";  // sweeps are convoy runs
  Scenario scenario = resolve_scenario(convoy_flags, cli);
  scenario.seed = resolve_seed(flags, cli);

  std::vector<std::pair<double, RunResult>> results;
  try {
    results = sweep(scenario, cfg, rates);
  } catch (const EngineAbort& e) {
    err << "numeric abort: " << e.what() << "\n";
    return kExitNumeric;
  }

  const Path path = scenario_path(scenario);
  std::vector<std::string> dirs;
  for (const auto& [rate, result] : results) {
    char name[32];
    std::snprintf(name, sizeof name, "rate_%.2f", rate);
    dirs.emplace_back(name);
    write_run_outputs(fs::path(flags.out_dir) / name, result, path);
    out << name << ": ";
    print_summary(out, result);
  }
  fs::create_directories(flags.out_dir);
  write_file((fs::path(flags.out_dir) / "sweep.json").string(),
             sweep_json(results, dirs));
  return kExitOk;
}

int cmd_lint(const std::string& params_path, const std::string& spec_path,
             bool as_json, bool quiet, std::ostream& out, std::ostream& err) {
  ParamSet params;
  try {
    params = parse_param_file(read_file(params_path));
  } catch (const SimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  PhysicalSpec spec;
  if (!spec_path.empty()) {
    json doc;
    try {
      doc = json::parse(read_file(spec_path));
    } catch (const json::exception& e) {
      err << "error: spec file is not valid JSON: " << e.what() << "\n";
      return kExitValidation;
    }
    reject_unknown(doc,
                   {"wheelbase_m", "vehicle_length_m", "max_steer_rad",
                    "max_motor_speed_mps"},
                   "physical spec");
    if (doc.contains("wheelbase_m")) spec.wheelbase_m = doc["wheelbase_m"];
    if (doc.contains("vehicle_length_m"))
      spec.vehicle_length_m = doc["vehicle_length_m"];
    if (doc.contains("max_steer_rad")) spec.max_steer_rad = doc["max_steer_rad"];
    if (doc.contains("max_motor_speed_mps"))
      spec.max_motor_speed_mps = doc["max_motor_speed_mps"];
  }

  const std::vector<Diagnostic> diags = lint(params, spec);
  int errors = 0, warnings = 0;
  for (const Diagnostic& d : diags)
    (d.severity == Severity::Error ? errors : warnings) += 1;

  if (as_json) {
    json records = json::array();
    for (const Diagnostic& d : diags)
      records.push_back({
          {"severity", d.severity == Severity::Error ? "error" : "warning"},
          {"rule", d.rule},
          {"params", d.params},
          {"message", d.message},
      });
    out << records.dump(2) << "\n";
  } else if (!quiet) {
    print_diagnostics(out, diags);
    out << errors << " error(s), " << warnings << " warning(s)\n";
  }
  return errors > 0 ? kExitLintErrors : kExitOk;
}

int cmd_plot(const std::vector<std::string>& trace_files,
             const std::string& path_file, const std::string& out_file,
             const std::vector<std::string>& labels, std::ostream& out) {
  const std::vector<XY> path_pts = read_path_csv(path_file);

  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < trace_files.size(); ++i) {
    const TracePoints tp = read_trace_csv(trace_files[i]);
    const std::string label =
        i < labels.size() ? labels[i] : file_stem(trace_files[i]);
    for (const auto& [vehicle, pts] : tp.by_vehicle)
      series.push_back(PlotSeries{label, pts});
  }

  write_file(out_file, render_plan_view(path_pts, series,
                                        SvgOptions{860, 560, "Plan view"}));
  out << "wrote " << out_file << " (" << series.size() << " trajectories)\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const argv[], std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Deterministic multi-vehicle convoy simulator and rover "
               "parameter toolchain"};
  app.require_subcommand(1);

  SimFlags sim_flags;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario");
  simulate->add_option("--config", sim_flags.config_path, "JSON config file");
  simulate->add_option("--scenario", sim_flags.scenario_name,
                       "baseline or convoy");
  simulate->add_option("--seed", sim_flags.seed, "RNG seed (u64)");
  simulate->add_option("--out", sim_flags.out_dir, "output directory");

  SimFlags sweep_flags;
  std::string rates_text = "0,0.2,0.5";
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Convoy runs across packet drop rates");
  sweep_cmd->add_option("--config", sweep_flags.config_path, "JSON config file");
  sweep_cmd->add_option("--rates", rates_text, "comma-separated drop rates");
  sweep_cmd->add_option("--seed", sweep_flags.seed, "RNG seed (u64)");
  sweep_cmd->add_option("--out", sweep_flags.out_dir, "output directory");

  std::string lint_params, lint_spec;
  bool lint_json = false, lint_quiet = false;
  CLI::App* lint_cmd =
      app.add_subcommand("lint", "Check a parameter file for consistency");
  lint_cmd->add_option("--params", lint_params, "parameter file")->required();
  lint_cmd->add_option("--spec", lint_spec, "physical spec JSON file");
  lint_cmd->add_flag("--json", lint_json, "machine-readable diagnostics");
  lint_cmd->add_flag("--quiet", lint_quiet, "suppress text output");

  std::vector<std::string> plot_traces, plot_labels;
  std::string plot_path, plot_out = "plot.svg";
  CLI::App* plot_cmd = app.add_subcommand("plot", "Render trace CSVs as SVG");
  plot_cmd->add_option("--traces", plot_traces, "trace CSV files")->required();
  plot_cmd->add_option("--path", plot_path, "reference path CSV")->required();
  plot_cmd->add_option("--out", plot_out, "output SVG file");
  plot_cmd->add_option("--labels", plot_labels,
                       "legend labels, one per trace file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags, out, err);
    if (sweep_cmd->parsed()) {
      std::vector<double> rates;
      for (const std::string& token : split_csv(rates_text)) {
        try {
          rates.push_back(std::stod(token));
        } catch (const std::exception&) {
          err << "error: malformed rate '" << token << "'\n";
          return kExitValidation;
        }
      }
      return cmd_sweep(sweep_flags, rates, out, err);
    }
    if (lint_cmd->parsed())
      return cmd_lint(lint_params, lint_spec, lint_json, lint_quiet, out, err);
    if (plot_cmd->parsed())
      return cmd_plot(plot_traces, plot_path, plot_out, plot_labels, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SimError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace convoysim
