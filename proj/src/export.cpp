#include "convoysim/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace convoysim {

namespace {

using nlohmann::json;

void append_f6(std::string& out, double v) {
  char buf[48];
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  std::snprintf(buf, sizeof buf, "%.6f", v);
  out += buf;
}

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

json metrics_to_json(const RunResult& result) {
  const RunMetrics& m = result.metrics;
  json per_vehicle = json::array();
  for (std::size_t id = 0; id < m.per_vehicle.size(); ++id) {
    const VehicleMetrics& vm = m.per_vehicle[id];
    per_vehicle.push_back({
        {"vehicle", id},
        {"cross_track_rmse_m", vm.cross_track_rmse_m},
        {"cross_track_max_abs_m", vm.cross_track_max_abs_m},
        {"gap_error_mean_m", number_or_null(vm.gap_error_mean_m)},
        {"gap_error_max_m", number_or_null(vm.gap_error_max_m)},
        {"min_gap_m", number_or_null(vm.min_gap_m)},
        {"mean_headway_eff_s", number_or_null(vm.mean_headway_eff_s)},
    });
  }

  json pairs = json::array();
  for (const PairDelivery& pd : m.delivery_pairs) {
    pairs.push_back({
        {"sender", pd.sender},
        {"receiver", pd.receiver},
        {"sent", pd.stats.sent},
        {"delivered", pd.stats.delivered},
        {"dropped", pd.stats.dropped},
    });
  }

  return json{
      {"collision", m.collision},
      {"min_gap_m", std::isinf(m.min_gap_m) ? json(nullptr) : json(m.min_gap_m)},
      {"settled_from_s", m.settled_from_s},
      {"ticks", result.ticks},
      {"per_vehicle", per_vehicle},
      {"delivery",
       {
           {"sent", m.delivery_total.sent},
           {"delivered", m.delivery_total.delivered},
           {"dropped", m.delivery_total.dropped},
           {"pairs", pairs},
       }},
  };
}

}  // namespace

std::string trace_csv(const RunResult& result) {
  std::string out =
      "t,vehicle,x,y,heading,speed,gps_x,gps_y,steer_cmd,throttle_pct,"
      "cross_track,gap\n";
  char head[64];
  for (const TraceRow& r : result.rows) {
    std::snprintf(head, sizeof head, "%.6f,%d,", r.t_s, r.vehicle);
    out += head;
    append_f6(out, r.x_m);
    out += ',';
    append_f6(out, r.y_m);
    out += ',';
    append_f6(out, r.heading_rad);
    out += ',';
    append_f6(out, r.speed_mps);
    out += ',';
    append_f6(out, r.gps_x_m);
    out += ',';
    append_f6(out, r.gps_y_m);
    out += ',';
    append_f6(out, r.steer_cmd_rad);
    out += ',';
    append_f6(out, r.throttle_pct);
    out += ',';
    append_f6(out, r.cross_track_m);
    out += ',';
    append_f6(out, r.gap_m);
    out += '\n';
  }
  return out;
}

std::string metrics_json(const RunResult& result) {
  return metrics_to_json(result).dump(2) + "\n";
}

std::string sweep_json(
    const std::vector<std::pair<double, RunResult>>& results,
    const std::vector<std::string>& run_dirs) {
  json entries = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    json entry = {
        {"rate", results[i].first},
        {"metrics", metrics_to_json(results[i].second)},
    };
    if (i < run_dirs.size()) entry["dir"] = run_dirs[i];
    entries.push_back(entry);
  }
  return json{{"runs", entries}}.dump(2) + "\n";
}

std::string bsm_log_text(const RunResult& result) {
  std::string out(kBsmLogHeader);
  out += '\n';
  for (const std::string& line : result.bsm_log) {
    out += line;
    out += '\n';
  }
  return out;
}

std::string delivery_log_text(const RunResult& result) {
  std::string out(kDeliveryLogHeader);
  out += '\n';
  for (const std::string& line : result.delivery_log) {
    out += line;
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw SimError("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw SimError("short write to " + path);
}

}  // namespace convoysim
