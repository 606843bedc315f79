#pragma once

#include <string>
#include <utility>
#include <vector>

#include "convoysim/engine.hpp"

namespace convoysim {

/// `t,vehicle,x,y,heading,speed,gps_x,gps_y,steer_cmd,throttle_pct,
/// cross_track,gap` rows, 6-decimal fixed formatting, bit-stable.
std::string trace_csv(const RunResult& result);

/// Metrics document (pretty-printed JSON, keys sorted).
std::string metrics_json(const RunResult& result);

/// Combined sweep document: one entry per rate, in input order.
std::string sweep_json(
    const std::vector<std::pair<double, RunResult>>& results,
    const std::vector<std::string>& run_dirs);

std::string bsm_log_text(const RunResult& result);
std::string delivery_log_text(const RunResult& result);

void write_file(const std::string& path, const std::string& content);

}  // namespace convoysim
