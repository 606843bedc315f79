#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "convoysim/control.hpp"
#include "convoysim/dynamics.hpp"
#include "convoysim/params.hpp"
#include "convoysim/track.hpp"
#include "convoysim/v2v.hpp"

namespace convoysim {

enum class ScenarioKind { BaselineOval, Convoy };

struct Duration {
  enum class Mode { Seconds, Laps };
  Mode mode = Mode::Seconds;
  double value = 60.0;

  static Duration seconds(double s) { return {Mode::Seconds, s}; }
  static Duration laps(double n) { return {Mode::Laps, n}; }
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::BaselineOval;
  int vehicle_count = 1;
  double oval_length_m = 8.0;
  double oval_width_m = 4.0;
  double path_spacing_m = 0.02;
  ChannelConfig channel;  // seed is derived from `seed` and the drop rate
  GapPolicy gap;
  Duration duration = Duration::laps(2);
  std::uint64_t seed = 1;
  std::vector<VehicleState> initial_states;  // empty: queued automatically
  double settle_time_s = 10.0;

  void validate(const SimConfig& cfg) const;  // throws ContractError
};

/// Single-vehicle two-speed lap tracking, 2 laps.
Scenario baseline_scenario(std::uint64_t seed);
/// Three-vehicle convoy, 60 s.
Scenario convoy_scenario(std::uint64_t seed, int vehicles = 3);

struct TraceRow {
  double t_s = 0.0;
  int vehicle = 0;
  double x_m = 0.0, y_m = 0.0, heading_rad = 0.0, speed_mps = 0.0;
  double gps_x_m = 0.0, gps_y_m = 0.0;
  double steer_cmd_rad = 0.0, throttle_pct = 0.0;
  double cross_track_m = 0.0;
  double gap_m = 0.0;  // bumper gap to the predecessor; NaN for the leader
};

struct VehicleMetrics {
  double cross_track_rmse_m = 0.0;
  double cross_track_max_abs_m = 0.0;
  // Follower-only fields; NaN for the leader.
  double gap_error_mean_m = 0.0;  // over the settled window
  double gap_error_max_m = 0.0;   // over the settled window
  double min_gap_m = 0.0;         // whole run
  double mean_headway_eff_s = 0.0;
};

struct PairDelivery {
  int sender = 0;
  int receiver = 0;
  PairStats stats;
};

struct RunMetrics {
  std::vector<VehicleMetrics> per_vehicle;
  double min_gap_m = 0.0;  // over followers; infinity when none
  bool collision = false;
  PairStats delivery_total;
  std::vector<PairDelivery> delivery_pairs;
  double settled_from_s = 0.0;  // start of the gap evaluation window
};

struct RunResult {
  std::vector<TraceRow> rows;
  RunMetrics metrics;
  std::vector<std::string> bsm_log;
  std::vector<std::string> delivery_log;
  int ticks = 0;
};

/// Aborted tick (non-finite state or command).
class EngineAbort : public SimError {
 public:
  EngineAbort(const std::string& msg, int tick) : SimError(msg), tick_(tick) {}
  int tick() const { return tick_; }

 private:
  int tick_;
};

Path scenario_path(const Scenario& scenario);

/// Advances all vehicles at the physics rate with the fixed per-tick order
/// GPS -> BSM broadcast -> poll -> control -> dynamics (vehicles in id
/// order, the whole tick's sensing and control before anyone moves).
/// Deterministic: equal inputs give identical results. A collision sets the
/// flag and the run completes; numeric failures raise EngineAbort with the
/// tick index.
RunResult run(const Scenario& scenario, const SimConfig& cfg);

/// One run per drop rate; each rate derives its own channel substream, so
/// sweep({0}) reproduces run() with p = 0 exactly.
std::vector<std::pair<double, RunResult>> sweep(
    const Scenario& base, const SimConfig& cfg,
    const std::vector<double>& drop_rates);

}  // namespace convoysim
