#include "convoysim/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace convoysim {

namespace {

constexpr std::uint64_t kChannelStreamTag = 0x6368616e6e656cULL;
constexpr std::uint64_t kVehicleStreamTag = 0x76656869636c65ULL;
constexpr long kMaxTicks = 20'000'000;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

int rate_divisor(double physics_dt_s, double rate_hz) {
  return static_cast<int>(std::llround(1.0 / physics_dt_s / rate_hz));
}

struct VehicleSim {
  VehicleState state;
  double est_x = 0.0;
  double est_y = 0.0;
  double est_heading = 0.0;
  SpeedLoopState pid;
  Rng rng{0};
  double odometer_m = 0.0;
  std::uint64_t next_seq = 0;
  // Follower bookkeeping.
  std::map<int, UpstreamEntry> upstream;
  std::map<int, std::vector<double>> receipts;
  // Commands for the current tick.
  double steer_cmd = 0.0;
  double throttle_cmd = 0.0;
  double v_target = 0.0;
  double loss_pred = 0.0;  // p_hat toward the predecessor
};

struct Accumulator {
  std::vector<double> cross_track;
  std::vector<double> gap_error_settled;
  double min_gap = std::numeric_limits<double>::infinity();
  double h_eff_sum = 0.0;
  long h_eff_count = 0;
};

}  // namespace

void Scenario::validate(const SimConfig& cfg) const {
  cfg.validate();
  if (kind == ScenarioKind::BaselineOval && vehicle_count != 1)
    throw ContractError("baseline scenario uses exactly one vehicle");
  if (kind == ScenarioKind::Convoy && vehicle_count < 2)
    throw ContractError("convoy scenario needs at least two vehicles");
  if (!(gap.standstill_gap_m > 0) || !(gap.headway_s >= 0) ||
      !(gap.loss_gain >= 0))
    throw ContractError("gap policy requires d0 > 0, h >= 0, alpha >= 0");
  if (!(channel.drop_p >= 0 && channel.drop_p <= 1))
    throw ContractError("drop probability must lie in [0, 1]");
  if (!(duration.value > 0))
    throw ContractError("duration must be positive");
  if (!initial_states.empty() &&
      initial_states.size() != static_cast<std::size_t>(vehicle_count))
    throw ContractError("initial states must match the vehicle count");
  if (!initial_states.empty()) {
    const Path path = scenario_path(*this);
    for (std::size_t i = 1; i < initial_states.size(); ++i) {
      const auto& behind = initial_states[i];
      const auto& ahead = initial_states[i - 1];
      const double spacing = path.forward_distance(
          path.nearest(behind.x_m, behind.y_m).s_m,
          path.nearest(ahead.x_m, ahead.y_m).s_m);
      if (!(spacing > cfg.vehicle_length_m))
        throw ContractError("initial inter-vehicle spacing must exceed the vehicle length");
    }
  }
}

Scenario baseline_scenario(std::uint64_t seed) {
  Scenario s;
  s.kind = ScenarioKind::BaselineOval;
  s.vehicle_count = 1;
  s.duration = Duration::laps(2);
  s.seed = seed;
  return s;
}

Scenario convoy_scenario(std::uint64_t seed, int vehicles) {
  Scenario s;
  s.kind = ScenarioKind::Convoy;
  s.vehicle_count = vehicles;
  s.duration = Duration::seconds(60.0);
  s.seed = seed;
  return s;
}

Path scenario_path(const Scenario& scenario) {
  return oval_path(scenario.oval_length_m, scenario.oval_width_m,
                   scenario.path_spacing_m);
}

RunResult run(const Scenario& scenario, const SimConfig& cfg) {
  scenario.validate(cfg);

  const Path path = scenario_path(scenario);
  const double dt = cfg.physics_dt_s;
  const int n = scenario.vehicle_count;
  const int gps_div = rate_divisor(dt, cfg.gps_rate_hz);
  const int bsm_div = rate_divisor(dt, cfg.bsm_rate_hz);

  ChannelConfig channel_cfg = scenario.channel;
  channel_cfg.cadence_hz = cfg.bsm_rate_hz;
  channel_cfg.seed = derive_seed(scenario.seed,
                                 std::bit_cast<std::uint64_t>(channel_cfg.drop_p),
                                 kChannelStreamTag);
  Channel channel(channel_cfg);

  std::vector<VehicleSim> sims(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    VehicleSim& v = sims[static_cast<std::size_t>(id)];
    if (!scenario.initial_states.empty()) {
      v.state = scenario.initial_states[static_cast<std::size_t>(id)];
    } else {
      // Queued along the path at the standstill gap, at rest.
      const double spacing = scenario.gap.standstill_gap_m + cfg.vehicle_length_m;
      const PathSample p = path.at_s(-static_cast<double>(id) * spacing);
      v.state = VehicleState{p.x_m, p.y_m, p.heading_rad, 0.0};
    }
    v.est_x = v.state.x_m;
    v.est_y = v.state.y_m;
    v.est_heading = v.state.heading_rad;
    v.rng.seed(derive_seed(scenario.seed, static_cast<std::uint64_t>(id),
                           kVehicleStreamTag));
    channel.register_vehicle(id);
  }

  const bool lap_mode = scenario.duration.mode == Duration::Mode::Laps;
  const long tick_budget =
      lap_mode ? kMaxTicks
               : std::llround(scenario.duration.value / dt);
  const double lap_target =
      lap_mode ? scenario.duration.value * path.total_length_m() : 0.0;

  RunResult result;
  result.rows.reserve(static_cast<std::size_t>(
      std::min<long>(tick_budget, 1'000'000) * n));

  std::vector<Accumulator> acc(static_cast<std::size_t>(n));
  double settled_from = scenario.settle_time_s;
  double last_leader_target = -1.0;
  bool collision = false;

  long tick = 0;
  for (; tick < tick_budget; ++tick) {
    if (lap_mode && sims[0].odometer_m >= lap_target) break;
    const double t = static_cast<double>(tick) * dt;

    try {
      // Sense, communicate, decide - nobody moves yet.
      for (int id = 0; id < n; ++id) {
        VehicleSim& v = sims[static_cast<std::size_t>(id)];

        if (tick % gps_div == 0) {
          auto fix = gps_measure(v.state, t, cfg.gps_sigma_m, cfg.gps_rate_hz,
                                 v.rng);
          if (fix) {
            v.est_x = fix->x_m;
            v.est_y = fix->y_m;
          }
        }

        if (tick % bsm_div == 0) {
          Bsm msg{id, v.next_seq++, t, v.est_x, v.est_y, v.state.speed_mps,
                  v.est_heading};
          channel.broadcast(msg, t);
        }

        for (const Bsm& msg : channel.poll(id, t)) {
          if (msg.sender_id >= id) continue;  // downstream traffic is ignored
          auto& entry = v.upstream[msg.sender_id];
          if (entry.latest.t_s <= msg.t_s) entry.latest = msg;
          entry.receipt_t_s = t;
          auto& times = v.receipts[msg.sender_id];
          times.push_back(t);
          const double horizon = t - scenario.gap.loss_window_s - 1.0;
          while (!times.empty() && times.front() < horizon)
            times.erase(times.begin());
        }

        if (id == 0) {
          v.v_target = speed_profile(v.odometer_m, path);
          if (v.v_target != last_leader_target) {
            if (last_leader_target >= 0.0)
              settled_from = std::max(settled_from, t + scenario.settle_time_s);
            last_leader_target = v.v_target;
          }
        } else if (v.upstream.count(id - 1) == 0) {
          v.v_target = 0.0;  // hold until the predecessor is heard
          v.loss_pred = 0.0;
        } else {
          UpstreamView view;
          view.predecessor_id = id - 1;
          view.leader_id = 0;
          for (auto& [sender, entry] : v.upstream) {
            UpstreamEntry e = entry;
            const double window =
                std::max(dt, std::min(scenario.gap.loss_window_s, t));
            e.loss_estimate = estimate_loss(v.receipts[sender],
                                            channel_cfg.cadence_hz, window, t);
            view.by_sender.emplace(sender, e);
          }
          v.v_target =
              timegap_target_speed(v.state, view, scenario.gap, path,
                                   cfg.vehicle_length_m, cfg.max_speed_mps, t);
          v.loss_pred = view.by_sender.at(id - 1).loss_estimate;
          const double h_eff = scenario.gap.headway_s *
                               (1.0 + scenario.gap.loss_gain * v.loss_pred);
          acc[static_cast<std::size_t>(id)].h_eff_sum += h_eff;
          acc[static_cast<std::size_t>(id)].h_eff_count += 1;
        }

        const PathQuery q = path.nearest(v.est_x, v.est_y);
        const double heading_err =
            normalize_angle(q.tangent_heading_rad - v.est_heading);
        const double steer =
            curvature_feedforward(q.curvature_1pm, cfg.wheelbase_m) +
            stanley_steer(-q.cross_track_m, heading_err, v.state.speed_mps,
                          cfg.stanley_gain, cfg.stanley_softening_mps,
                          cfg.max_steer_rad);
        v.steer_cmd = std::clamp(steer, -cfg.max_steer_rad, cfg.max_steer_rad);

        auto [throttle, pid_next] =
            speed_pid_step(v.pid, v.v_target, v.state.speed_mps, cfg, dt);
        v.throttle_cmd = throttle;
        v.pid = pid_next;
      }

      // Record, then move.
      for (int id = 0; id < n; ++id) {
        VehicleSim& v = sims[static_cast<std::size_t>(id)];
        Accumulator& a = acc[static_cast<std::size_t>(id)];

        TraceRow row;
        row.t_s = t;
        row.vehicle = id;
        row.x_m = v.state.x_m;
        row.y_m = v.state.y_m;
        row.heading_rad = v.state.heading_rad;
        row.speed_mps = v.state.speed_mps;
        row.gps_x_m = v.est_x;
        row.gps_y_m = v.est_y;
        row.steer_cmd_rad = v.steer_cmd;
        row.throttle_pct = v.throttle_cmd;

        const PathQuery q = path.nearest(v.state.x_m, v.state.y_m);
        row.cross_track_m = q.cross_track_m;
        a.cross_track.push_back(q.cross_track_m);

        if (id == 0) {
          row.gap_m = nan_value();
        } else {
          const VehicleSim& pred = sims[static_cast<std::size_t>(id - 1)];
          const double s_self = q.s_m;
          const double s_pred =
              path.nearest(pred.state.x_m, pred.state.y_m).s_m;
          const double gap =
              path.forward_distance(s_self, s_pred) - cfg.vehicle_length_m;
          row.gap_m = gap;
          a.min_gap = std::min(a.min_gap, gap);
          if (gap <= 0.0) collision = true;
          if (t >= settled_from) {
            const double g_des =
                desired_gap(scenario.gap, v.state.speed_mps, v.loss_pred);
            a.gap_error_settled.push_back(gap - g_des);
          }
        }
        result.rows.push_back(row);

        ActuatorCommand cmd{v.steer_cmd, v.throttle_cmd, true};
        if (cfg.pwm_quantize) cmd = pwm_to_command(command_to_pwm(cmd, cfg), cfg);

        const double pre_speed = v.state.speed_mps;
        VehicleState next =
            step_bicycle(v.state, cmd.steer_rad, dt, cfg.wheelbase_m);
        next.speed_mps = step_speed(pre_speed, cmd.throttle_pct, dt,
                                    cfg.max_speed_mps, cfg.motor_tau_s);
        VehicleState est{v.est_x, v.est_y, v.est_heading, pre_speed};
        est = step_bicycle(est, cmd.steer_rad, dt, cfg.wheelbase_m);
        v.est_x = est.x_m;
        v.est_y = est.y_m;
        v.est_heading = est.heading_rad;
        v.odometer_m += pre_speed * dt;
        v.state = next;
      }
    } catch (const NumericError& e) {
      throw EngineAbort("tick " + std::to_string(tick) + ": " + e.what(),
                        static_cast<int>(tick));
    }
  }
  if (lap_mode && sims[0].odometer_m < lap_target)
    throw EngineAbort("lap target not reached within the tick cap",
                      static_cast<int>(tick));

  result.ticks = static_cast<int>(tick);
  result.bsm_log = channel.bsm_log();
  result.delivery_log = channel.delivery_log();

  RunMetrics& m = result.metrics;
  m.collision = collision;
  m.settled_from_s = settled_from;
  m.min_gap_m = std::numeric_limits<double>::infinity();
  for (int id = 0; id < n; ++id) {
    const Accumulator& a = acc[static_cast<std::size_t>(id)];
    VehicleMetrics vm;
    vm.cross_track_rmse_m = rmse(a.cross_track);
    vm.cross_track_max_abs_m = 0.0;
    for (double e : a.cross_track)
      vm.cross_track_max_abs_m = std::max(vm.cross_track_max_abs_m, std::abs(e));
    if (id == 0) {
      vm.gap_error_mean_m = nan_value();
      vm.gap_error_max_m = nan_value();
      vm.min_gap_m = nan_value();
      vm.mean_headway_eff_s = nan_value();
    } else {
      vm.min_gap_m = a.min_gap;
      m.min_gap_m = std::min(m.min_gap_m, a.min_gap);
      vm.mean_headway_eff_s =
          a.h_eff_count > 0 ? a.h_eff_sum / static_cast<double>(a.h_eff_count)
                            : nan_value();
      if (a.gap_error_settled.empty()) {
        vm.gap_error_mean_m = nan_value();
        vm.gap_error_max_m = nan_value();
      } else {
        double sum = 0.0, max_abs = 0.0;
        for (double e : a.gap_error_settled) {
          sum += e;
          max_abs = std::max(max_abs, std::abs(e));
        }
        vm.gap_error_mean_m = sum / static_cast<double>(a.gap_error_settled.size());
        vm.gap_error_max_m = max_abs;
      }
    }
    m.per_vehicle.push_back(vm);
  }
  m.delivery_total = channel.total_stats();
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < n; ++r)
      if (s != r) m.delivery_pairs.push_back({s, r, channel.stats(s, r)});

  return result;
}

std::vector<std::pair<double, RunResult>> sweep(
    const Scenario& base, const SimConfig& cfg,
    const std::vector<double>& drop_rates) {
  for (double rate : drop_rates)
    if (!(rate >= 0.0 && rate <= 1.0))
      throw ContractError("drop rates must lie in [0, 1]");

  std::vector<std::pair<double, RunResult>> results;
  results.reserve(drop_rates.size());
  for (double rate : drop_rates) {
    Scenario s = base;
    s.channel.drop_p = rate;
    results.emplace_back(rate, run(s, cfg));
  }
  return results;
}

}  // namespace convoysim
