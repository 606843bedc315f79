#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "convoysim/errors.hpp"
#include "convoysim/rng.hpp"

namespace convoysim {

/// One Basic Safety Message. Sequence numbers are strictly increasing per
/// sender; the timestamp is the simulation time of emission.
struct Bsm {
  int sender_id = 0;
  std::uint64_t seq = 0;
  double t_s = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double speed_mps = 0.0;
  double heading_rad = 0.0;

  bool operator==(const Bsm&) const = default;
};

/// `id,seq,t,x,y,speed,heading` with fixed 6-decimal formatting.
std::string encode(const Bsm& msg);

/// Inverse of encode(). Malformed input raises ParseError carrying the
/// 0-based field index.
Bsm decode(std::string_view line);

struct ChannelConfig {
  double drop_p = 0.0;      // per (message, receiver) Bernoulli drop
  double latency_s = 0.02;  // fixed delivery delay
  double cadence_hz = 10.0;
  std::uint64_t seed = 1;
};

struct PairStats {
  long sent = 0;
  long delivered = 0;
  long dropped = 0;
  long in_flight() const { return sent - delivered - dropped; }
};

/// Simulated lossy broadcast channel. Every broadcast makes an independent
/// Bernoulli(p) drop decision per receiver, drawn from a substream seeded by
/// the (sender, receiver) pair so topology changes do not perturb unrelated
/// draws. Surviving copies deliver after the fixed latency, ordered by
/// (delivery time, sender id, sequence). All calls happen from one logical
/// clock domain.
class Channel {
 public:
  explicit Channel(ChannelConfig cfg);

  void register_vehicle(int id);
  bool registered(int id) const { return vehicles_.count(id) > 0; }

  /// Queues the message toward every other registered vehicle.
  void broadcast(const Bsm& msg, double now_s);

  /// Removes and returns messages due at or before now for this receiver.
  std::vector<Bsm> poll(int receiver_id, double now_s);

  PairStats stats(int sender_id, int receiver_id) const;
  PairStats total_stats() const;

  const std::vector<std::string>& bsm_log() const { return bsm_log_; }
  const std::vector<std::string>& delivery_log() const { return delivery_log_; }

  double clock_s() const { return clock_; }

 private:
  struct Queued {
    double deliver_t;
    Bsm msg;
    bool operator<(const Queued& other) const;
  };

  Rng& pair_rng(int sender, int receiver);

  ChannelConfig cfg_;
  std::set<int> vehicles_;
  std::map<int, std::uint64_t> last_seq_;
  std::map<int, std::vector<Queued>> queues_;  // per receiver, kept sorted
  std::map<std::pair<int, int>, Rng> rngs_;
  std::map<std::pair<int, int>, PairStats> stats_;
  std::vector<std::string> bsm_log_;
  std::vector<std::string> delivery_log_;
  double clock_ = 0.0;
};

inline constexpr std::string_view kBsmLogHeader = "# bsm-log v1";
inline constexpr std::string_view kDeliveryLogHeader = "# delivery-log v1";

}  // namespace convoysim
