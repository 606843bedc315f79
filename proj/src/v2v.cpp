#include "convoysim/v2v.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace convoysim {

std::string encode(const Bsm& msg) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%d,%llu,%.6f,%.6f,%.6f,%.6f,%.6f",
                msg.sender_id, static_cast<unsigned long long>(msg.seq),
                msg.t_s, msg.x_m, msg.y_m, msg.speed_mps, msg.heading_rad);
  return buf;
}

Bsm decode(std::string_view line) {
  std::array<std::string_view, 7> fields;
  std::size_t start = 0;
  for (int i = 0; i < 7; ++i) {
    std::size_t comma = line.find(',', start);
    bool last = (i == 6);
    if (!last && comma == std::string_view::npos)
      throw ParseError("bsm record has too few fields", i);
    if (last && comma != std::string_view::npos)
      throw ParseError("bsm record has too many fields", 7);
    fields[i] = last ? line.substr(start) : line.substr(start, comma - start);
    start = comma + 1;
  }

  auto parse_int = [&](int idx, auto& out) {
    auto sv = fields[idx];
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc() || ptr != sv.data() + sv.size())
      throw ParseError("bsm field is not an integer", idx);
  };
  auto parse_num = [&](int idx) {
    auto sv = fields[idx];
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), out);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || !std::isfinite(out))
      throw ParseError("bsm field is not a number", idx);
    return out;
  };

  Bsm msg;
  parse_int(0, msg.sender_id);
  parse_int(1, msg.seq);
  msg.t_s = parse_num(2);
  msg.x_m = parse_num(3);
  msg.y_m = parse_num(4);
  msg.speed_mps = parse_num(5);
  msg.heading_rad = parse_num(6);
  return msg;
}

bool Channel::Queued::operator<(const Queued& other) const {
  if (deliver_t != other.deliver_t) return deliver_t < other.deliver_t;
  if (msg.sender_id != other.msg.sender_id)
    return msg.sender_id < other.msg.sender_id;
  return msg.seq < other.msg.seq;
}

Channel::Channel(ChannelConfig cfg) : cfg_(cfg) {
  if (!(cfg_.drop_p >= 0.0 && cfg_.drop_p <= 1.0))
    throw ContractError("drop probability must lie in [0, 1]");
  if (!(cfg_.latency_s >= 0.0))
    throw ContractError("latency must be non-negative");
}

void Channel::register_vehicle(int id) {
  vehicles_.insert(id);
  queues_.try_emplace(id);
}

Rng& Channel::pair_rng(int sender, int receiver) {
  auto key = std::make_pair(sender, receiver);
  auto it = rngs_.find(key);
  if (it == rngs_.end()) {
    Rng rng(derive_seed(cfg_.seed, static_cast<std::uint64_t>(sender),
                        static_cast<std::uint64_t>(receiver)));
    it = rngs_.emplace(key, std::move(rng)).first;
  }
  return it->second;
}

void Channel::broadcast(const Bsm& msg, double now_s) {
  if (!registered(msg.sender_id))
    throw ContractError("broadcast from unregistered sender");
  if (now_s < clock_) throw ContractError("channel clock moved backwards");
  if (msg.t_s > now_s + 1e-12)
    throw ContractError("bsm timestamp lies in the channel's future");
  if (auto it = last_seq_.find(msg.sender_id);
      it != last_seq_.end() && msg.seq <= it->second)
    throw ContractError("bsm sequence numbers must increase per sender");
  last_seq_[msg.sender_id] = msg.seq;
  clock_ = now_s;

  bsm_log_.push_back(encode(msg));

  for (int receiver : vehicles_) {
    if (receiver == msg.sender_id) continue;
    PairStats& st = stats_[{msg.sender_id, receiver}];
    st.sent += 1;
    bool drop;
    if (cfg_.drop_p <= 0.0) {
      drop = false;
    } else if (cfg_.drop_p >= 1.0) {
      drop = true;
    } else {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      drop = uniform(pair_rng(msg.sender_id, receiver)) < cfg_.drop_p;
    }
    if (drop) {
      st.dropped += 1;
      continue;
    }
    auto& queue = queues_[receiver];
    Queued q{now_s + cfg_.latency_s, msg};
    queue.insert(std::upper_bound(queue.begin(), queue.end(), q), q);
  }
}

std::vector<Bsm> Channel::poll(int receiver_id, double now_s) {
  if (!registered(receiver_id))
    throw ContractError("poll from unregistered receiver");
  if (now_s < clock_) throw ContractError("channel clock moved backwards");
  clock_ = now_s;

  auto& queue = queues_[receiver_id];
  // Small slack absorbs float tick arithmetic; the deadline stays inclusive.
  const double cutoff = now_s + 1e-9;
  std::vector<Bsm> due;
  char buf[224];
  auto it = queue.begin();
  for (; it != queue.end() && it->deliver_t <= cutoff; ++it) {
    due.push_back(it->msg);
    stats_[{it->msg.sender_id, receiver_id}].delivered += 1;
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f", encode(it->msg).c_str(),
                  receiver_id, it->deliver_t);
    delivery_log_.push_back(buf);
  }
  queue.erase(queue.begin(), it);
  return due;
}

PairStats Channel::stats(int sender_id, int receiver_id) const {
  auto it = stats_.find({sender_id, receiver_id});
  return it == stats_.end() ? PairStats{} : it->second;
}

PairStats Channel::total_stats() const {
  PairStats total;
  for (const auto& [key, st] : stats_) {
    total.sent += st.sent;
    total.delivered += st.delivered;
    total.dropped += st.dropped;
  }
  return total;
}

}  // namespace convoysim
