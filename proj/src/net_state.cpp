#include "selfdeploy/net_state.hpp"

#include <algorithm>
#include <numeric>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

double ThroughputState::est_fronthaul_total() const {
  return std::accumulate(est_fronthaul.begin(), est_fronthaul.end(), 0.0);
}

double ThroughputState::meas_fronthaul_total() const {
  return std::accumulate(meas_fronthaul.begin(), meas_fronthaul.end(), 0.0);
}

double e2e_rate(const ThroughputState& state, std::string_view user_id) {
  const auto it = std::find(state.user_ids.begin(), state.user_ids.end(), user_id);
  if (it == state.user_ids.end()) {
    throw Error("no serving node for user '" + std::string(user_id) + "'");
  }
  const double fronthaul = state.meas_fronthaul[static_cast<std::size_t>(it - state.user_ids.begin())];
  const double total = state.meas_fronthaul_total();
  if (total <= 0.0) {
    return 0.0;
  }
  const double share = state.user_ids.size() == 1 ? state.meas_backhaul
                                                  : state.meas_backhaul * (fronthaul / total);
  return std::min(share, fronthaul);
}

double fitness(double rate_mbps, double demand_mbps) {
  if (!(demand_mbps > 0.0)) {
    throw Error("demand must be positive");
  }
  return std::clamp(rate_mbps / demand_mbps, 0.0, 1.0);
}

double UserPerception::delivered_rate() const { return std::min(e2e_rate, demand); }

double PerceptionSnapshot::min_fitness() const {
  double out = 1.0;
  for (const auto& u : users) {
    out = std::min(out, u.fitness);
  }
  return out;
}

double PerceptionSnapshot::mean_fitness() const {
  if (users.empty()) {
    return 1.0;
  }
  double sum = 0.0;
  for (const auto& u : users) {
    sum += u.fitness;
  }
  return sum / static_cast<double>(users.size());
}

PerceptionSnapshot perceive(const RadioEnvironment& env, const NetworkLayout& layout,
                            std::size_t request_index) {
  std::vector<RadioNode> on_air;
  on_air.reserve(1 + layout.extenders.size() + layout.neighbors.size());
  on_air.push_back(layout.ap);
  on_air.insert(on_air.end(), layout.extenders.begin(), layout.extenders.end());
  on_air.insert(on_air.end(), layout.neighbors.begin(), layout.neighbors.end());

  PerceptionSnapshot snap;
  snap.request_index = request_index;
  snap.extenders.reserve(layout.extenders.size());
  for (const auto& ext : layout.extenders) {
    ThroughputState st;
    st.extender_id = ext.id;
    st.location = ext.location;
    st.est_backhaul = estimated_link_rate(env, layout.ap, ext.location);
    const auto backhaul = measured_link_throughput(env, layout.ap, ext, on_air);
    st.meas_backhaul = backhaul.rate;
    st.backhaul_share = backhaul.airtime_share * (1.0 - backhaul.hidden_probability);
    snap.extenders.push_back(std::move(st));
  }

  snap.users.reserve(layout.users.size());
  for (const auto& user : layout.users) {
    UserPerception up;
    up.id = user.id;
    up.location = user.location;
    up.demand = user.demand_mbps;

    RadioNode sta;
    sta.id = user.id;
    sta.role = NodeRole::station;
    sta.location = user.location;

    if (layout.extenders.empty()) {
      up.rssi_dbm = rssi_at(layout.ap, user.location, env.plan, env.channel);
      up.e2e_rate = measured_link_throughput(env, layout.ap, sta, on_air).rate;
    } else {
      std::size_t best = 0;
      double best_rssi = rssi_at(layout.extenders[0], user.location, env.plan, env.channel);
      for (std::size_t e = 1; e < layout.extenders.size(); ++e) {
        const double r = rssi_at(layout.extenders[e], user.location, env.plan, env.channel);
        if (r > best_rssi) {
          best_rssi = r;
          best = e;
        }
      }
      up.serving_extender = best;
      up.rssi_dbm = best_rssi;
      auto& st = snap.extenders[best];
      st.user_ids.push_back(user.id);
      st.est_fronthaul.push_back(estimated_link_rate(env, layout.extenders[best], user.location));
      st.meas_fronthaul.push_back(
          measured_link_throughput(env, layout.extenders[best], sta, on_air).rate);
    }
    snap.users.push_back(std::move(up));
  }

  for (auto& st : snap.extenders) {
    st.e2e.clear();
    for (const auto& id : st.user_ids) {
      st.e2e.push_back(e2e_rate(st, id));
    }
  }
  for (auto& up : snap.users) {
    if (up.serving_extender) {
      up.e2e_rate = e2e_rate(snap.extenders[*up.serving_extender], up.id);
    }
    up.fitness = fitness(up.e2e_rate, up.demand);
  }
  return snap;
}

std::vector<std::string> unsatisfied_users(const PerceptionSnapshot& snapshot) {
  std::vector<std::string> out;
  for (const auto& u : snapshot.users) {
    if (u.e2e_rate < u.demand) {
      out.push_back(u.id);
    }
  }
  return out;
}

}  // namespace selfdeploy
