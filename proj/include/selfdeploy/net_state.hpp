#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfdeploy/rf_env.hpp"

namespace selfdeploy {

struct ManagedUser {
  std::string id;
  Point location;
  double demand_mbps = 0.0;  // minimum rate for target QoS, > 0
};

// Everything on air at one request: the managed mAP, deployed managed
// extenders, managed users and the unmanaged neighbor nodes.
struct NetworkLayout {
  RadioNode ap;
  std::vector<RadioNode> extenders;
  std::vector<ManagedUser> users;
  std::vector<RadioNode> neighbors;
};

// Backhaul and fronthaul rates of one extender. Per-user vectors are
// indexed like user_ids, the users associated to this extender.
struct ThroughputState {
  std::string extender_id;
  Point location;
  double est_backhaul = 0.0;
  double meas_backhaul = 0.0;
  double backhaul_share = 1.0;  // fraction of mAP airtime the backhaul gets
  std::vector<std::string> user_ids;
  std::vector<double> est_fronthaul;
  std::vector<double> meas_fronthaul;
  std::vector<double> e2e;

  double est_fronthaul_total() const;
  double meas_fronthaul_total() const;
};

// Backhaul is split in proportion to each user's measured fronthaul, so a
// lone user gets min(backhaul, fronthaul). Throws if the user is not
// associated with this extender.
double e2e_rate(const ThroughputState& state, std::string_view user_id);

// QoS satisfaction degree min(rate / demand, 1).
double fitness(double rate_mbps, double demand_mbps);

struct UserPerception {
  std::string id;
  Point location;
  double rssi_dbm = 0.0;  // from the serving node
  double e2e_rate = 0.0;
  double demand = 0.0;
  double fitness = 0.0;
  std::optional<std::size_t> serving_extender;  // index into extenders; unset = mAP

  double delivered_rate() const;  // traffic is offered at the demand rate
};

struct PerceptionSnapshot {
  std::size_t request_index = 0;
  std::vector<UserPerception> users;
  std::vector<ThroughputState> extenders;

  double min_fitness() const;
  double mean_fitness() const;
};

// Users associate to the deployed extender with the strongest RSSI, or to
// the mAP when none is deployed.
PerceptionSnapshot perceive(const RadioEnvironment& env, const NetworkLayout& layout,
                            std::size_t request_index = 0);

// Users whose rate is strictly below demand, in snapshot order.
std::vector<std::string> unsatisfied_users(const PerceptionSnapshot& snapshot);

}  // namespace selfdeploy
