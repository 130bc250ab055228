#include "selfdeploy/rf_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

void ChannelParams::validate() const {
  if (!(frequency_mhz > 0.0)) {
    throw Error("frequency must be positive");
  }
  if (!(pathloss_exponent > 0.0)) {
    throw Error("path-loss exponent must be positive");
  }
  if (rx_sensitivity_dbm > cca_threshold_dbm) {
    throw Error("receiver sensitivity must not exceed the CCA threshold");
  }
}

McsTable::McsTable(std::vector<McsEntry> rows, double bandwidth_mhz)
    : rows_(std::move(rows)), bandwidth_mhz_(bandwidth_mhz) {
  if (rows_.empty()) {
    throw Error("MCS table is empty");
  }
  if (!(bandwidth_mhz_ > 0.0)) {
    throw Error("MCS table bandwidth must be positive");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!(rows_[i].rate_mbps > 0.0)) {
      throw Error("MCS rates must be positive");
    }
    if (i > 0 && (rows_[i].min_snr_db <= rows_[i - 1].min_snr_db ||
                  rows_[i].rate_mbps <= rows_[i - 1].rate_mbps)) {
      throw Error("MCS table must be strictly increasing in SNR and rate");
    }
  }
}

McsTable McsTable::vht80() {
  return McsTable(
      {
          {0.0, 29.3},   {4.0, 58.5},   {8.0, 87.8},   {11.0, 117.0},
          {15.0, 175.5}, {19.0, 234.0}, {22.0, 263.3}, {25.0, 292.5},
          {29.0, 351.0}, {32.0, 390.0}, {36.0, 468.0}, {40.0, 526.5},
          {44.0, 585.0}, {49.0, 702.0}, {54.0, 780.0}, {60.0, 866.7},
      },
      80.0);
}

std::optional<int> transmit_channel(const RadioNode& node) {
  switch (node.role) {
    case NodeRole::access_point:
      return node.channel;
    case NodeRole::extender:
      return node.fronthaul_channel;
    case NodeRole::station:
      return std::nullopt;
  }
  return std::nullopt;
}

double distance_path_loss(const ChannelParams& params, Point a, Point b) {
  const double d = std::max(distance(a, b), kMinLinkDistance);
  const double log_d = std::log10(d);
  return 20.0 * log_d + 20.0 * std::log10(params.frequency_mhz) - 27.55 +
         10.0 * (params.pathloss_exponent - 2.0) * log_d;
}

double path_loss(const FloorPlan& plan, const ChannelParams& params, Point a, Point b) {
  return distance_path_loss(params, a, b) + wall_count(plan, a, b).total_loss_db;
}

double rssi_at(const RadioNode& tx, Point rx, const FloorPlan& plan,
               const ChannelParams& params) {
  return tx.tx_power_dbm - path_loss(plan, params, tx.location, rx);
}

double snr_at(const RadioNode& tx, Point rx, const FloorPlan& plan,
              const ChannelParams& params) {
  return rssi_at(tx, rx, plan, params) - params.noise_floor_dbm;
}

double estimate_phy_rate(double snr_db, const McsTable& table) {
  const double snr = std::min(snr_db, kSnrCeiling);
  if (std::isnan(snr) || snr < table.rows().front().min_snr_db) {
    return 0.0;
  }
  const double capacity = table.bandwidth_mhz() * std::log2(1.0 + std::pow(10.0, snr / 10.0));
  double best = 0.0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& row : table.rows()) {
    if (row.min_snr_db > snr) {
      break;
    }
    const double gap = std::abs(row.rate_mbps - capacity);
    if (gap < best_gap) {
      best_gap = gap;
      best = row.rate_mbps;
    }
  }
  return best;
}

double fixed_mcs_rate(double snr_db, const McsTable& table, std::size_t index) {
  if (index >= table.rows().size()) {
    throw Error("fixed MCS index out of range");
  }
  const auto& row = table.rows()[index];
  return std::min(snr_db, kSnrCeiling) >= row.min_snr_db ? row.rate_mbps : 0.0;
}

double phy_rate(const RadioEnvironment& env, double rssi_dbm, double snr_db) {
  if (rssi_dbm < env.channel.rx_sensitivity_dbm) {
    return 0.0;
  }
  if (env.fixed_mcs_index) {
    return fixed_mcs_rate(snr_db, env.mcs, *env.fixed_mcs_index);
  }
  return estimate_phy_rate(snr_db, env.mcs);
}

double estimated_link_rate(const RadioEnvironment& env, const RadioNode& tx, Point rx) {
  const double rssi = tx.tx_power_dbm - distance_path_loss(env.channel, tx.location, rx);
  return phy_rate(env, rssi, rssi - env.channel.noise_floor_dbm);
}

LinkThroughput measured_link_throughput(const RadioEnvironment& env, const RadioNode& tx,
                                        const RadioNode& rx,
                                        std::span<const RadioNode> transmitters) {
  LinkThroughput out;
  const double rssi = rssi_at(tx, rx.location, env.plan, env.channel);
  out.phy_rate = phy_rate(env, rssi, rssi - env.channel.noise_floor_dbm);

  const auto link_channel = transmit_channel(tx);
  if (link_channel) {
    for (const auto& other : transmitters) {
      if (!other.active || other.id == tx.id || transmit_channel(other) != link_channel) {
        continue;
      }
      if (rssi_at(other, tx.location, env.plan, env.channel) > env.channel.cca_threshold_dbm) {
        ++out.contenders;
      } else if (other.id != rx.id &&
                 rssi_at(other, rx.location, env.plan, env.channel) >
                     env.channel.rx_sensitivity_dbm) {
        ++out.hidden_nodes;
      }
    }
  }
  out.airtime_share = 1.0 / (1.0 + out.contenders);
  out.hidden_probability = std::clamp(env.hidden_node_penalty * out.hidden_nodes, 0.0, 0.9);
  out.rate = out.phy_rate * out.airtime_share * (1.0 - out.hidden_probability);
  return out;
}

double coverage_value(const RadioEnvironment& env, Point loc, const RadioNode& ap,
                      double extender_tx_power_dbm, std::span<const Point> user_locations) {
  double value = rssi_at(ap, loc, env.plan, env.channel);
  RadioNode ext;
  ext.role = NodeRole::extender;
  ext.location = loc;
  ext.tx_power_dbm = extender_tx_power_dbm;
  for (const auto& u : user_locations) {
    value = std::min(value, rssi_at(ext, u, env.plan, env.channel));
  }
  return value;
}

}  // namespace selfdeploy
