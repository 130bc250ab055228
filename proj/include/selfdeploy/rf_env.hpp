#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selfdeploy/geometry.hpp"

namespace selfdeploy {

struct ChannelParams {
  double frequency_mhz = 5000.0;
  double noise_floor_dbm = -90.0;
  double rx_sensitivity_dbm = -83.0;
  double cca_threshold_dbm = -62.0;
  double pathloss_exponent = 2.0;

  // Throws if the sensitivity sits above the CCA threshold or a value is
  // out of range.
  void validate() const;
};

struct McsEntry {
  double min_snr_db = 0.0;
  double rate_mbps = 0.0;
};

// Rows are strictly increasing in both minimum SNR and rate.
class McsTable {
 public:
  McsTable(std::vector<McsEntry> rows, double bandwidth_mhz);

  // 16-row VHT table at 80 MHz, 29.3 to 866.7 Mbps.
  static McsTable vht80();

  const std::vector<McsEntry>& rows() const { return rows_; }
  double bandwidth_mhz() const { return bandwidth_mhz_; }
  double max_rate() const { return rows_.back().rate_mbps; }

 private:
  std::vector<McsEntry> rows_;
  double bandwidth_mhz_;
};

enum class NodeRole { access_point, extender, station };

struct RadioNode {
  std::string id;
  NodeRole role = NodeRole::station;
  Point location;
  double tx_power_dbm = 20.0;
  int channel = 0;            // serving channel; backhaul channel for extenders
  int fronthaul_channel = 0;  // extenders only
  bool managed = true;
  bool active = true;  // transmits downlink traffic (contends for airtime)
};

// Channel a node transmits downlink traffic on; stations do not transmit.
std::optional<int> transmit_channel(const RadioNode& node);

struct RadioEnvironment {
  FloorPlan plan;
  ChannelParams channel;
  McsTable mcs = McsTable::vht80();
  std::optional<std::size_t> fixed_mcs_index;  // unset: nearest-capacity rule
  double hidden_node_penalty = 0.6;
};

inline constexpr double kMinLinkDistance = 0.1;  // meters
inline constexpr double kSnrCeiling = 60.0;      // dB

// Log-distance loss: free space plus 10(n-2)log10(d) plus crossed walls.
double path_loss(const FloorPlan& plan, const ChannelParams& params, Point a, Point b);
// Same model without walls: what a node can predict from distance alone.
double distance_path_loss(const ChannelParams& params, Point a, Point b);

double rssi_at(const RadioNode& tx, Point rx, const FloorPlan& plan,
               const ChannelParams& params);
double snr_at(const RadioNode& tx, Point rx, const FloorPlan& plan,
              const ChannelParams& params);

// Table rate nearest to the Shannon capacity among rows the SNR supports.
double estimate_phy_rate(double snr_db, const McsTable& table);
// Rate of one fixed row, or 0 when the SNR does not reach it.
double fixed_mcs_rate(double snr_db, const McsTable& table, std::size_t index);

// PHY rate under the environment's rate rule, 0 below receiver sensitivity.
double phy_rate(const RadioEnvironment& env, double rssi_dbm, double snr_db);

// Distance-only estimate (walls and contention unknown).
double estimated_link_rate(const RadioEnvironment& env, const RadioNode& tx, Point rx);

struct LinkThroughput {
  double phy_rate = 0.0;
  double airtime_share = 1.0;
  double hidden_probability = 0.0;
  int contenders = 0;
  int hidden_nodes = 0;
  double rate = 0.0;  // phy_rate * airtime_share * (1 - hidden_probability)
};

// Contention-aware rate of the downlink tx -> rx. `transmitters` is every
// node in the environment; inactive ones and the tx itself are skipped.
LinkThroughput measured_link_throughput(const RadioEnvironment& env, const RadioNode& tx,
                                        const RadioNode& rx,
                                        std::span<const RadioNode> transmitters);

// Weaker of the backhaul RSSI and the worst fronthaul RSSI when an extender
// sits at loc; the quantity a coverage-driven placement maximizes.
double coverage_value(const RadioEnvironment& env, Point loc, const RadioNode& ap,
                      double extender_tx_power_dbm, std::span<const Point> user_locations);

}  // namespace selfdeploy
