#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfdeploy/cbr.hpp"
#include "selfdeploy/error.hpp"
#include "selfdeploy/net_state.hpp"
#include "selfdeploy/rf_env.hpp"

namespace selfdeploy {

class ScenarioError : public Error {
 public:
  using Error::Error;
};

enum class InitialPlacement { fixed, midway, random };

struct ManagedExtender {
  RadioNode node;  // role extender; node.location used when placement is fixed
  InitialPlacement initial = InitialPlacement::midway;
};

// An unmanaged apartment. Its nodes only contend for airtime when it runs
// saturated traffic.
struct NeighborNetwork {
  RadioNode ap;
  std::optional<RadioNode> extender;
  std::vector<Point> users;
  bool saturated = true;
};

struct CbrSettings {
  DecisionThresholds thresholds;
  double demand_normalizer = kDefaultDemandNormalizer;
  std::size_t user_slots = 4;
  double initial_omega = 0.5;
  double corridor_half_width_cells = 2.0;
  std::size_t stall_requests = 3;
  double stall_tolerance = 0.01;
};

struct Scenario {
  std::string name;
  RadioEnvironment env;
  RadioNode ap;
  std::vector<ManagedExtender> extenders;
  std::vector<ManagedUser> users;
  bool resample_users = true;  // per drop, uniformly over the floor plan
  std::vector<NeighborNetwork> neighbors;
  CbrSettings cbr;
  std::optional<std::size_t> max_repositions = 5;  // unset: unlimited
  std::size_t max_requests = 50;
  std::size_t drops = 50;
  std::uint64_t seed = 1;
};

// Parses the YAML scenario schema documented in the README. Relative table
// paths resolve against base_dir. Errors carry the offending line.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {},
                        std::string_view source_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

McsTable parse_mcs_table(std::string_view text, std::string_view source_name = "mcs table");
McsTable load_mcs_table(const std::filesystem::path& path);

// Semantic problems that parsing alone does not catch; empty when clean.
std::vector<std::string> lint_scenario(const Scenario& scenario);

// Unmanaged nodes on air; transmitters are active only for saturated networks.
std::vector<RadioNode> neighbor_nodes(const Scenario& scenario);

}  // namespace selfdeploy
