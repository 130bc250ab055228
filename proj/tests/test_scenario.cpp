#include <doctest.h>

#include <filesystem>
#include <string>

#include "selfdeploy/scenario.hpp"

using namespace selfdeploy;

namespace {

const std::filesystem::path kRoot = SELFDEPLOY_SOURCE_DIR;

const char* kMinimal = R"(name: tiny
floor_plan:
  width_m: 6
  height_m: 4
  grid_step_m: 1
  walls:
    - {from: [3, 0], to: [3, 4], loss_db: 12}
channel:
  pathloss_exponent: 3.1
mcs:
  bandwidth_mhz: 20
  rows: [[2, 6.5], [5, 13], [9, 19.5]]
ap: {id: AP, location: [0, 0], tx_power_dbm: 18, channel: 1}
extenders:
  - {id: E, tx_power_dbm: 17, backhaul_channel: 1, fronthaul_channel: 6, initial: [2, 2]}
user_placement: fixed
users:
  - {id: U, location: [5, 3], demand_mbps: 10}
run: {drops: 3, seed: 9, max_repositions: unlimited}
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal scenario parses") {
  const auto sc = parse_scenario(kMinimal);
  CHECK(sc.name == "tiny");
  CHECK(sc.env.plan.width() == 6.0);
  CHECK(sc.env.plan.candidates().size() == 35);
  REQUIRE(sc.env.plan.walls().size() == 1);
  CHECK(sc.env.plan.walls()[0].loss_db == 12.0);
  CHECK(sc.env.channel.pathloss_exponent == 3.1);
  CHECK(sc.env.channel.noise_floor_dbm == -90.0);  // default
  CHECK(sc.env.mcs.rows().size() == 3);
  CHECK(sc.env.mcs.bandwidth_mhz() == 20.0);
  CHECK(sc.ap.tx_power_dbm == 18.0);
  REQUIRE(sc.extenders.size() == 1);
  CHECK(sc.extenders[0].initial == InitialPlacement::fixed);
  CHECK(sc.extenders[0].node.location == Point{2, 2});
  CHECK(sc.extenders[0].node.fronthaul_channel == 6);
  CHECK_FALSE(sc.resample_users);
  CHECK(sc.drops == 3);
  CHECK(sc.seed == 9);
  CHECK_FALSE(sc.max_repositions.has_value());
  CHECK(lint_scenario(sc).empty());
}

TEST_CASE("parse errors carry the line") {
  const auto bad_key = replace(kMinimal, "  grid_step_m: 1", "  grid_step_m: 1\n  colour: red");
  CHECK_THROWS_WITH_AS(parse_scenario(bad_key, {}, "x.yaml"),
                       doctest::Contains("x.yaml:6:"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario(bad_key, {}, "x.yaml"), doctest::Contains("colour"),
                       ScenarioError);

  const auto bad_demand = replace(kMinimal, "demand_mbps: 10", "demand_mbps: -1");
  CHECK_THROWS_WITH_AS(parse_scenario(bad_demand, {}, "y.yaml"), doctest::Contains("y.yaml:18:"),
                       ScenarioError);

  const auto bad_budget = replace(kMinimal, "max_repositions: unlimited", "max_repositions: lots");
  CHECK_THROWS_AS(parse_scenario(bad_budget), ScenarioError);

  CHECK_THROWS_AS(parse_scenario("floor_plan: [unclosed"), ScenarioError);
}

TEST_CASE("lint catches semantic problems") {
  auto sc = parse_scenario(replace(kMinimal, "location: [5, 3]", "location: [7, 3]"));
  const auto issues = lint_scenario(sc);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("user U") != std::string::npos);

  sc = parse_scenario(replace(kMinimal, "{id: U,", "{id: E,"));
  CHECK(lint_scenario(sc).size() == 1);
}

TEST_CASE("shipped scenarios load and validate") {
  for (const auto* name : {"apartment_6room.yaml", "apartment_6room_150.yaml",
                           "apartment_6room_random_start.yaml",
                           "two_apartment_hidden_node.yaml"}) {
    CAPTURE(name);
    const auto sc = load_scenario(kRoot / "scenarios" / name);
    CHECK(lint_scenario(sc).empty());
    CHECK(sc.env.mcs.rows().size() == 16);
  }
}

TEST_CASE("neighbor nodes are active only when saturated") {
  const auto sc = load_scenario(kRoot / "scenarios" / "two_apartment_hidden_node.yaml");
  CHECK(sc.env.plan.candidates().size() == 121);  // managed apartment only
  const auto nodes = neighbor_nodes(sc);
  int active = 0;
  for (const auto& n : nodes) {
    CHECK_FALSE(n.managed);
    active += n.active ? 1 : 0;
  }
  CHECK(active == 2);
  CHECK(nodes.size() == 3);
}

TEST_CASE("external MCS table file") {
  const auto t = load_mcs_table(kRoot / "data" / "mcs_vht80.yaml");
  CHECK(t.rows().size() == McsTable::vht80().rows().size());
  CHECK(t.max_rate() == McsTable::vht80().max_rate());
  CHECK_THROWS_AS(parse_mcs_table("bandwidth_mhz: 20\nrows: [[5, 10], [2, 20]]\n"),
                  ScenarioError);
}
