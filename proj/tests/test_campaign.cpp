#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "selfdeploy/campaign.hpp"

using namespace selfdeploy;

namespace {

const std::filesystem::path kRoot = SELFDEPLOY_SOURCE_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CampaignOptions small(unsigned jobs) {
  CampaignOptions o;
  o.algorithms = {Algorithm::ai_cbr, Algorithm::coverage_max};
  o.drops = 4;
  o.seed = 99;
  o.jobs = jobs;
  return o;
}

}  // namespace

TEST_CASE("campaign output is independent of thread count") {
  const auto sc = load_scenario(kRoot / "scenarios" / "apartment_6room.yaml");
  const auto tmp = std::filesystem::temp_directory_path() / "selfdeploy_campaign_test";
  std::filesystem::remove_all(tmp);
  write_campaign_outputs(run_campaign(sc, small(1)), tmp / "a", true);
  write_campaign_outputs(run_campaign(sc, small(3)), tmp / "b", true);
  for (const auto* f : {"summary.csv", "drops.csv", "convergence_cdf.csv", "kb.txt"}) {
    CAPTURE(f);
    const auto a = slurp(tmp / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(tmp / "b" / f));
  }
  const auto summary = slurp(tmp / "a" / "summary.csv");
  CHECK(summary.rfind("algo,avg_throughput,jain,outage,mean_repositions\n", 0) == 0);
  CHECK(summary.find("\nai-cbr,") != std::string::npos);
  CHECK(summary.find("\ncoverage-max,") != std::string::npos);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("campaign shares drops across algorithms") {
  const auto sc = load_scenario(kRoot / "scenarios" / "apartment_6room.yaml");
  const auto r = run_campaign(sc, small(1));
  REQUIRE(r.logs.size() == 2);
  REQUIRE(r.drops.size() == 4);
  for (std::size_t d = 0; d < 4; ++d) {
    CHECK(r.logs[0][d].final().snapshot.users[0].location ==
          r.logs[1][d].final().snapshot.users[0].location);
    CHECK(r.logs[0][d].drop == d);
  }
  CHECK(r.reports[0].samples.size() == 8);
}

TEST_CASE("budget override reaches the episodes") {
  const auto sc = load_scenario(kRoot / "scenarios" / "apartment_6room.yaml");
  auto o = small(1);
  o.algorithms = {Algorithm::ai_cbr};
  o.max_repositions = std::optional<std::size_t>(0);
  const auto r = run_campaign(sc, o);
  for (const auto& log : r.logs[0]) {
    CHECK(log.optimize_repositions == 0);
  }
}
