#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "selfdeploy/episode.hpp"
#include "selfdeploy/metrics.hpp"
#include "selfdeploy/scenario.hpp"

namespace selfdeploy {

struct CampaignOptions {
  std::vector<Algorithm> algorithms{Algorithm::ai_cbr};
  std::optional<std::size_t> drops;    // unset: scenario value
  std::optional<std::uint64_t> seed;   // unset: scenario value
  // unset: scenario value; holding an empty optional means unlimited
  std::optional<std::optional<std::size_t>> max_repositions;
  std::optional<std::size_t> max_requests;
  unsigned jobs = 1;
};

struct CampaignResult {
  std::vector<DropInstance> drops;
  std::vector<std::vector<EpisodeLog>> logs;  // [algorithm][drop]
  std::vector<MetricsReport> reports;         // per algorithm, in option order
};

// Runs every algorithm on the same drops. Episodes may run on several
// threads; results are merged in drop order so output never depends on
// scheduling.
CampaignResult run_campaign(const Scenario& scenario, const CampaignOptions& options);

// summary.csv, drops.csv and convergence_cdf.csv; kb.txt holds the first
// ai-cbr drop's knowledge base when save_kb is set.
void write_campaign_outputs(const CampaignResult& result, const std::filesystem::path& out_dir,
                            bool save_kb);

}  // namespace selfdeploy
