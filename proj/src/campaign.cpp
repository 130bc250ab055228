#include "selfdeploy/campaign.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

CampaignResult run_campaign(const Scenario& scenario, const CampaignOptions& options) {
  if (options.algorithms.empty()) {
    throw Error("campaign needs at least one algorithm");
  }
  const std::size_t drops = options.drops.value_or(scenario.drops);
  const std::uint64_t seed = options.seed.value_or(scenario.seed);
  if (drops == 0) {
    throw Error("campaign needs at least one drop");
  }
  EpisodeOptions episode = episode_options(scenario);
  if (options.max_repositions) {
    episode.max_repositions = *options.max_repositions;
  }
  if (options.max_requests) {
    episode.max_requests = *options.max_requests;
  }

  CampaignResult result;
  for (std::size_t d = 0; d < drops; ++d) {
    result.drops.push_back(make_drop(scenario, seed, d));
  }
  const std::size_t algos = options.algorithms.size();
  result.logs.assign(algos, std::vector<EpisodeLog>(drops));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t task = next++; task < algos * drops; task = next++) {
      const std::size_t a = task / drops;
      const std::size_t d = task % drops;
      try {
        result.logs[a][d] =
            run_episode(scenario, options.algorithms[a], result.drops[d], episode);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  for (std::size_t a = 0; a < algos; ++a) {
    result.reports.push_back(summarize(options.algorithms[a], result.logs[a]));
  }
  return result;
}

void write_campaign_outputs(const CampaignResult& result, const std::filesystem::path& out_dir,
                            bool save_kb) {
  std::filesystem::create_directories(out_dir);
  {
    auto out = fmt::output_file((out_dir / "summary.csv").string());
    out.print("algo,avg_throughput,jain,outage,mean_repositions\n");
    for (const auto& r : result.reports) {
      out.print("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", to_string(r.algorithm), r.avg_throughput,
                r.jain, r.outage, r.convergence.mean);
    }
  }
  {
    auto out = fmt::output_file((out_dir / "drops.csv").string());
    out.print("algo,drop,user,rate,satisfied\n");
    for (const auto& r : result.reports) {
      for (const auto& s : r.samples) {
        out.print("{},{},{},{:.6f},{}\n", to_string(r.algorithm), s.drop, s.user, s.rate,
                  s.satisfied ? 1 : 0);
      }
    }
  }
  {
    auto out = fmt::output_file((out_dir / "convergence_cdf.csv").string());
    out.print("algo,repositions,cdf\n");
    for (const auto& r : result.reports) {
      for (std::size_t k = 0; k < r.convergence.cdf.size(); ++k) {
        out.print("{},{},{:.6f}\n", to_string(r.algorithm), k, r.convergence.cdf[k]);
      }
    }
  }
  if (save_kb) {
    for (std::size_t a = 0; a < result.reports.size(); ++a) {
      if (result.reports[a].algorithm != Algorithm::ai_cbr) {
        continue;
      }
      const auto& kbs = result.logs[a].front().knowledge_bases;
      if (!kbs.empty()) {
        save_knowledge_base(kbs.front(), out_dir / "kb.txt");
      }
      break;
    }
  }
}

}  // namespace selfdeploy
