#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>
#include <spdlog/spdlog.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "selfdeploy/campaign.hpp"
#include "selfdeploy/episode.hpp"
#include "selfdeploy/error.hpp"
#include "selfdeploy/scenario.hpp"

namespace sd = selfdeploy;

namespace {

std::optional<std::size_t> parse_budget(const std::string& text) {
  if (text == "unlimited") {
    return std::nullopt;
  }
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw sd::Error("--max-repositions expects a count or 'unlimited', got '" + text + "'");
  }
  return n;
}

int cmd_run(const std::string& scenario_path, const std::vector<std::string>& algos,
            std::optional<std::size_t> drops, std::optional<std::uint64_t> seed,
            const std::string& budget, std::optional<std::size_t> max_requests,
            const std::string& out_dir, unsigned jobs, bool save_kb) {
  const auto scenario = sd::load_scenario(scenario_path);
  sd::CampaignOptions options;
  options.algorithms.clear();
  for (const auto& a : algos) {
    options.algorithms.push_back(sd::parse_algorithm(a));
  }
  options.drops = drops;
  options.seed = seed;
  if (!budget.empty()) {
    options.max_repositions = parse_budget(budget);
  }
  options.max_requests = max_requests;
  options.jobs = jobs;
  const auto result = sd::run_campaign(scenario, options);
  sd::write_campaign_outputs(result, out_dir, save_kb);
  fmt::print("{:<14}{:>16}{:>10}{:>10}{:>18}\n", "algo", "avg_tput_mbps", "jain", "outage",
             "mean_repositions");
  for (const auto& r : result.reports) {
    fmt::print("{:<14}{:>16.2f}{:>10.4f}{:>10.4f}{:>18.2f}\n", sd::to_string(r.algorithm),
               r.avg_throughput, r.jain, r.outage, r.convergence.mean);
  }
  fmt::print("wrote {}\n", out_dir);
  return 0;
}

int cmd_dump_field(const std::string& scenario_path, std::size_t drop,
                   std::optional<std::uint64_t> seed, const std::string& out_dir) {
  const auto scenario = sd::load_scenario(scenario_path);
  const auto instance = sd::make_drop(scenario, seed.value_or(scenario.seed), drop);
  auto options = sd::episode_options(scenario);
  options.record_fields = true;
  const auto log = sd::run_episode(scenario, sd::Algorithm::ai_cbr, instance, options);
  const auto& candidates = scenario.env.plan.candidates();
  std::filesystem::create_directories(out_dir);

  std::size_t written = 0;
  for (const auto& rec : log.requests) {
    if (!rec.field) {
      continue;
    }
    const auto path = std::filesystem::path(out_dir) / fmt::format("field_{:03}.csv", rec.request);
    auto out = fmt::output_file(path.string());
    out.print("x,y,exploitation,exploration,combined\n");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out.print("{},{},{:.6f},{:.6f},{:.6f}\n", candidates[i].x, candidates[i].y,
                rec.field->exploitation[i], rec.field->exploration[i], rec.field->combined[i]);
    }
    ++written;
  }
  {
    auto out = fmt::output_file((std::filesystem::path(out_dir) / "learned_map.csv").string());
    out.print("x,y,backhaul,fronthaul,backhaul_provenance,fronthaul_provenance\n");
    const auto& map = log.learned_maps.front();
    const auto tag = [](sd::Provenance p) {
      return p == sd::Provenance::distance_based ? "distance" : "region";
    };
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out.print("{},{},{:.6f},{:.6f},{},{}\n", candidates[i].x, candidates[i].y,
                map.backhaul()[i], map.fronthaul()[i], tag(map.backhaul_provenance()[i]),
                tag(map.fronthaul_provenance()[i]));
    }
  }
  {
    auto out = fmt::output_file((std::filesystem::path(out_dir) / "trajectory.csv").string());
    out.print("request,source,x,y,omega,min_fitness,mean_fitness\n");
    for (const auto& rec : log.requests) {
      for (const auto& p : rec.placement) {
        out.print("{},{},{},{},{:.6f},{:.6f},{:.6f}\n", rec.request, sd::to_string(rec.source),
                  p.x, p.y, rec.omega, rec.snapshot.min_fitness(), rec.snapshot.mean_fitness());
      }
    }
  }
  fmt::print("drop {}: {} requests, status {}, {} field files in {}\n", drop, log.requests.size(),
             sd::to_string(log.status), written, out_dir);
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const auto scenario = sd::load_scenario(scenario_path);
  const auto issues = sd::lint_scenario(scenario);
  for (const auto& issue : issues) {
    fmt::print(stderr, "{}: {}\n", scenario_path, issue);
  }
  if (!issues.empty()) {
    return 1;
  }
  fmt::print("{}: ok ({} candidates, {} extender(s), {} user(s), {} neighbor network(s))\n",
             scenario_path, scenario.env.plan.candidates().size(), scenario.extenders.size(),
             scenario.users.size(), scenario.neighbors.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor extender self-deployment simulator"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging to stderr");

  std::string scenario_path;
  std::vector<std::string> algos{"ai-cbr"};
  std::optional<std::size_t> drops;
  std::optional<std::uint64_t> seed;
  std::string budget;
  std::optional<std::size_t> max_requests;
  std::string out_dir = "out";
  unsigned jobs = 1;
  bool save_kb = false;

  auto* run = app.add_subcommand("run", "Run a multi-drop campaign and write CSV results");
  run->add_option("--scenario", scenario_path, "Scenario YAML file")->required();
  run->add_option("--algo", algos, "ai-cbr, coverage-max, ap-only or oracle (repeatable)")
      ->delimiter(',');
  run->add_option("--drops", drops, "Number of drops (default: scenario)");
  run->add_option("--seed", seed, "Master seed (default: scenario)");
  run->add_option("--max-repositions", budget, "Reposition budget, a count or 'unlimited'");
  run->add_option("--max-requests", max_requests, "Request cap per episode");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Worker threads");
  run->add_flag("--save-kb", save_kb, "Also write kb.txt");

  std::size_t drop = 0;
  auto* dump = app.add_subcommand("dump-field", "Write per-request fitness-field heatmap CSVs");
  dump->add_option("--scenario", scenario_path, "Scenario YAML file")->required();
  dump->add_option("--drop", drop, "Drop index");
  dump->add_option("--seed", seed, "Master seed (default: scenario)");
  dump->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate", "Parse and lint a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario YAML file")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*run) {
      return cmd_run(scenario_path, algos, drops, seed, budget, max_requests, out_dir, jobs,
                     save_kb);
    }
    if (*dump) {
      return cmd_dump_field(scenario_path, drop, seed, out_dir);
    }
    if (*validate) {
      return cmd_validate(scenario_path);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
