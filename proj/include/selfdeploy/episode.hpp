#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfdeploy/cbr.hpp"
#include "selfdeploy/learn.hpp"
#include "selfdeploy/net_state.hpp"
#include "selfdeploy/placement.hpp"
#include "selfdeploy/scenario.hpp"

namespace selfdeploy {

enum class Algorithm { ai_cbr, coverage_max, ap_only, oracle };

std::string_view to_string(Algorithm algo);
// Accepts the CLI spellings ai-cbr, coverage-max, ap-only, oracle.
Algorithm parse_algorithm(std::string_view text);

enum class ActionSource { initial, reuse, optimize, settle, hold };
std::string_view to_string(ActionSource source);

enum class TerminalStatus { converged, budget_exhausted, request_limit };
std::string_view to_string(TerminalStatus status);

// One Monte Carlo instance: user locations and extender start cells. Every
// algorithm in a campaign sees the same instance for a given drop.
struct DropInstance {
  std::size_t drop = 0;
  std::uint64_t seed = 0;
  std::vector<ManagedUser> users;
  std::vector<Point> initial_extenders;  // candidate grid points
};

// Derives the drop seed from (master_seed, drop) and draws the instance.
DropInstance make_drop(const Scenario& scenario, std::uint64_t master_seed, std::size_t drop);

struct RequestRecord {
  std::size_t request = 0;
  std::vector<Point> placement;  // extender locations during this request
  PerceptionSnapshot snapshot;
  ActionSource source = ActionSource::initial;
  double omega = 0.0;
  bool degenerate_action = false;
  std::optional<FitnessField> field;  // field used to pick the next move
};

struct EpisodeLog {
  Algorithm algorithm = Algorithm::ai_cbr;
  std::size_t drop = 0;
  std::uint64_t seed = 0;
  std::vector<RequestRecord> requests;
  TerminalStatus status = TerminalStatus::converged;
  std::size_t repositions = 0;           // every location change after the start
  std::size_t optimize_repositions = 0;  // those counted against the budget
  std::vector<KnowledgeBase> knowledge_bases;  // per extender; empty for baselines
  std::vector<LearnedThroughputMap> learned_maps;

  const RequestRecord& initial() const { return requests.front(); }
  const RequestRecord& final() const { return requests.back(); }
};

struct EpisodeOptions {
  std::optional<std::size_t> max_repositions;  // unset: unlimited
  std::size_t max_requests = 50;
  bool record_fields = false;
};

EpisodeOptions episode_options(const Scenario& scenario);

// ai-cbr runs the sense-reason-decide-learn loop; the baselines place once
// and hold.
EpisodeLog run_episode(const Scenario& scenario, Algorithm algo, const DropInstance& drop,
                       const EpisodeOptions& options);

// Candidate with the highest coverage_value for the given users, skipping
// excluded cells; ties to the lowest index.
std::size_t coverage_max_place(const Scenario& scenario, std::span<const ManagedUser> users,
                               std::span<const std::size_t> excluded = {});

// Single-request location problem for this drop, measured through perceive.
LocationProblem make_location_problem(const Scenario& scenario, const DropInstance& drop,
                                      std::size_t horizon = 1);

// True when some placement of at most the scenario's extenders meets every
// demand.
bool drop_feasible(const Scenario& scenario, const DropInstance& drop);

}  // namespace selfdeploy
