#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selfdeploy/cbr.hpp"
#include "selfdeploy/geometry.hpp"

namespace selfdeploy {

// Per-candidate exploitation (Mbps), exploration and their product.
struct FitnessField {
  std::vector<double> exploitation;
  std::vector<double> exploration;
  std::vector<double> combined;
};

// min(backhaul, aggregate fronthaul) per candidate, from learned estimates.
std::vector<double> exploitation_fitness(std::span<const double> est_backhaul,
                                         std::span<const double> est_fronthaul);

// min over visited locations of log10(zeta)^omega, zeta the distance in
// meters clamped to one grid step. log10 is floored at 0 so a sub-meter grid
// cannot produce a negative base. All ones when nothing was visited.
std::vector<double> exploration_fitness(std::span<const Point> candidates,
                                        std::span<const Point> visited, double omega,
                                        double grid_step);

FitnessField fitness_field(std::span<const Point> candidates, std::span<const double> est_backhaul,
                           std::span<const double> est_fronthaul, std::span<const Point> visited,
                           double omega, double grid_step);

std::vector<Point> stored_locations(const KnowledgeBase& kb);

struct GeneratedAction {
  std::size_t index = 0;
  Action action;
  bool degenerate = false;  // product was zero everywhere; exploitation argmax
  FitnessField field;
};

// Argmax of exploitation x exploration, ties to the lowest candidate index.
GeneratedAction generate_action(std::span<const Point> candidates,
                                std::span<const double> est_backhaul,
                                std::span<const double> est_fronthaul, const KnowledgeBase& kb,
                                double omega, double grid_step);

// ---- exhaustive solver for the dynamic location problem ----

struct ExtenderReport {
  std::size_t cell = 0;
  double est_backhaul = 0.0;
  double meas_backhaul = 0.0;
  double backhaul_share = 1.0;  // MAC share of the mAP devoted to this extender
  double est_fronthaul_total = 0.0;
};

struct PlacementReport {
  std::vector<ExtenderReport> extenders;
  std::vector<std::optional<std::size_t>> association;  // per user, index into extenders
  std::vector<double> user_rates;                       // measured E2E, Mbps
};

// Measured outcome of deploying extenders at `cells` during request t.
using RateOracle =
    std::function<PlacementReport(std::size_t t, std::span<const std::size_t> cells)>;

struct LocationProblem {
  std::size_t candidate_count = 0;
  std::size_t horizon = 1;
  std::size_t max_extenders = 1;
  std::vector<std::vector<double>> demands;  // [t][user], Mbps
  RateOracle oracle;
};

struct ExhaustiveSolveResult {
  std::vector<std::vector<std::size_t>> placements;     // [t] occupied cells, ascending
  std::vector<std::vector<std::uint8_t>> deployed;      // delta[t][i]
  std::vector<std::vector<std::uint8_t>> repositioned;  // alpha[t][i]
  long objective = 0;
  bool feasible = false;
  std::uint64_t sequences = 0;
};

inline constexpr std::uint64_t kMaxExhaustiveCombinations = 10'000'000;

// Number of placement sequences, saturating at UINT64_MAX.
std::uint64_t exhaustive_combinations(const LocationProblem& problem);

// Enumerates every placement sequence and keeps the cheapest one meeting
// every demand at every request (max deployed count plus relocations).
// Without a feasible sequence, returns the per-request max-min-fitness
// placement with feasible = false. Throws if the instance is too large.
ExhaustiveSolveResult exhaustive_solve(const LocationProblem& problem);

// Literal check of the location-problem constraints on a result; returns
// one message per violation.
std::vector<std::string> check_location_constraints(const LocationProblem& problem,
                                                    const ExhaustiveSolveResult& result);

}  // namespace selfdeploy
