#include "selfdeploy/placement.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "selfdeploy/error.hpp"
#include "selfdeploy/net_state.hpp"

namespace selfdeploy {

std::vector<double> exploitation_fitness(std::span<const double> est_backhaul,
                                         std::span<const double> est_fronthaul) {
  if (est_backhaul.size() != est_fronthaul.size()) {
    throw Error("backhaul and fronthaul estimates must cover the same candidates");
  }
  std::vector<double> out(est_backhaul.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::min(est_backhaul[i], est_fronthaul[i]);
  }
  return out;
}

std::vector<double> exploration_fitness(std::span<const Point> candidates,
                                        std::span<const Point> visited, double omega,
                                        double grid_step) {
  std::vector<double> out(candidates.size(), 1.0);
  if (visited.empty()) {
    return out;
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& k : visited) {
      const double zeta = std::max(distance(candidates[i], k), grid_step);
      const double base = std::max(0.0, std::log10(zeta));
      best = std::min(best, std::pow(base, omega));
    }
    out[i] = best;
  }
  return out;
}

FitnessField fitness_field(std::span<const Point> candidates, std::span<const double> est_backhaul,
                           std::span<const double> est_fronthaul, std::span<const Point> visited,
                           double omega, double grid_step) {
  if (est_backhaul.size() != candidates.size()) {
    throw Error("estimates must cover every candidate");
  }
  FitnessField field;
  field.exploitation = exploitation_fitness(est_backhaul, est_fronthaul);
  field.exploration = exploration_fitness(candidates, visited, omega, grid_step);
  field.combined.resize(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    field.combined[i] = field.exploitation[i] * field.exploration[i];
  }
  return field;
}

std::vector<Point> stored_locations(const KnowledgeBase& kb) {
  std::vector<Point> out;
  out.reserve(kb.size());
  for (const auto& c : kb.cases()) {
    out.push_back(c.action.location);
  }
  return out;
}

GeneratedAction generate_action(std::span<const Point> candidates,
                                std::span<const double> est_backhaul,
                                std::span<const double> est_fronthaul, const KnowledgeBase& kb,
                                double omega, double grid_step) {
  if (candidates.empty()) {
    throw Error("no candidate locations");
  }
  const auto visited = stored_locations(kb);
  GeneratedAction out;
  out.field = fitness_field(candidates, est_backhaul, est_fronthaul, visited, omega, grid_step);

  const auto argmax = [](const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i] > v[best]) {
        best = i;
      }
    }
    return best;
  };
  out.index = argmax(out.field.combined);
  if (!(out.field.combined[out.index] > 0.0)) {
    out.degenerate = true;
    out.index = argmax(out.field.exploitation);
  }
  out.action.location = candidates[out.index];
  return out;
}

namespace {

// All cell subsets of size 1..max_size, by size then lexicographically.
std::vector<std::vector<std::size_t>> placement_options(std::size_t cells, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 1; k <= std::min(max_size, cells); ++k) {
    std::vector<std::size_t> combo(k);
    for (std::size_t j = 0; j < k; ++j) {
      combo[j] = j;
    }
    while (true) {
      out.push_back(combo);
      std::size_t j = k;
      while (j > 0 && combo[j - 1] == cells - k + (j - 1)) {
        --j;
      }
      if (j == 0) {
        break;
      }
      ++combo[j - 1];
      for (std::size_t m = j; m < k; ++m) {
        combo[m] = combo[m - 1] + 1;
      }
    }
  }
  return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t option_count(std::size_t cells, std::size_t max_size) {
  // sum_k C(cells, k) for k = 1..max_size
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (std::size_t k = 1; k <= std::min(max_size, cells); ++k) {
    binom = saturating_mul(binom, cells - k + 1) / k;
    if (binom == std::numeric_limits<std::uint64_t>::max() ||
        total > std::numeric_limits<std::uint64_t>::max() - binom) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total += binom;
  }
  return total;
}

std::size_t symmetric_difference(const std::vector<std::size_t>& a,
                                 const std::vector<std::size_t>& b) {
  std::vector<std::size_t> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return diff.size();
}

long sequence_objective(const std::vector<const std::vector<std::size_t>*>& seq) {
  std::size_t peak = 0;
  std::size_t moves = 0;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    peak = std::max(peak, seq[t]->size());
    if (t > 0) {
      moves += symmetric_difference(*seq[t - 1], *seq[t]);
    }
  }
  return static_cast<long>(peak + moves);
}

void validate(const LocationProblem& problem) {
  if (problem.candidate_count == 0) {
    throw Error("location problem has no candidates");
  }
  if (problem.horizon == 0 || problem.max_extenders == 0) {
    throw Error("location problem needs a positive horizon and extender budget");
  }
  if (problem.demands.size() != problem.horizon) {
    throw Error("location problem needs one demand vector per request");
  }
  if (!problem.oracle) {
    throw Error("location problem has no rate oracle");
  }
}

}  // namespace

std::uint64_t exhaustive_combinations(const LocationProblem& problem) {
  const std::uint64_t options = option_count(problem.candidate_count, problem.max_extenders);
  std::uint64_t total = 1;
  for (std::size_t t = 0; t < problem.horizon; ++t) {
    total = saturating_mul(total, options);
  }
  return total;
}

ExhaustiveSolveResult exhaustive_solve(const LocationProblem& problem) {
  validate(problem);
  const std::uint64_t combos = exhaustive_combinations(problem);
  if (combos > kMaxExhaustiveCombinations) {
    throw Error(fmt::format("instance too large for exhaustive search: {} combinations (limit {})",
                            combos, kMaxExhaustiveCombinations));
  }
  const auto options = placement_options(problem.candidate_count, problem.max_extenders);
  const std::size_t horizon = problem.horizon;

  // satisfied[t][o] and worst-user fitness per option
  std::vector<std::vector<bool>> satisfied(horizon, std::vector<bool>(options.size()));
  std::vector<std::vector<double>> worst(horizon, std::vector<double>(options.size()));
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& demand = problem.demands[t];
    for (std::size_t o = 0; o < options.size(); ++o) {
      const auto report = problem.oracle(t, options[o]);
      if (report.user_rates.size() != demand.size()) {
        throw Error("rate oracle returned the wrong number of users");
      }
      bool ok = true;
      double w = 1.0;
      for (std::size_t u = 0; u < demand.size(); ++u) {
        ok = ok && report.user_rates[u] >= demand[u];
        w = std::min(w, fitness(report.user_rates[u], demand[u]));
      }
      satisfied[t][o] = ok;
      worst[t][o] = w;
    }
  }

  ExhaustiveSolveResult result;
  std::vector<std::size_t> best_choice;
  long best_objective = std::numeric_limits<long>::max();

  std::vector<std::size_t> digits(horizon, 0);
  std::vector<const std::vector<std::size_t>*> seq(horizon);
  while (true) {
    ++result.sequences;
    bool ok = true;
    for (std::size_t t = 0; t < horizon && ok; ++t) {
      ok = satisfied[t][digits[t]];
    }
    if (ok) {
      for (std::size_t t = 0; t < horizon; ++t) {
        seq[t] = &options[digits[t]];
      }
      const long obj = sequence_objective(seq);
      if (obj < best_objective) {
        best_objective = obj;
        best_choice = digits;
      }
    }
    // odometer, last request fastest
    std::size_t pos = horizon;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < options.size()) {
        break;
      }
      digits[pos] = 0;
      if (pos == 0) {
        pos = horizon + 1;  // wrapped
        break;
      }
    }
    if (pos == horizon + 1) {
      break;
    }
  }

  result.feasible = !best_choice.empty();
  if (!result.feasible) {
    best_choice.assign(horizon, 0);
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t o = 1; o < options.size(); ++o) {
        if (worst[t][o] > worst[t][best_choice[t]]) {
          best_choice[t] = o;
        }
      }
    }
  }

  result.deployed.assign(horizon, std::vector<std::uint8_t>(problem.candidate_count, 0));
  result.repositioned.assign(horizon, std::vector<std::uint8_t>(problem.candidate_count, 0));
  for (std::size_t t = 0; t < horizon; ++t) {
    result.placements.push_back(options[best_choice[t]]);
    seq[t] = &options[best_choice[t]];
    for (std::size_t cell : options[best_choice[t]]) {
      result.deployed[t][cell] = 1;
    }
    if (t > 0) {
      for (std::size_t i = 0; i < problem.candidate_count; ++i) {
        result.repositioned[t][i] = result.deployed[t][i] != result.deployed[t - 1][i] ? 1 : 0;
      }
    }
  }
  result.objective = sequence_objective(seq);
  return result;
}

std::vector<std::string> check_location_constraints(const LocationProblem& problem,
                                                    const ExhaustiveSolveResult& result) {
  std::vector<std::string> issues;
  const std::size_t horizon = problem.horizon;
  if (result.deployed.size() != horizon || result.repositioned.size() != horizon) {
    issues.push_back("decision matrices do not span the horizon");
    return issues;
  }
  long peak = 0;
  long moves = 0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& delta = result.deployed[t];
    const auto& alpha = result.repositioned[t];
    if (delta.size() != problem.candidate_count || alpha.size() != problem.candidate_count) {
      issues.push_back(fmt::format("t={}: decision vector has the wrong length", t));
      continue;
    }
    long count = 0;
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < problem.candidate_count; ++i) {
      // binary decisions
      if (delta[i] > 1 || alpha[i] > 1) {
        issues.push_back(fmt::format("binary t={} i={}: non-binary decision", t, i));
      }
      // a flip of delta must be paid for by alpha
      if (t > 0) {
        const int diff = std::abs(int(result.deployed[t - 1][i]) - int(delta[i]));
        if (alpha[i] < diff) {
          issues.push_back(fmt::format("move t={} i={}: alpha {} < |delta change| {}", t, i,
                                       int(alpha[i]), diff));
        }
        moves += alpha[i];
      }
      if (delta[i]) {
        ++count;
        cells.push_back(i);
      }
    }
    if (count > static_cast<long>(problem.max_extenders)) {
      issues.push_back(fmt::format("t={}: {} extenders exceed the budget {}", t, count,
                                   problem.max_extenders));
    }
    peak = std::max(peak, count);
    if (cells.empty()) {
      issues.push_back(fmt::format("t={}: no extender deployed", t));
      continue;
    }

    const auto report = problem.oracle(t, cells);
    const auto& demand = problem.demands[t];
    for (std::size_t u = 0; u < demand.size(); ++u) {
      const auto& assoc = report.association[u];
      const double rate = report.user_rates[u];
      // demand: sum_i delta_i r_iu >= D_u; only the serving extender carries r_iu
      if (result.feasible && rate < demand[u]) {
        issues.push_back(fmt::format("demand t={} u={}: rate {:.3f} below demand {:.3f}", t, u,
                                     rate, demand[u]));
      }
      if (!assoc) {
        if (rate > 0.0) {
          issues.push_back(fmt::format("rate t={} u={}: rate without a serving extender", t, u));
        }
        continue;
      }
      // rate bounded by both hops
      const auto& ext = report.extenders.at(*assoc);
      const double bound = std::min(ext.est_fronthaul_total, ext.meas_backhaul);
      if (rate > bound + 1e-9) {
        issues.push_back(fmt::format("rate t={} u={}: rate {:.3f} above min(est fronthaul, "
                                     "backhaul) {:.3f}",
                                     t, u, rate, bound));
      }
    }
    // backhaul bounded by its MAC share
    for (const auto& ext : report.extenders) {
      if (ext.meas_backhaul > ext.est_backhaul * ext.backhaul_share + 1e-9) {
        issues.push_back(fmt::format("backhaul t={} i={}: backhaul {:.3f} above estimate x share "
                                     "{:.3f}",
                                     t, ext.cell, ext.meas_backhaul,
                                     ext.est_backhaul * ext.backhaul_share));
      }
    }
  }
  if (peak + moves != result.objective) {
    issues.push_back(fmt::format("objective {} does not equal max deployed {} + moves {}",
                                 result.objective, peak, moves));
  }
  return issues;
}

}  // namespace selfdeploy
