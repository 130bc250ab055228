#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "selfdeploy/episode.hpp"

namespace selfdeploy {

// (sum x)^2 / (n sum x^2). Throws on an empty list; all zeros give 1.
double jain_index(std::span<const double> rates);

// Fraction of samples with zero rate. Throws on an empty list.
double outage_fraction(std::span<const double> rates);

struct ConvergenceStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::vector<double> cdf;  // cdf[k] = fraction of episodes with <= k repositions
};

// Throws on an empty list.
ConvergenceStats convergence_stats(std::span<const std::size_t> repositions);

struct UserSample {
  std::size_t drop = 0;
  std::string user;
  double rate = 0.0;  // delivered Mbps at the final placement
  bool satisfied = false;
};

struct MetricsReport {
  Algorithm algorithm = Algorithm::ai_cbr;
  double avg_throughput = 0.0;
  double jain = 1.0;
  double outage = 0.0;
  std::vector<std::size_t> repositions;  // per drop
  ConvergenceStats convergence;
  std::vector<UserSample> samples;  // drop-major; jain and outage use these rates

  std::vector<double> rates() const;
};

// Pools the final snapshot of every episode, in the order given.
MetricsReport summarize(Algorithm algo, std::span<const EpisodeLog> logs);

}  // namespace selfdeploy
