#include "selfdeploy/metrics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

double jain_index(std::span<const double> rates) {
  if (rates.empty()) {
    throw Error("jain index of an empty rate list");
  }
  double sum = 0.0;
  double sq = 0.0;
  for (double r : rates) {
    if (r < 0.0) {
      throw Error("negative rate in jain index");
    }
    sum += r;
    sq += r * r;
  }
  if (sq == 0.0) {
    spdlog::debug("jain index of all-zero rates taken as 1");
    return 1.0;
  }
  return sum * sum / (static_cast<double>(rates.size()) * sq);
}

double outage_fraction(std::span<const double> rates) {
  if (rates.empty()) {
    throw Error("outage of an empty rate list");
  }
  const auto zeros = std::count_if(rates.begin(), rates.end(), [](double r) { return r <= 0.0; });
  return static_cast<double>(zeros) / static_cast<double>(rates.size());
}

ConvergenceStats convergence_stats(std::span<const std::size_t> repositions) {
  if (repositions.empty()) {
    throw Error("convergence statistics need at least one episode");
  }
  ConvergenceStats out;
  const double n = static_cast<double>(repositions.size());
  for (auto r : repositions) {
    out.mean += static_cast<double>(r);
  }
  out.mean /= n;
  double var = 0.0;
  for (auto r : repositions) {
    const double d = static_cast<double>(r) - out.mean;
    var += d * d;
  }
  out.stddev = std::sqrt(var / n);
  const std::size_t max = *std::max_element(repositions.begin(), repositions.end());
  out.cdf.resize(max + 1);
  for (std::size_t k = 0; k <= max; ++k) {
    const auto at_most =
        std::count_if(repositions.begin(), repositions.end(), [k](std::size_t r) { return r <= k; });
    out.cdf[k] = static_cast<double>(at_most) / n;
  }
  return out;
}

std::vector<double> MetricsReport::rates() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    out.push_back(s.rate);
  }
  return out;
}

MetricsReport summarize(Algorithm algo, std::span<const EpisodeLog> logs) {
  if (logs.empty()) {
    throw Error("no episodes to summarize");
  }
  MetricsReport report;
  report.algorithm = algo;
  for (const auto& log : logs) {
    for (const auto& u : log.final().snapshot.users) {
      report.samples.push_back({log.drop, u.id, u.delivered_rate(), u.e2e_rate >= u.demand});
    }
    report.repositions.push_back(log.repositions);
  }
  const auto rates = report.rates();
  double sum = 0.0;
  for (double r : rates) {
    sum += r;
  }
  report.avg_throughput = sum / static_cast<double>(rates.size());
  report.jain = jain_index(rates);
  report.outage = outage_fraction(rates);
  report.convergence = convergence_stats(report.repositions);
  return report;
}

}  // namespace selfdeploy
