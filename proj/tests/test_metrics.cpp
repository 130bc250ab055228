#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "selfdeploy/error.hpp"
#include "selfdeploy/metrics.hpp"

using namespace selfdeploy;

namespace {

double jain_oracle(const std::vector<double>& x) {
  long double s = 0.0L;
  long double q = 0.0L;
  for (double v : x) {
    s += v;
    q += static_cast<long double>(v) * v;
  }
  return static_cast<double>(s * s / (static_cast<long double>(x.size()) * q));
}

}  // namespace

TEST_CASE("Jain closed forms") {
  const std::vector<double> eq{50, 50};
  const std::vector<double> one{100, 0};
  CHECK(std::abs(jain_index(eq) - 1.0) < 1e-9);
  CHECK(std::abs(jain_index(one) - 0.5) < 1e-9);
  const std::vector<double> mixed{88, 92, 90};
  // 270^2 / (3 * 24308)
  CHECK(jain_index(mixed) == doctest::Approx(72900.0 / 72924.0).epsilon(1e-12));
  const std::vector<double> zeros{0, 0, 0};
  CHECK(jain_index(zeros) == 1.0);
  CHECK_THROWS_AS(jain_index(std::vector<double>{}), Error);
  CHECK_THROWS_AS(jain_index(std::vector<double>{1, -1}), Error);
}

TEST_CASE("Jain index is bounded, permutation and scale invariant") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 900.0);
  std::uniform_int_distribution<int> n(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(static_cast<std::size_t>(n(rng)));
    for (auto& v : x) {
      v = u(rng);
    }
    const double j = jain_index(x);
    CHECK(j == doctest::Approx(jain_oracle(x)).epsilon(1e-12));
    CHECK(j >= 1.0 / double(x.size()) - 1e-12);
    CHECK(j <= 1.0 + 1e-12);
    auto shuffled = x;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(jain_index(shuffled) == doctest::Approx(j).epsilon(1e-12));
    auto scaled = x;
    for (auto& v : scaled) {
      v *= 3.7;
    }
    CHECK(jain_index(scaled) == doctest::Approx(j).epsilon(1e-12));
  }
}

TEST_CASE("outage fraction") {
  std::vector<double> r(10, 50.0);
  r[3] = 0.0;
  CHECK(outage_fraction(r) == doctest::Approx(0.1));
  CHECK_THROWS_AS(outage_fraction(std::vector<double>{}), Error);
}

TEST_CASE("convergence statistics") {
  const std::vector<std::size_t> reps{2, 4};
  const auto s = convergence_stats(reps);
  CHECK(s.mean == doctest::Approx(3.0));
  CHECK(s.stddev == doctest::Approx(1.0));
  REQUIRE(s.cdf.size() == 5);
  CHECK(s.cdf[0] == 0.0);
  CHECK(s.cdf[2] == 0.5);
  CHECK(s.cdf[3] == 0.5);
  CHECK(s.cdf[4] == 1.0);
  CHECK_THROWS_AS(convergence_stats(std::vector<std::size_t>{}), Error);
}

TEST_CASE("convergence CDF is monotone and ends at one") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<std::size_t> u(0, 30);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::size_t> reps(1 + trial % 50);
    for (auto& r : reps) {
      r = u(rng);
    }
    const auto s = convergence_stats(reps);
    for (std::size_t k = 1; k < s.cdf.size(); ++k) {
      CHECK(s.cdf[k] >= s.cdf[k - 1]);
    }
    CHECK(s.cdf.back() == 1.0);
  }
}

TEST_CASE("summarize pools final snapshots") {
  EpisodeLog a;
  a.algorithm = Algorithm::coverage_max;
  a.drop = 0;
  RequestRecord r;
  r.snapshot.users = {{"x", {}, 0, 120.0, 100.0, 1.0, std::nullopt},
                      {"y", {}, 0, 0.0, 100.0, 0.0, std::nullopt}};
  a.requests.push_back(r);
  EpisodeLog b = a;
  b.drop = 1;
  b.repositions = 2;
  b.requests.back().snapshot.users[1].e2e_rate = 60.0;
  const std::vector<EpisodeLog> logs{a, b};
  const auto m = summarize(Algorithm::coverage_max, logs);
  REQUIRE(m.samples.size() == 4);
  CHECK(m.samples[0].rate == 100.0);  // delivered rate is capped at demand
  CHECK(m.samples[0].satisfied);
  CHECK_FALSE(m.samples[3].satisfied);
  CHECK(m.avg_throughput == doctest::Approx(65.0));
  CHECK(m.outage == doctest::Approx(0.25));
  CHECK(m.jain == doctest::Approx(jain_oracle({100, 0, 100, 60})));
  CHECK(m.convergence.mean == doctest::Approx(1.0));
}
