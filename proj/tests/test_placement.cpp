#include <doctest.h>

#include <cmath>
#include <random>

#include "selfdeploy/error.hpp"
#include "selfdeploy/placement.hpp"

using namespace selfdeploy;

namespace {

std::vector<Point> grid(int cols, int rows) {
  std::vector<Point> out;
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      out.push_back({double(x), double(y)});
    }
  }
  return out;
}

KnowledgeBase kb_at(const std::vector<Point>& locs) {
  KnowledgeBase kb;
  for (const auto& p : locs) {
    kb.retain(Case{Problem{{0.0, 0.0}}, Action{p}, 0.5, 0});
  }
  return kb;
}

// Oracle: evaluate the product directly and scan.
std::size_t brute_argmax(const std::vector<Point>& cand, const std::vector<double>& bh,
                         const std::vector<double>& fh, const std::vector<Point>& stored,
                         double omega) {
  std::size_t best = 0;
  double best_v = -1.0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    double fe = 1.0;
    if (!stored.empty()) {
      fe = 1e300;
      for (const auto& k : stored) {
        const double z = std::max(1.0, std::hypot(cand[i].x - k.x, cand[i].y - k.y));
        fe = std::min(fe, std::pow(std::log10(z), omega));
      }
    }
    const double v = std::min(bh[i], fh[i]) * fe;
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

// A synthetic location problem: cell `good[t]` serves every user at demand,
// any other cell serves at half demand.
LocationProblem synthetic(std::size_t cells, std::vector<std::size_t> good, double demand,
                          std::size_t users = 1, std::size_t max_ext = 1) {
  LocationProblem p;
  p.candidate_count = cells;
  p.horizon = good.size();
  p.max_extenders = max_ext;
  p.demands.assign(good.size(), std::vector<double>(users, demand));
  p.oracle = [good, demand, users](std::size_t t, std::span<const std::size_t> placed) {
    PlacementReport r;
    bool hit = false;
    for (std::size_t c : placed) {
      hit = hit || c == good[t];
    }
    const double rate = hit ? demand : demand / 2.0;
    for (std::size_t c : placed) {
      r.extenders.push_back({c, 1000.0, rate * double(users), 1.0, 1000.0});
    }
    std::size_t serving = 0;
    for (std::size_t e = 0; e < placed.size(); ++e) {
      if (placed[e] == good[t]) {
        serving = e;
      }
    }
    r.association.assign(users, serving);
    r.user_rates.assign(users, rate);
    return r;
  };
  return p;
}

}  // namespace

TEST_CASE("exploitation is the weaker estimate") {
  const std::vector<double> bh{100, 30};
  const std::vector<double> fh{60, 90};
  CHECK(exploitation_fitness(bh, fh) == std::vector<double>{60, 30});
}

TEST_CASE("exploration fitness examples") {
  const std::vector<Point> cand{{10, 0}, {0, 0}, {0.5, 0}};
  const std::vector<Point> one{{0, 0}};
  auto fe = exploration_fitness(cand, one, 1.0, 1.0);
  CHECK(fe[0] == doctest::Approx(1.0));
  CHECK(fe[1] == 0.0);
  CHECK(fe[2] == 0.0);

  const std::vector<Point> far{{0, 100}, {0, 10}};
  const std::vector<Point> origin{{0, 0}};
  CHECK(exploration_fitness(origin, far, 1.0, 1.0)[0] == doctest::Approx(1.0));

  CHECK(exploration_fitness(cand, {}, 0.3, 1.0) == std::vector<double>(3, 1.0));
}

TEST_CASE("exploration is monotone in omega on either side of 10 m") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::uniform_real_distribution<double> z(1.5, 60.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = w(rng);
    double b = w(rng);
    if (a > b) {
      std::swap(a, b);
    }
    const double zeta = z(rng);
    if (std::abs(zeta - 10.0) < 1e-6 || b - a < 1e-6) {
      continue;
    }
    const std::vector<Point> c{{zeta, 0}};
    const std::vector<Point> v{{0, 0}};
    const double fa = exploration_fitness(c, v, a, 1.0)[0];
    const double fb = exploration_fitness(c, v, b, 1.0)[0];
    if (zeta > 10.0) {
      CHECK(fb > fa);
    } else {
      CHECK(fb < fa);
    }
  }
}

TEST_CASE("generate_action on an empty base is pure exploitation") {
  const auto cand = grid(3, 3);
  const std::vector<double> bh{9, 8, 7, 6, 5, 4, 3, 2, 1};
  const std::vector<double> fh{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto g = generate_action(cand, bh, fh, KnowledgeBase{}, 0.5, 1.0);
  CHECK(g.index == 4);  // min() peaks at the center
  CHECK(g.action.location == Point{1, 1});
  CHECK_FALSE(g.degenerate);
}

TEST_CASE("storing the exploitation argmax moves the choice elsewhere") {
  const auto cand = grid(3, 3);
  const std::vector<double> bh{9, 8, 7, 6, 5, 4, 3, 2, 1};
  const std::vector<double> fh{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto g = generate_action(cand, bh, fh, kb_at({{1, 1}}), 0.5, 1.0);
  CHECK(g.index != 4);
  CHECK(g.field.combined[4] == 0.0);
}

TEST_CASE("all-zero product falls back to exploitation argmax") {
  const auto cand = grid(2, 1);  // every cell within one step of the stored one
  const std::vector<double> bh{5, 7};
  const std::vector<double> fh{9, 9};
  const auto g = generate_action(cand, bh, fh, kb_at({{0, 0}}), 0.5, 1.0);
  CHECK(g.degenerate);
  CHECK(g.index == 1);
}

TEST_CASE("5x5 grid with two stored cases matches a product scan") {
  const auto cand = grid(5, 5);
  std::vector<double> bh(25);
  std::vector<double> fh(25);
  for (std::size_t i = 0; i < 25; ++i) {
    bh[i] = 100.0 - 3.0 * double(i);
    fh[i] = 20.0 + 2.5 * double(i);
  }
  const std::vector<Point> stored{{2, 2}, {4, 0}};
  const auto g = generate_action(cand, bh, fh, kb_at(stored), 0.5, 1.0);
  CHECK(g.index == brute_argmax(cand, bh, fh, stored, 0.5));
}

TEST_CASE("argmax is invariant to scaling exploitation") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> r(0.0, 400.0);
  std::uniform_real_distribution<double> s(0.01, 100.0);
  std::uniform_int_distribution<int> pick(0, 63);
  const auto cand = grid(8, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> bh(64);
    std::vector<double> fh(64);
    for (std::size_t i = 0; i < 64; ++i) {
      bh[i] = std::round(r(rng));
      fh[i] = std::round(r(rng));
    }
    const auto kb = kb_at({cand[std::size_t(pick(rng))], cand[std::size_t(pick(rng))]});
    const double k = std::ldexp(1.0, int(std::floor(std::log2(s(rng)))));  // exact scaling
    std::vector<double> bh2(bh);
    std::vector<double> fh2(fh);
    for (std::size_t i = 0; i < 64; ++i) {
      bh2[i] *= k;
      fh2[i] *= k;
    }
    CHECK(generate_action(cand, bh, fh, kb, 0.7, 1.0).index ==
          generate_action(cand, bh2, fh2, kb, 0.7, 1.0).index);
  }
}

TEST_CASE("exhaustive solve: single satisfiable location") {
  const auto p = synthetic(9, {4}, 50.0);
  const auto r = exhaustive_solve(p);
  CHECK(r.feasible);
  CHECK(r.placements[0] == std::vector<std::size_t>{4});
  CHECK(r.objective == 1);
  CHECK(check_location_constraints(p, r).empty());
}

TEST_CASE("exhaustive solve: demand change forcing one move") {
  const auto p = synthetic(16, {0, 5}, 50.0);
  const auto r = exhaustive_solve(p);
  CHECK(r.feasible);
  CHECK(r.placements[0] == std::vector<std::size_t>{0});
  CHECK(r.placements[1] == std::vector<std::size_t>{5});
  CHECK(r.objective == 3);
  CHECK(r.sequences == 256);
  CHECK(check_location_constraints(p, r).empty());
}

TEST_CASE("exhaustive solve: infeasible instance") {
  auto p = synthetic(9, {4}, 50.0);
  p.demands = {{80.0}};
  const auto r = exhaustive_solve(p);
  CHECK_FALSE(r.feasible);
  CHECK(r.placements[0] == std::vector<std::size_t>{4});  // max-min fitness
}

TEST_CASE("exhaustive solve prefers fewer extenders") {
  const auto p = synthetic(6, {2}, 40.0, 2, 2);
  const auto r = exhaustive_solve(p);
  CHECK(r.placements[0].size() == 1);
  CHECK(r.objective == 1);
}

TEST_CASE("oversized instances are refused with the count") {
  LocationProblem p = synthetic(100, {0, 0, 0, 0}, 10.0);
  CHECK(exhaustive_combinations(p) == 100'000'000ULL);
  CHECK_THROWS_WITH_AS(exhaustive_solve(p), doctest::Contains("100000000"), Error);
  p.max_extenders = 60;
  p.horizon = 40;
  p.demands.assign(40, {10.0});
  CHECK(exhaustive_combinations(p) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("constraint checker flags tampered decisions") {
  const auto p = synthetic(16, {0, 5}, 50.0);
  auto r = exhaustive_solve(p);
  r.repositioned[1][0] = 0;  // move not paid for
  CHECK_FALSE(check_location_constraints(p, r).empty());
  r = exhaustive_solve(p);
  r.objective += 1;
  CHECK_FALSE(check_location_constraints(p, r).empty());
}
