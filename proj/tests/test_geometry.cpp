#include <doctest.h>

#include <random>

#include "selfdeploy/error.hpp"
#include "selfdeploy/geometry.hpp"

using namespace selfdeploy;

namespace {

// Independent crossing test: orientation signs of the four end-point triples.
int orient(Point p, Point q, Point r) {
  const double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
  return (v > 1e-12) - (v < -1e-12);
}

bool proper_cross(Point a, Point b, Point c, Point d) {
  return orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0;
}

}  // namespace

TEST_CASE("degenerate segment crosses nothing") {
  FloorPlan plan(10, 10, {{{5, 0}, {5, 10}, 10.0}}, 1.0);
  const auto w = wall_count(plan, {5, 5}, {5, 5});
  CHECK(w.count == 0);
  CHECK(w.total_loss_db == 0.0);
}

TEST_CASE("full-height wall at x=5 between (2,5) and (8,5)") {
  FloorPlan plan(10, 10, {{{5, 0}, {5, 10}, 10.0}}, 1.0);
  const auto w = wall_count(plan, {2, 5}, {8, 5});
  CHECK(w.count == 1);
  CHECK(w.total_loss_db == doctest::Approx(10.0));
  // direction does not matter
  CHECK(wall_count(plan, {8, 5}, {2, 5}).count == 1);
}

TEST_CASE("two walls add up") {
  FloorPlan plan(10, 10, {{{3, 0}, {3, 10}, 10.0}, {{6, 0}, {6, 10}, 10.0}}, 1.0);
  const auto w = wall_count(plan, {1, 1}, {9, 2});
  CHECK(w.count == 2);
  CHECK(w.total_loss_db == doctest::Approx(20.0));
}

TEST_CASE("segment ending before a wall or parallel to it does not cross") {
  FloorPlan plan(10, 10, {{{5, 0}, {5, 10}, 10.0}}, 1.0);
  CHECK(wall_count(plan, {1, 1}, {4, 9}).count == 0);
  CHECK(wall_count(plan, {5, 1}, {5, 9}).count == 0);  // collinear
  CHECK(wall_count(plan, {5, 3}, {8, 3}).count == 0);  // starts on the wall
}

TEST_CASE("candidate grid is row-major and covers the plan") {
  FloorPlan plan(4, 3, {}, 1.0);
  CHECK(plan.columns() == 5);
  CHECK(plan.rows() == 4);
  REQUIRE(plan.candidates().size() == 20);
  CHECK(plan.candidates()[0] == Point{0, 0});
  CHECK(plan.candidates()[1] == Point{1, 0});
  CHECK(plan.candidates()[5] == Point{0, 1});
  CHECK(plan.candidates().back() == Point{4, 3});
  CHECK(plan.candidate_index({2, 1}) == 7u);
  CHECK_FALSE(plan.candidate_index({2.5, 1}).has_value());
  CHECK(plan.nearest_candidate({2.2, 0.9}) == 7u);
}

TEST_CASE("placement area narrows candidates without moving the grid") {
  FloorPlan plan(10, 20, {}, 1.0, Rect{{0.5, 0}, {3, 2}});
  CHECK(plan.columns() == 3);
  CHECK(plan.rows() == 3);
  CHECK(plan.candidates().front() == Point{1, 0});
  CHECK(plan.candidates().back() == Point{3, 2});
  CHECK_THROWS_AS(FloorPlan(10, 10, {}, 1.0, Rect{{0, 0}, {12, 5}}), Error);
  CHECK_THROWS_AS(FloorPlan(10, 10, {}, 1.0, Rect{{0.2, 0.2}, {0.8, 0.8}}), Error);
}

TEST_CASE("invalid plans are rejected") {
  CHECK_THROWS_AS(FloorPlan(0, 10, {}, 1.0), Error);
  CHECK_THROWS_AS(FloorPlan(10, 10, {}, 0.0), Error);
  CHECK_THROWS_AS(FloorPlan(10, 10, {{{1, 1}, {1, 1}, 5.0}}, 1.0), Error);
  CHECK_THROWS_AS(FloorPlan(10, 10, {{{1, 1}, {1, 5}, -1.0}}, 1.0), Error);
}

TEST_CASE("wall counting agrees with an orientation oracle and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<WallSegment> walls;
    for (int k = 0; k < 4; ++k) {
      walls.push_back({{u(rng), u(rng)}, {u(rng), u(rng)}, 7.0});
    }
    FloorPlan plan(10, 10, walls, 1.0);
    const Point a{u(rng), u(rng)};
    const Point b{u(rng), u(rng)};
    int expected = 0;
    for (const auto& w : walls) {
      expected += proper_cross(a, b, w.a, w.b) ? 1 : 0;
    }
    const auto got = wall_count(plan, a, b);
    CHECK(got.count == expected);
    CHECK(got.total_loss_db == doctest::Approx(7.0 * expected));
    CHECK(wall_count(plan, b, a).count == got.count);
  }
}
