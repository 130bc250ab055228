#include "selfdeploy/geometry.hpp"

#include <cmath>
#include <limits>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

namespace {

constexpr double kEps = 1e-9;

bool crosses(Point a, Point b, const WallSegment& wall) {
  const double rx = b.x - a.x;
  const double ry = b.y - a.y;
  const double sx = wall.b.x - wall.a.x;
  const double sy = wall.b.y - wall.a.y;
  const double denom = rx * sy - ry * sx;
  if (std::abs(denom) < kEps) {
    return false;  // parallel or collinear
  }
  const double qx = wall.a.x - a.x;
  const double qy = wall.a.y - a.y;
  const double t = (qx * sy - qy * sx) / denom;  // along (a, b)
  const double u = (qx * ry - qy * rx) / denom;  // along the wall
  return t > kEps && t < 1.0 - kEps && u >= -kEps && u <= 1.0 + kEps;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point midpoint(Point a, Point b) { return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0}; }

FloorPlan::FloorPlan(double width, double height, std::vector<WallSegment> walls,
                     double grid_step, std::optional<Rect> placement_area)
    : width_(width),
      height_(height),
      walls_(std::move(walls)),
      grid_step_(grid_step),
      placement_(placement_area.value_or(Rect{{0.0, 0.0}, {width, height}})) {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height)) {
    throw Error("floor plan width and height must be positive");
  }
  if (!(grid_step > 0.0) || !std::isfinite(grid_step)) {
    throw Error("grid step must be positive");
  }
  for (const auto& w : walls_) {
    if (w.a == w.b) {
      throw Error("wall segment end points must differ");
    }
    if (w.loss_db < 0.0) {
      throw Error("wall loss must be non-negative");
    }
  }
  if (!contains(placement_.min) || !contains(placement_.max) ||
      placement_.min.x > placement_.max.x || placement_.min.y > placement_.max.y) {
    throw Error("placement area must be a rectangle inside the floor plan");
  }
  const auto first = [&](double lo) { return std::ceil(lo / grid_step - kEps); };
  const auto last = [&](double hi) { return std::floor(hi / grid_step + kEps); };
  const double m0 = first(placement_.min.x);
  const double n0 = first(placement_.min.y);
  const double m1 = last(placement_.max.x);
  const double n1 = last(placement_.max.y);
  if (m1 < m0 || n1 < n0) {
    throw Error("placement area holds no grid point");
  }
  columns_ = static_cast<std::size_t>(m1 - m0) + 1;
  rows_ = static_cast<std::size_t>(n1 - n0) + 1;
  candidates_.reserve(columns_ * rows_);
  for (std::size_t n = 0; n < rows_; ++n) {
    for (std::size_t m = 0; m < columns_; ++m) {
      candidates_.push_back({(m0 + static_cast<double>(m)) * grid_step,
                             (n0 + static_cast<double>(n)) * grid_step});
    }
  }
}

bool FloorPlan::contains(Point p) const {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= -kEps && p.y >= -kEps &&
         p.x <= width_ + kEps && p.y <= height_ + kEps;
}

std::size_t FloorPlan::nearest_candidate(Point p) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const double d = distance(p, candidates_[i]);
    if (d < best_d - kEps) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::optional<std::size_t> FloorPlan::candidate_index(Point p) const {
  const std::size_t i = nearest_candidate(p);
  if (distance(candidates_[i], p) < 1e-6) {
    return i;
  }
  return std::nullopt;
}

WallCrossing wall_count(const FloorPlan& plan, Point a, Point b) {
  WallCrossing out;
  if (a == b) {
    return out;
  }
  for (const auto& wall : plan.walls()) {
    if (crosses(a, b, wall)) {
      ++out.count;
      out.total_loss_db += wall.loss_db;
    }
  }
  return out;
}

}  // namespace selfdeploy
