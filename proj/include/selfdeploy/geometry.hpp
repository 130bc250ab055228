#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace selfdeploy {

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);
Point midpoint(Point a, Point b);

struct WallSegment {
  Point a;
  Point b;
  double loss_db = 0.0;
};

struct WallCrossing {
  int count = 0;
  double total_loss_db = 0.0;
};

struct Rect {
  Point min;
  Point max;
};

// Rectangular layout [0, width] x [0, height] with attenuating walls and a
// square grid of candidate extender locations. Candidates cover the whole
// plan unless a placement area (e.g. the managed apartment of a multi-unit
// floor) narrows them; the grid stays anchored at the origin either way.
class FloorPlan {
 public:
  FloorPlan(double width, double height, std::vector<WallSegment> walls,
            double grid_step, std::optional<Rect> placement_area = std::nullopt);

  double width() const { return width_; }
  double height() const { return height_; }
  double grid_step() const { return grid_step_; }
  const std::vector<WallSegment>& walls() const { return walls_; }
  Rect placement_area() const { return placement_; }

  bool contains(Point p) const;

  // Grid points (m * step, n * step) inside the placement area, row-major:
  // the x index varies fastest, so cell index = row * columns + column.
  const std::vector<Point>& candidates() const { return candidates_; }
  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return rows_; }

  // Candidate nearest to p, ties by lowest index.
  std::size_t nearest_candidate(Point p) const;
  std::optional<std::size_t> candidate_index(Point p) const;

 private:
  double width_;
  double height_;
  std::vector<WallSegment> walls_;
  double grid_step_;
  Rect placement_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
  std::vector<Point> candidates_;
};

// Walls crossed by the open segment (a, b). A crossing at a wall end point
// counts; a wall collinear with the segment does not.
WallCrossing wall_count(const FloorPlan& plan, Point a, Point b);

}  // namespace selfdeploy
