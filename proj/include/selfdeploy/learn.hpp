#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "selfdeploy/geometry.hpp"

namespace selfdeploy {

enum class Provenance { distance_based, region_propagated };

enum class Region { outside, near, beyond };

struct RegionAssignment {
  Region region = Region::outside;
  double decay = 1.0;  // divisor applied in the beyond region, >= 1
};

// Classifies a cell against one measurement taken at k. The near region is
// the band between the anchor and k, the beyond region continues past k away
// from the anchor; both are limited to a corridor of half_width_cells grid
// steps around the anchor -> k axis. The beyond divisor is the difference in
// anchor distance, in grid steps, floored at 1.
RegionAssignment classify_region(Point cell, Point anchor, Point k, double grid_step,
                                 double half_width_cells);

struct RegionMeasurement {
  std::size_t cell = 0;
  double value = 0.0;  // Mbps
  Point anchor;
};

// Per-candidate backhaul and aggregate-fronthaul estimates. Starts from
// distance-based priors and is rebuilt from the retained measurements on
// every update: each cell takes the value of the nearest measurement whose
// regions cover it (the perpendicular bisector between measured points is
// the separating boundary), and measured cells carry their latest value.
class LearnedThroughputMap {
 public:
  LearnedThroughputMap(std::vector<Point> candidates, std::vector<double> prior_backhaul,
                       std::vector<double> prior_fronthaul, double grid_step,
                       double corridor_half_width_cells = 2.0);

  const std::vector<Point>& candidates() const { return candidates_; }
  const std::vector<double>& backhaul() const { return backhaul_.values; }
  const std::vector<double>& fronthaul() const { return fronthaul_.values; }
  const std::vector<Provenance>& backhaul_provenance() const { return backhaul_.provenance; }
  const std::vector<Provenance>& fronthaul_provenance() const { return fronthaul_.provenance; }
  const std::vector<RegionMeasurement>& backhaul_measurements() const {
    return backhaul_.measurements;
  }
  const std::vector<RegionMeasurement>& fronthaul_measurements() const {
    return fronthaul_.measurements;
  }
  double grid_step() const { return grid_step_; }
  double corridor_half_width_cells() const { return half_width_; }

  // Throws unless k is a candidate location.
  std::size_t cell_of(Point k) const;

  friend bool operator==(const LearnedThroughputMap& a, const LearnedThroughputMap& b) {
    return a.backhaul_.values == b.backhaul_.values &&
           a.fronthaul_.values == b.fronthaul_.values &&
           a.backhaul_.provenance == b.backhaul_.provenance &&
           a.fronthaul_.provenance == b.fronthaul_.provenance;
  }

 private:
  struct Layer {
    std::vector<double> prior;
    std::vector<double> values;
    std::vector<Provenance> provenance;
    std::vector<RegionMeasurement> measurements;
  };

  void add(Layer& layer, RegionMeasurement m) const;
  void rebuild(Layer& layer) const;

  friend LearnedThroughputMap update_backhaul(LearnedThroughputMap map, Point k,
                                              double measured_backhaul, Point ap);
  friend LearnedThroughputMap update_fronthaul(LearnedThroughputMap map, Point k,
                                               double measured_fronthaul,
                                               std::span<const Point> user_locations,
                                               double measured_backhaul, double total_demand);

  std::vector<Point> candidates_;
  double grid_step_;
  double half_width_;
  Layer backhaul_;
  Layer fronthaul_;
};

// Region rule anchored at the mAP.
LearnedThroughputMap update_backhaul(LearnedThroughputMap map, Point k, double measured_backhaul,
                                     Point ap);

// True when the fronthaul reading reflects the extender-user channel rather
// than a starved backhaul.
bool fronthaul_measurement_valid(double measured_backhaul, double measured_fronthaul,
                                 double total_demand);

// Region rule anchored at the user centroid; readings that fail
// fronthaul_measurement_valid leave the map unchanged.
LearnedThroughputMap update_fronthaul(LearnedThroughputMap map, Point k, double measured_fronthaul,
                                      std::span<const Point> user_locations,
                                      double measured_backhaul, double total_demand);

inline constexpr double kOmegaMin = 0.1;
inline constexpr double kOmegaMax = 1.0;

struct ExplorationState {
  double omega = 0.5;
  std::optional<double> previous_fitness;
  std::optional<double> current_fitness;

  // Shifts current into previous and stores f as current.
  void record(double f);
};

// 2 - exp(|dF|), in [2 - e, 1] for dF in [-1, 1].
double omega_step(double delta_fitness);
// omega_step mapped affinely onto [0, 1].
double normalized_omega_step(double delta_fitness);
// Half-way move of omega towards the normalized step, clamped to
// [kOmegaMin, kOmegaMax]. Returns the current omega until two fitness
// values are recorded.
double update_omega(const ExplorationState& state);

}  // namespace selfdeploy
