#include "selfdeploy/learn.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "selfdeploy/error.hpp"

namespace selfdeploy {

namespace {

constexpr double kEps = 1e-9;

Point centroid(std::span<const Point> pts) {
  Point c;
  for (const auto& p : pts) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(pts.size());
  c.y /= static_cast<double>(pts.size());
  return c;
}

}  // namespace

RegionAssignment classify_region(Point cell, Point anchor, Point k, double grid_step,
                                 double half_width_cells) {
  RegionAssignment out;
  const double axis_len = distance(anchor, k);
  if (axis_len < kEps) {
    // no axis: only the measured cell itself is covered
    if (distance(cell, k) < kEps) {
      out.region = Region::near;
    }
    return out;
  }
  const double ux = (k.x - anchor.x) / axis_len;
  const double uy = (k.y - anchor.y) / axis_len;
  const double dx = cell.x - anchor.x;
  const double dy = cell.y - anchor.y;
  const double along = dx * ux + dy * uy;
  const double across = std::abs(dx * uy - dy * ux);
  if (across > half_width_cells * grid_step + kEps || along < -kEps) {
    return out;
  }
  if (along <= axis_len + kEps) {
    out.region = Region::near;
    return out;
  }
  out.region = Region::beyond;
  out.decay = std::max(1.0, std::abs(distance(anchor, cell) - axis_len) / grid_step);
  return out;
}

LearnedThroughputMap::LearnedThroughputMap(std::vector<Point> candidates,
                                           std::vector<double> prior_backhaul,
                                           std::vector<double> prior_fronthaul, double grid_step,
                                           double corridor_half_width_cells)
    : candidates_(std::move(candidates)),
      grid_step_(grid_step),
      half_width_(corridor_half_width_cells) {
  if (prior_backhaul.size() != candidates_.size() ||
      prior_fronthaul.size() != candidates_.size()) {
    throw Error("prior estimates must cover every candidate");
  }
  if (!(grid_step_ > 0.0) || !(half_width_ >= 0.0)) {
    throw Error("grid step must be positive and corridor width non-negative");
  }
  for (auto* layer : {&backhaul_, &fronthaul_}) {
    layer->provenance.assign(candidates_.size(), Provenance::distance_based);
  }
  backhaul_.prior = std::move(prior_backhaul);
  fronthaul_.prior = std::move(prior_fronthaul);
  backhaul_.values = backhaul_.prior;
  fronthaul_.values = fronthaul_.prior;
}

std::size_t LearnedThroughputMap::cell_of(Point k) const {
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    if (distance(candidates_[i], k) < 1e-6) {
      return i;
    }
  }
  throw Error("measurement location is not a candidate grid point");
}

void LearnedThroughputMap::add(Layer& layer, RegionMeasurement m) const {
  auto it = std::find_if(layer.measurements.begin(), layer.measurements.end(),
                         [&](const RegionMeasurement& x) { return x.cell == m.cell; });
  if (it != layer.measurements.end()) {
    layer.measurements.erase(it);
  }
  layer.measurements.push_back(m);
  rebuild(layer);
}

void LearnedThroughputMap::rebuild(Layer& layer) const {
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const Point cell = candidates_[i];
    const RegionMeasurement* owner = nullptr;
    RegionAssignment owner_region;
    double owner_dist = std::numeric_limits<double>::infinity();
    for (const auto& m : layer.measurements) {
      const Point k = candidates_[m.cell];
      const auto region = classify_region(cell, m.anchor, k, grid_step_, half_width_);
      if (region.region == Region::outside) {
        continue;
      }
      // later measurements win ties
      const double d = distance(cell, k);
      if (d <= owner_dist + kEps) {
        owner = &m;
        owner_region = region;
        owner_dist = d;
      }
    }
    if (owner == nullptr) {
      layer.values[i] = layer.prior[i];
      layer.provenance[i] = Provenance::distance_based;
    } else if (owner_region.region == Region::near) {
      layer.values[i] = owner->value;
      layer.provenance[i] = Provenance::region_propagated;
    } else {
      layer.values[i] = owner->value / owner_region.decay;
      layer.provenance[i] = Provenance::region_propagated;
    }
  }
  // measured cells always carry their own latest reading
  for (const auto& m : layer.measurements) {
    layer.values[m.cell] = m.value;
    layer.provenance[m.cell] = Provenance::region_propagated;
  }
}

LearnedThroughputMap update_backhaul(LearnedThroughputMap map, Point k, double measured_backhaul,
                                     Point ap) {
  const std::size_t cell = map.cell_of(k);
  map.add(map.backhaul_, {cell, std::max(0.0, measured_backhaul), ap});
  return map;
}

bool fronthaul_measurement_valid(double measured_backhaul, double measured_fronthaul,
                                 double total_demand) {
  return measured_backhaul >= total_demand || measured_backhaul >= measured_fronthaul;
}

LearnedThroughputMap update_fronthaul(LearnedThroughputMap map, Point k, double measured_fronthaul,
                                      std::span<const Point> user_locations,
                                      double measured_backhaul, double total_demand) {
  const std::size_t cell = map.cell_of(k);
  if (user_locations.empty()) {
    return map;
  }
  if (!fronthaul_measurement_valid(measured_backhaul, measured_fronthaul, total_demand)) {
    spdlog::debug("fronthaul reading at ({}, {}) discarded: backhaul {:.1f} Mbps below demand "
                  "{:.1f} and fronthaul {:.1f}",
                  k.x, k.y, measured_backhaul, total_demand, measured_fronthaul);
    return map;
  }
  map.add(map.fronthaul_, {cell, std::max(0.0, measured_fronthaul), centroid(user_locations)});
  return map;
}

void ExplorationState::record(double f) {
  previous_fitness = current_fitness;
  current_fitness = f;
}

double omega_step(double delta_fitness) { return 2.0 - std::exp(std::abs(delta_fitness)); }

double normalized_omega_step(double delta_fitness) {
  constexpr double lo = 2.0 - std::numbers::e;
  constexpr double hi = 1.0;
  const double step = omega_step(std::clamp(delta_fitness, -1.0, 1.0));
  return std::clamp((step - lo) / (hi - lo), 0.0, 1.0);
}

double update_omega(const ExplorationState& state) {
  if (!state.previous_fitness || !state.current_fitness) {
    return std::clamp(state.omega, kOmegaMin, kOmegaMax);
  }
  const double delta = *state.current_fitness - *state.previous_fitness;
  return std::clamp(0.5 * (state.omega + normalized_omega_step(delta)), kOmegaMin, kOmegaMax);
}

}  // namespace selfdeploy
