#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rocftp/geometry.hpp"

namespace rocftp::strauss {

/// Strauss process on a rectangle with free boundary: density relative to a
/// Poisson(lambda) process is gamma^(number of pairs closer than radius).
/// gamma = 0 (impenetrable spheres) is sampled through a softened density
/// that uses epsilon_soft in place of 0, followed by rejection.
struct StraussModel {
  double lambda = 1.0;
  double gamma = 0.5;
  double radius = 1.0;
  Region region{1.0, 1.0};
  /// Local stability constant: adding a point multiplies the density by at
  /// most K. Any K >= 1 is valid for gamma <= 1.
  double K = 1.0;
  double epsilon_soft = 1e-20;
  /// The independence-sampler proposal is Poisson(proposal_factor * K * lambda).
  double proposal_factor = 2.0;

  void validate() const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0, 1]");
    if (!(radius >= 0.0)) throw std::invalid_argument("radius must be >= 0");
    if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
    if (!(epsilon_soft >= 0.0 && epsilon_soft < 1.0)) {
      throw std::invalid_argument("epsilon_soft must be in [0, 1)");
    }
    if (!(proposal_factor > 1.0)) throw std::invalid_argument("proposal_factor must be > 1");
  }

  /// Per-location intensity. Only constant intensity is implemented.
  double intensity_at(const Point&) const { return lambda; }

  bool hard_core() const { return gamma == 0.0; }

  /// Interaction factor actually used by the sampler.
  double effective_gamma() const { return gamma > 0.0 ? gamma : epsilon_soft; }

  /// log f for a configuration with `pairs` close pairs, under the softened
  /// density. -inf when the factor is 0.
  double log_density(std::uint64_t pairs) const {
    if (pairs == 0) return 0.0;
    const double g = effective_gamma();
    if (g == 0.0) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(pairs) * std::log(g);
  }

  /// f(sigma + x) / (K f(sigma)) when x has `neighbours` close points in sigma.
  double birth_ratio(std::uint64_t neighbours) const {
    if (neighbours == 0) return 1.0 / K;
    return std::pow(effective_gamma(), static_cast<double>(neighbours)) / K;
  }

  double proposal_intensity() const { return proposal_factor * K * lambda; }
  double birth_proposal_rate() const { return K * lambda * region.area(); }
};

/// Points with stable ids, bucketed on a grid for radius queries. Removal
/// is swap-with-last, so slot order is deterministic given the operation
/// sequence.
class IndexedPoints {
 public:
  IndexedPoints() : IndexedPoints(Region{1.0, 1.0}, 1.0) {}

  IndexedPoints(const Region& region, double radius) : radius_(radius) {
    const double min_cell = std::max(region.width, region.height) / 256.0;
    cell_ = std::max(radius, min_cell);
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(region.width / cell_)));
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(region.height / cell_)));
    cells_.assign(nx_ * ny_, {});
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  std::uint64_t id_at(std::size_t slot) const { return ids_[slot]; }
  const Point& point_at(std::size_t slot) const { return points_[slot]; }
  const std::vector<Point>& points() const { return points_; }
  bool contains_id(std::uint64_t id) const { return slot_of_.count(id) != 0; }

  void insert(std::uint64_t id, const Point& p) {
    slot_of_[id] = ids_.size();
    ids_.push_back(id);
    points_.push_back(p);
    cells_[cell_index(p)].push_back({id, p});
  }

  void erase_slot(std::size_t slot) {
    const std::uint64_t id = ids_[slot];
    auto& bucket = cells_[cell_index(points_[slot])];
    for (auto& e : bucket) {
      if (e.id == id) {
        e = bucket.back();
        bucket.pop_back();
        break;
      }
    }
    slot_of_.erase(id);
    if (slot + 1 != ids_.size()) {
      ids_[slot] = ids_.back();
      points_[slot] = points_.back();
      slot_of_[ids_[slot]] = slot;
    }
    ids_.pop_back();
    points_.pop_back();
  }

  bool erase_id(std::uint64_t id) {
    const auto it = slot_of_.find(id);
    if (it == slot_of_.end()) return false;
    erase_slot(it->second);
    return true;
  }

  /// Number of stored points strictly closer than the radius to p.
  std::uint64_t count_near(const Point& p) const {
    if (radius_ <= 0.0 || ids_.empty()) return 0;
    const double r2 = radius_ * radius_;
    const auto [cx, cy] = cell_coords(p);
    std::uint64_t n = 0;
    for (std::size_t x = cx == 0 ? 0 : cx - 1; x <= std::min(nx_ - 1, cx + 1); ++x) {
      for (std::size_t y = cy == 0 ? 0 : cy - 1; y <= std::min(ny_ - 1, cy + 1); ++y) {
        for (const auto& e : cells_[x * ny_ + y]) {
          if (squared_distance(e.point, p) < r2) ++n;
        }
      }
    }
    return n;
  }

 private:
  std::pair<std::size_t, std::size_t> cell_coords(const Point& p) const {
    const auto cx = std::min(nx_ - 1, static_cast<std::size_t>(std::max(0.0, p.x / cell_)));
    const auto cy = std::min(ny_ - 1, static_cast<std::size_t>(std::max(0.0, p.y / cell_)));
    return {cx, cy};
  }
  std::size_t cell_index(const Point& p) const {
    const auto [cx, cy] = cell_coords(p);
    return cx * ny_ + cy;
  }

  struct Entry {
    std::uint64_t id;
    Point point;
  };

  double radius_;
  double cell_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::vector<Entry>> cells_;
  std::vector<std::uint64_t> ids_;
  std::vector<Point> points_;
  std::unordered_map<std::uint64_t, std::size_t> slot_of_;
};

/// Number of unordered pairs closer than the model radius.
inline std::uint64_t close_pairs(const StraussModel& model, const std::vector<Point>& pts) {
  IndexedPoints index(model.region, model.radius);
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pairs += index.count_near(pts[i]);
    index.insert(i, pts[i]);
  }
  return pairs;
}

inline std::uint64_t close_pairs(const StraussModel& model, const PointConfiguration& c) {
  return close_pairs(model, c.points());
}

/// B(sigma) = #sigma + #sigma log_c K + log_c(1 / f(sigma)) with c the proposal
/// factor (2 by default): every current state with at least B(sigma) points
/// accepts the proposal sigma.
inline double stability_bound(const StraussModel& model, std::uint64_t num_points,
                              std::uint64_t pairs) {
  if (pairs > 0 && model.effective_gamma() == 0.0) {
    throw std::domain_error("stability bound undefined: density is zero (epsilon_soft = 0)");
  }
  const auto log_c = [&](double v) {
    return model.proposal_factor == 2.0 ? std::log2(v)
                                        : std::log(v) / std::log(model.proposal_factor);
  };
  const double n = static_cast<double>(num_points);
  const double penalty = pairs == 0 ? 0.0 : -static_cast<double>(pairs) * log_c(model.effective_gamma());
  return n + n * log_c(model.K) + penalty;
}

inline double stability_bound(const StraussModel& model, const PointConfiguration& sigma) {
  return stability_bound(model, sigma.size(), close_pairs(model, sigma));
}

}  // namespace rocftp::strauss
