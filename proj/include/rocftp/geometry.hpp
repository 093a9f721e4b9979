#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rocftp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Axis-aligned rectangle [0, width) x [0, height).
struct Region {
  double width = 1.0;
  double height = 1.0;

  Region() = default;
  Region(double w, double h) : width(w), height(h) {
    if (!(w > 0.0) || !(h > 0.0)) {
      throw std::invalid_argument("region dimensions must be positive");
    }
  }

  double area() const { return width * height; }

  bool contains(const Point& p) const {
    return p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height;
  }
};

/// A finite planar point pattern inside a region. Points are kept in
/// insertion order; that order is part of the reproducibility contract.
class PointConfiguration {
 public:
  PointConfiguration() = default;
  explicit PointConfiguration(Region region) : region_(region) {}
  PointConfiguration(Region region, std::vector<Point> points)
      : region_(region), points_(std::move(points)) {
    for (const auto& p : points_) check(p);
    auto sorted = points_;
    std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::domain_error("duplicate point in configuration");
    }
  }

  const Region& region() const { return region_; }
  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  // Linear duplicate scan; bulk construction goes through the vector
  // constructor instead.
  void add(const Point& p) {
    check(p);
    if (std::find(points_.begin(), points_.end(), p) != points_.end()) {
      throw std::domain_error("duplicate point in configuration");
    }
    points_.push_back(p);
  }

  void remove_at(std::size_t i) {
    points_[i] = points_.back();
    points_.pop_back();
  }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const PointConfiguration& a,
                         const PointConfiguration& b) {
    return a.points_ == b.points_;
  }

 private:
  void check(const Point& p) const {
    if (!region_.contains(p)) {
      throw std::domain_error("point outside configuration region");
    }
  }

  Region region_;
  std::vector<Point> points_;
};

}  // namespace rocftp
