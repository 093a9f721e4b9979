#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rocftp/core.hpp"

namespace rocftp::chains {

/// Ferromagnetic Ising model on an L x L grid with free boundary, updated by
/// single-site heat bath. For beta >= 0 the update is monotone in the
/// componentwise order, so the image of a composition is bounded by the
/// sandwich (lower, upper).
class IsingHeatBath {
 public:
  using State = std::vector<std::int8_t>;  // +1 / -1, row-major

  struct Map {
    std::uint32_t site;
    double u;
  };

  struct StateSet {
    State lower;
    State upper;
  };

  IsingHeatBath(int side, double beta) : side_(side), beta_(beta) {
    if (side < 1) throw std::invalid_argument("ising side must be >= 1");
    if (!(beta >= 0.0)) throw std::invalid_argument("ising beta must be >= 0");
    for (int h = -4; h <= 4; ++h) {
      p_plus_[static_cast<std::size_t>(h + 4)] = 1.0 / (1.0 + std::exp(-2.0 * beta * h));
    }
  }

  int side() const { return side_; }
  double beta() const { return beta_; }
  std::size_t sites() const { return static_cast<std::size_t>(side_) * side_; }

  StateSet full_state_set() const {
    return {State(sites(), -1), State(sites(), +1)};
  }
  State canonical_state() const { return State(sites(), -1); }

  template <WordSource S>
  Map draw_map(S& s) const {
    const auto site = static_cast<std::uint32_t>(uniform_int(s, sites()));
    return {site, uniform01(s)};
  }

  void apply(const Map& m, State& x) const {
    const double p = p_plus_[static_cast<std::size_t>(local_field(x, m.site) + 4)];
    x[m.site] = m.u < p ? std::int8_t{+1} : std::int8_t{-1};
  }
  void apply(const Map& m, StateSet& set) const {
    apply(m, set.lower);
    apply(m, set.upper);
  }

  bool is_singleton(const StateSet& set) const { return set.lower == set.upper; }
  State extract_element(const StateSet& set) const { return set.lower; }

  /// Sum over nearest-neighbour pairs of s_i s_j.
  int pair_sum(const State& x) const {
    int total = 0;
    for (int r = 0; r < side_; ++r) {
      for (int c = 0; c < side_; ++c) {
        const auto i = static_cast<std::size_t>(r * side_ + c);
        if (c + 1 < side_) total += x[i] * x[i + 1];
        if (r + 1 < side_) total += x[i] * x[i + static_cast<std::size_t>(side_)];
      }
    }
    return total;
  }

  // Finite-chain surface; only sensible for tiny grids.
  std::size_t num_states() const {
    if (sites() >= 20) throw std::length_error("ising grid too large to enumerate");
    return std::size_t{1} << sites();
  }
  State state_at(std::size_t i) const {
    State x(sites());
    for (std::size_t b = 0; b < sites(); ++b) x[b] = ((i >> b) & 1U) ? 1 : -1;
    return x;
  }
  std::size_t index_of(const State& x) const {
    std::size_t i = 0;
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (x[b] > 0) i |= std::size_t{1} << b;
    }
    return i;
  }
  bool contains(const StateSet& set, const State& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < set.lower[i] || x[i] > set.upper[i]) return false;
    }
    return true;
  }
  std::vector<std::pair<std::size_t, double>> transition_row(std::size_t i) const {
    std::vector<std::pair<std::size_t, double>> row;
    const State x = state_at(i);
    const double pick = 1.0 / static_cast<double>(sites());
    for (std::uint32_t site = 0; site < sites(); ++site) {
      const double p = p_plus_[static_cast<std::size_t>(local_field(x, site) + 4)];
      State up = x, down = x;
      up[site] = 1;
      down[site] = -1;
      row.emplace_back(index_of(up), pick * p);
      row.emplace_back(index_of(down), pick * (1.0 - p));
    }
    return row;
  }

 private:
  int local_field(const State& x, std::uint32_t site) const {
    const int r = static_cast<int>(site) / side_;
    const int c = static_cast<int>(site) % side_;
    int h = 0;
    if (r > 0) h += x[site - static_cast<std::uint32_t>(side_)];
    if (r + 1 < side_) h += x[site + static_cast<std::uint32_t>(side_)];
    if (c > 0) h += x[site - 1];
    if (c + 1 < side_) h += x[site + 1];
    return h;
  }

  int side_;
  double beta_;
  std::array<double, 9> p_plus_{};
};

}  // namespace rocftp::chains
