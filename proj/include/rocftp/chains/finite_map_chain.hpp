#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rocftp/core.hpp"

namespace rocftp::chains {

/// A chain given by an explicit finite list of maps on {0, ..., n-1} with
/// integer weights. The StateSet is the exact image. An optional separate
/// first-map distribution feeds the first-special composite procedure; it
/// defaults to the ordinary map distribution.
class FiniteMapChain {
 public:
  using State = int;
  using Table = std::vector<int>;  // table[x] = image of x

  struct Map {
    std::uint32_t index;
  };
  struct FirstMap {
    std::uint32_t index;
  };
  using StateSet = std::vector<int>;  // sorted, unique

  FiniteMapChain(int num_states, std::vector<Table> maps,
                 std::vector<std::uint64_t> weights)
      : n_(num_states), maps_(std::move(maps)), weights_(std::move(weights)) {
    validate(maps_, weights_);
    first_maps_ = maps_;
    first_weights_ = weights_;
  }

  /// Copy with a dedicated first-map distribution, which must preserve the
  /// same stationary law.
  FiniteMapChain with_first_maps(std::vector<Table> maps,
                                 std::vector<std::uint64_t> weights) const {
    validate(maps, weights);
    FiniteMapChain c = *this;
    c.first_maps_ = std::move(maps);
    c.first_weights_ = std::move(weights);
    return c;
  }

  /// Every map is constant; the target value is uniform.
  static FiniteMapChain constant_maps(int n) {
    std::vector<Table> maps;
    for (int v = 0; v < n; ++v) maps.emplace_back(static_cast<std::size_t>(n), v);
    return {n, std::move(maps), std::vector<std::uint64_t>(static_cast<std::size_t>(n), 1)};
  }

  /// Only the identity map; never coalesces.
  static FiniteMapChain identity_only(int n) {
    Table id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    return {n, {id}, {1}};
  }

  /// Two states, maps "both to 0" (weight 5), "swap" (3), "both to 1" (2).
  /// Stationary law (8/13, 5/13); forward coupling stopped at coalescence
  /// gives (5/7, 2/7) instead.
  static FiniteMapChain asymmetric_two_state() {
    return {2, {{0, 0}, {1, 0}, {1, 1}}, {5, 3, 2}};
  }

  StateSet full_state_set() const {
    StateSet all(static_cast<std::size_t>(n_));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  State canonical_state() const { return 0; }

  template <WordSource S>
  Map draw_map(S& s) const {
    return {pick(s, weights_)};
  }
  template <WordSource S>
  FirstMap draw_first_map(S& s) const {
    return {pick(s, first_weights_)};
  }

  void apply(const Map& m, State& x) const { x = maps_[m.index][static_cast<std::size_t>(x)]; }
  void apply(const Map& m, StateSet& set) const { image(maps_[m.index], set); }

  StateSet first_image(const FirstMap& m) const {
    auto set = full_state_set();
    image(first_maps_[m.index], set);
    return set;
  }
  void apply_first(const FirstMap& m, State& x) const {
    x = first_maps_[m.index][static_cast<std::size_t>(x)];
  }

  bool is_singleton(const StateSet& set) const { return set.size() == 1; }
  State extract_element(const StateSet& set) const { return set.front(); }

  std::size_t num_states() const { return static_cast<std::size_t>(n_); }
  State state_at(std::size_t i) const { return static_cast<int>(i); }
  std::size_t index_of(const State& x) const { return static_cast<std::size_t>(x); }
  bool contains(const StateSet& set, const State& x) const {
    return std::binary_search(set.begin(), set.end(), x);
  }
  std::vector<std::pair<std::size_t, double>> transition_row(std::size_t i) const {
    const double total = static_cast<double>(
        std::accumulate(weights_.begin(), weights_.end(), std::uint64_t{0}));
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t m = 0; m < maps_.size(); ++m) {
      row.emplace_back(static_cast<std::size_t>(maps_[m][i]),
                       static_cast<double>(weights_[m]) / total);
    }
    return row;
  }

  const std::vector<Table>& maps() const { return maps_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }

 private:
  void validate(const std::vector<Table>& maps,
                const std::vector<std::uint64_t>& weights) const {
    if (n_ < 1) throw std::invalid_argument("finite chain needs >= 1 state");
    if (maps.empty() || maps.size() != weights.size()) {
      throw std::invalid_argument("maps and weights must be non-empty and aligned");
    }
    for (const auto& t : maps) {
      if (t.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("map table has wrong length");
      }
      for (int v : t) {
        if (v < 0 || v >= n_) throw std::invalid_argument("map image out of range");
      }
    }
    if (std::accumulate(weights.begin(), weights.end(), std::uint64_t{0}) == 0) {
      throw std::invalid_argument("weights sum to zero");
    }
  }

  template <WordSource S>
  static std::uint32_t pick(S& s, const std::vector<std::uint64_t>& weights) {
    const auto total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
    auto w = uniform_int(s, total);
    std::uint32_t i = 0;
    while (w >= weights[i]) w -= weights[i++];
    return i;
  }

  static void image(const Table& t, StateSet& set) {
    for (auto& x : set) x = t[static_cast<std::size_t>(x)];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }

  int n_;
  std::vector<Table> maps_;
  std::vector<std::uint64_t> weights_;
  std::vector<Table> first_maps_;
  std::vector<std::uint64_t> first_weights_;
};

}  // namespace rocftp::chains
