#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rocftp/core.hpp"

namespace rocftp::chains {

/// Lazy walk on {0, ..., n-1}: hold with probability 1/2, otherwise step
/// -1 or +1 with probability 1/4 each, clamped at the ends. The update is
/// monotone, so an interval [lo, hi] bounds the image of any composition.
class LazyWalk {
 public:
  using State = int;

  struct Map {
    int direction;  // -1 or +1
    bool lazy;
  };

  struct StateSet {
    int lo;
    int hi;
    friend bool operator==(const StateSet&, const StateSet&) = default;
  };

  explicit LazyWalk(int num_states) : n_(num_states) {
    if (num_states < 1) throw std::invalid_argument("lazy walk needs >= 1 state");
  }

  int size() const { return n_; }

  StateSet full_state_set() const { return {0, n_ - 1}; }
  State canonical_state() const { return 0; }

  template <WordSource S>
  Map draw_map(S& s) const {
    const auto w = uniform_int(s, 4);
    return {(w & 1U) ? +1 : -1, w < 2};
  }

  void apply(const Map& m, State& x) const {
    if (m.lazy) return;
    x += m.direction;
    if (x < 0) x = 0;
    if (x > n_ - 1) x = n_ - 1;
  }
  void apply(const Map& m, StateSet& set) const {
    apply(m, set.lo);
    apply(m, set.hi);
  }

  bool is_singleton(const StateSet& set) const { return set.lo == set.hi; }
  State extract_element(const StateSet& set) const { return set.lo; }

  // Finite-chain surface.
  std::size_t num_states() const { return static_cast<std::size_t>(n_); }
  State state_at(std::size_t i) const { return static_cast<int>(i); }
  std::size_t index_of(const State& x) const { return static_cast<std::size_t>(x); }
  bool contains(const StateSet& set, const State& x) const {
    return set.lo <= x && x <= set.hi;
  }
  std::vector<std::pair<std::size_t, double>> transition_row(std::size_t i) const {
    std::vector<std::pair<std::size_t, double>> row;
    for (const Map m : {Map{-1, true}, Map{+1, true}, Map{-1, false}, Map{+1, false}}) {
      State x = state_at(i);
      apply(m, x);
      row.emplace_back(index_of(x), 0.25);
    }
    return row;
  }

 private:
  int n_;
};

}  // namespace rocftp::chains
