#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rocftp/core.hpp"

namespace rocftp::chains {

/// Random adjacent sort on permutations of n letters: pick a position i and
/// a coin, then put the items at i and i+1 in sorted or reverse-sorted
/// order. Preserves the uniform distribution.
///
/// The StateSet is an explicit set of permutation ranks, so this chain is
/// for test-scale n only.
class SortChain {
 public:
  using State = std::vector<int>;

  struct Map {
    int position;  // 0-based, pair (position, position + 1)
    bool sorted;
  };

  /// Sorted, duplicate-free ranks.
  using StateSet = std::vector<std::uint32_t>;

  static constexpr int kMaxLetters = 7;

  explicit SortChain(int n) : n_(n) {
    if (n < 2 || n > kMaxLetters) {
      throw std::invalid_argument("sort chain supports 2..7 letters");
    }
    factorial_ = 1;
    for (int k = 2; k <= n; ++k) factorial_ *= static_cast<std::uint32_t>(k);

    auto table = std::make_shared<std::vector<std::uint32_t>>(
        static_cast<std::size_t>(num_maps()) * factorial_);
    for (std::uint32_t r = 0; r < factorial_; ++r) {
      const State p = unrank(r);
      for (int m = 0; m < num_maps(); ++m) {
        State q = p;
        apply(Map{m / 2, (m % 2) == 0}, q);
        (*table)[static_cast<std::size_t>(m) * factorial_ + r] = rank(q);
      }
    }
    table_ = std::move(table);
  }

  int letters() const { return n_; }

  StateSet full_state_set() const {
    StateSet all(factorial_);
    std::iota(all.begin(), all.end(), 0U);
    return all;
  }
  State canonical_state() const { return unrank(0); }

  template <WordSource S>
  Map draw_map(S& s) const {
    const auto w = uniform_int(s, static_cast<std::uint64_t>(num_maps()));
    return {static_cast<int>(w / 2), (w % 2) == 0};
  }

  void apply(const Map& m, State& x) const {
    auto& a = x[static_cast<std::size_t>(m.position)];
    auto& b = x[static_cast<std::size_t>(m.position) + 1];
    if (m.sorted ? (a > b) : (a < b)) std::swap(a, b);
  }

  void apply(const Map& m, StateSet& set) const {
    const auto offset =
        static_cast<std::size_t>(2 * m.position + (m.sorted ? 0 : 1)) * factorial_;
    for (auto& r : set) r = (*table_)[offset + r];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }

  bool is_singleton(const StateSet& set) const { return set.size() == 1; }
  State extract_element(const StateSet& set) const { return unrank(set.front()); }

  std::size_t num_states() const { return factorial_; }
  State state_at(std::size_t i) const { return unrank(static_cast<std::uint32_t>(i)); }
  std::size_t index_of(const State& x) const { return rank(x); }
  bool contains(const StateSet& set, const State& x) const {
    return std::binary_search(set.begin(), set.end(), rank(x));
  }
  std::vector<std::pair<std::size_t, double>> transition_row(std::size_t i) const {
    std::vector<std::pair<std::size_t, double>> row;
    const double p = 1.0 / num_maps();
    for (int m = 0; m < num_maps(); ++m) {
      row.emplace_back((*table_)[static_cast<std::size_t>(m) * factorial_ + i], p);
    }
    return row;
  }

  /// Lexicographic rank (Lehmer code).
  std::uint32_t rank(const State& x) const {
    std::uint32_t r = 0;
    for (int i = 0; i < n_; ++i) {
      std::uint32_t smaller = 0;
      for (int j = i + 1; j < n_; ++j) smaller += x[j] < x[i] ? 1U : 0U;
      r = r * static_cast<std::uint32_t>(n_ - i) + smaller;
    }
    return r;
  }

  State unrank(std::uint32_t r) const {
    std::vector<int> digits(static_cast<std::size_t>(n_));
    for (int i = n_ - 1; i >= 0; --i) {
      const auto base = static_cast<std::uint32_t>(n_ - i);
      digits[static_cast<std::size_t>(i)] = static_cast<int>(r % base);
      r /= base;
    }
    std::vector<int> pool(static_cast<std::size_t>(n_));
    std::iota(pool.begin(), pool.end(), 0);
    State out;
    out.reserve(pool.size());
    for (int d : digits) {
      out.push_back(pool[static_cast<std::size_t>(d)]);
      pool.erase(pool.begin() + d);
    }
    return out;
  }

 private:
  int num_maps() const { return 2 * (n_ - 1); }

  int n_;
  std::uint32_t factorial_ = 1;
  std::shared_ptr<const std::vector<std::uint32_t>> table_;
};

}  // namespace rocftp::chains
