#pragma once

// Chain-agnostic contracts. A grand coupling supplies a random map drawn
// from a word source, applicable both to a single state and to a StateSet,
// where the StateSet is a chain-specific superset of the image of the maps
// composed so far.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <utility>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/stream.hpp"

namespace rocftp {

template <class C>
concept GrandCoupling =
    requires(const C& c, ReadOnceStream& stream, typename C::StateSet& set,
             const typename C::StateSet& cset, typename C::State& x,
             const typename C::Map& m) {
      typename C::State;
      typename C::StateSet;
      typename C::Map;
      { c.full_state_set() } -> std::same_as<typename C::StateSet>;
      { c.draw_map(stream) } -> std::same_as<typename C::Map>;
      c.apply(m, set);
      c.apply(m, x);
      { c.is_singleton(cset) } -> std::convertible_to<bool>;
      { c.extract_element(cset) } -> std::same_as<typename C::State>;
      { c.canonical_state() } -> std::same_as<typename C::State>;
    };

/// A coupling whose first map in a composite is drawn from its own
/// distribution (e.g. an independence sampler) with the same stationary law.
template <class C>
concept FirstMapCoupling =
    GrandCoupling<C> &&
    requires(const C& c, ReadOnceStream& stream, typename C::State& x,
             const typename C::FirstMap& m) {
      typename C::FirstMap;
      { c.draw_first_map(stream) } -> std::same_as<typename C::FirstMap>;
      { c.first_image(m) } -> std::same_as<typename C::StateSet>;
      c.apply_first(m, x);
    };

/// Small chains whose states can be enumerated. Oracles and the
/// explicit-composition reference engine need this.
template <class C>
concept FiniteChain =
    GrandCoupling<C> &&
    requires(const C& c, std::size_t i, const typename C::State& x,
             const typename C::StateSet& set) {
      { c.num_states() } -> std::convertible_to<std::size_t>;
      { c.state_at(i) } -> std::same_as<typename C::State>;
      { c.index_of(x) } -> std::convertible_to<std::size_t>;
      { c.contains(set, x) } -> std::convertible_to<bool>;
      {
        c.transition_row(i)
      } -> std::same_as<std::vector<std::pair<std::size_t, double>>>;
    };

template <class State>
struct CompositeMapOutcome {
  State state{};
  bool coalesced = false;
  std::uint64_t maps_applied = 0;
  std::uint64_t set_updates = 0;
  std::uint64_t state_updates = 0;
  /// Largest number of StateSets alive at once during the procedure.
  std::uint32_t live_sets = 0;
};

/// Draws one map and applies it to `set` and, when given, to `state`. The
/// map is drawn before either is touched, so supplying a state never changes
/// the set result or the number of words consumed.
template <GrandCoupling C, WordSource S>
void apply_random_map(const C& coupling, S& stream,
                      typename C::StateSet& set,
                      typename C::State* state = nullptr) {
  const auto map = coupling.draw_map(stream);
  coupling.apply(map, set);
  if (state != nullptr) coupling.apply(map, *state);
}

/// Image of the first map of a composite. Couplings without a dedicated
/// first map use an ordinary map applied to the full state set.
template <GrandCoupling C, WordSource S>
typename C::StateSet image_of_first_random_map(
    const C& coupling, S& stream, typename C::State* state = nullptr) {
  if constexpr (FirstMapCoupling<C>) {
    const auto map = coupling.draw_first_map(stream);
    if (state != nullptr) coupling.apply_first(map, *state);
    return coupling.first_image(map);
  } else {
    auto set = coupling.full_state_set();
    apply_random_map(coupling, stream, set, state);
    return set;
  }
}

struct CitpOptions {
  std::uint64_t max_maps = 1'000'000;
  std::size_t max_states = 10'000;
};

template <class State>
struct CitpOutcome {
  State state{};
  std::uint64_t maps_applied = 0;
};

namespace detail {

enum class ComposeOrder { kNewOnRight, kNewOnLeft };

template <FiniteChain C, WordSource S>
CitpOutcome<typename C::State> compose_explicit(const C& coupling, S& stream,
                                                const CitpOptions& opts,
                                                ComposeOrder order) {
  const std::size_t n = coupling.num_states();
  if (n > opts.max_states) {
    throw std::length_error("chain too large for explicit composition");
  }
  std::vector<typename C::State> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) states.push_back(coupling.state_at(i));

  // composed[x] = index of F(x)
  std::vector<std::size_t> composed(n);
  for (std::size_t i = 0; i < n; ++i) composed[i] = i;
  std::vector<std::size_t> step(n);
  std::vector<std::size_t> next(n);

  auto singleton = [&] {
    return std::all_of(composed.begin(), composed.end(),
                       [&](std::size_t v) { return v == composed[0]; });
  };

  std::uint64_t maps = 0;
  while (!singleton()) {
    if (maps == opts.max_maps) throw CapExceeded("citp max_maps", opts.max_maps);
    const auto map = coupling.draw_map(stream);
    ++maps;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = states[i];
      coupling.apply(map, x);
      step[i] = coupling.index_of(x);
    }
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = order == ComposeOrder::kNewOnRight ? composed[step[i]]
                                                   : step[composed[i]];
    }
    composed.swap(next);
  }
  return {states[composed[0]], maps};
}

}  // namespace detail

/// Reference engine: F := F o RandomMap() until the image of F is a single
/// state. Maps are composed going back into the past, so the stream is read
/// once.
template <FiniteChain C, WordSource S>
CitpOutcome<typename C::State> compose_into_the_past(
    const C& coupling, S& stream, const CitpOptions& opts = {}) {
  return detail::compose_explicit(coupling, stream, opts,
                                  detail::ComposeOrder::kNewOnRight);
}

/// Negative control: F := RandomMap() o F, i.e. forward simulation stopped
/// at coalescence. Biased; kept for demonstrating test power.
template <FiniteChain C, WordSource S>
CitpOutcome<typename C::State> compose_into_the_past_biased(
    const C& coupling, S& stream, const CitpOptions& opts = {}) {
  return detail::compose_explicit(coupling, stream, opts,
                                  detail::ComposeOrder::kNewOnLeft);
}

}  // namespace rocftp
