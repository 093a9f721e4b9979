#pragma once

// Sampling engines: binary-backoff CFTP (re-reads its randomness through a
// SeededReplayStream), and read-once CFTP built on one of three composite
// map procedures. All of them count maps, set updates and state updates.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rocftp/core.hpp"

namespace rocftp {

template <class State>
struct EngineReport {
  std::vector<State> samples;
  std::vector<std::uint64_t> per_sample_maps;
  std::vector<std::uint64_t> per_sample_set_updates;
  std::vector<std::uint64_t> per_sample_state_updates;
  /// Cumulative words consumed at each sample boundary.
  std::vector<std::uint64_t> stream_positions;

  // Read-once engines only.
  std::vector<std::uint32_t> per_sample_composites;
  std::uint64_t init_maps = 0;
  std::uint64_t init_set_updates = 0;
  std::uint64_t init_state_updates = 0;
  std::uint32_t peak_live_sets = 0;

  // Binary-backoff only.
  std::vector<std::uint64_t> per_sample_start_time;  // final T per sample
  std::uint64_t reseed_events = 0;
  std::uint64_t replay_events = 0;
  std::uint64_t reread_words = 0;

  std::uint64_t total_words = 0;
};

enum class CompositeVariant { kInterleaved, kMemoryEfficient, kFirstSpecial };

inline std::string_view to_string(CompositeVariant v) {
  switch (v) {
    case CompositeVariant::kInterleaved: return "interleaved";
    case CompositeVariant::kMemoryEfficient: return "memory";
    case CompositeVariant::kFirstSpecial: return "first-special";
  }
  return "?";
}

struct EngineOptions {
  /// Per composite invocation (read-once) or per attempt (binary-backoff).
  std::uint64_t max_maps = 1'000'000;
  /// Largest starting time tried by binary-backoff.
  std::uint64_t max_start_time = std::uint64_t{1} << 30;
};

// ---------------------------------------------------------------------------
// Binary-backoff CFTP

template <GrandCoupling C>
EngineReport<typename C::State> binary_backoff_cftp(
    const C& coupling, const SeedTable& seeds, std::uint64_t num_samples,
    const EngineOptions& opts = {}) {
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");
  EngineReport<typename C::State> report;
  SeededReplayStream stream(seeds);

  for (std::uint64_t i = 0; i < num_samples; ++i) {
    std::uint64_t maps = 0;
    std::uint64_t start = 1;
    for (;;) {
      auto set = coupling.full_state_set();
      for (std::uint64_t t = start; t >= 1; --t) {
        if (std::has_single_bit(t)) {
          stream.set_random_seed(i, static_cast<std::uint32_t>(std::bit_width(t) - 1));
        }
        apply_random_map(coupling, stream, set);
        ++maps;
      }
      if (coupling.is_singleton(set)) {
        report.samples.push_back(coupling.extract_element(set));
        break;
      }
      if (start >= opts.max_start_time) {
        throw CapExceeded("binary-backoff max_start_time", opts.max_start_time);
      }
      start *= 2;
    }
    report.per_sample_maps.push_back(maps);
    report.per_sample_set_updates.push_back(maps);
    report.per_sample_state_updates.push_back(0);
    report.per_sample_start_time.push_back(start);
    report.stream_positions.push_back(stream.total_words());
  }
  report.total_words = stream.total_words();
  report.reseed_events = stream.reseed_events();
  report.replay_events = stream.replay_events();
  report.reread_words = stream.reread_words();
  report.peak_live_sets = 1;
  return report;
}

// ---------------------------------------------------------------------------
// Composite map procedures

/// Two full sets updated in lockstep with independent maps; the first
/// set's map is also applied to the state. Stops when the second set is a
/// singleton.
template <GrandCoupling C, WordSource S>
CompositeMapOutcome<typename C::State> apply_composite_map_interleaved(
    const C& coupling, S& stream, typename C::State state,
    const EngineOptions& opts = {}) {
  CompositeMapOutcome<typename C::State> out;
  auto set1 = coupling.full_state_set();
  auto set2 = coupling.full_state_set();
  out.live_sets = 2;
  while (!coupling.is_singleton(set2)) {
    if (out.maps_applied + 2 > opts.max_maps) {
      throw CapExceeded("composite max_maps", opts.max_maps);
    }
    apply_random_map(coupling, stream, set1, &state);
    apply_random_map(coupling, stream, set2);
    out.maps_applied += 2;
    out.set_updates += 2;
    out.state_updates += 1;
  }
  out.coalesced = coupling.is_singleton(set1);
  out.state = std::move(state);
  return out;
}

/// One set: count maps until it coalesces, then reset it and apply that many
/// fresh maps to both the set and the state.
template <GrandCoupling C, WordSource S>
CompositeMapOutcome<typename C::State> apply_composite_map_memory_efficient(
    const C& coupling, S& stream, typename C::State state,
    const EngineOptions& opts = {}) {
  CompositeMapOutcome<typename C::State> out;
  out.live_sets = 1;
  std::uint64_t count = 0;
  {
    auto set = coupling.full_state_set();
    while (!coupling.is_singleton(set)) {
      if (2 * (count + 1) > opts.max_maps) {
        throw CapExceeded("composite max_maps", opts.max_maps);
      }
      apply_random_map(coupling, stream, set);
      ++count;
    }
  }
  auto set = coupling.full_state_set();
  for (std::uint64_t c = count; c > 0; --c) {
    apply_random_map(coupling, stream, set, &state);
  }
  out.maps_applied = 2 * count;
  out.set_updates = 2 * count;
  out.state_updates = count;
  out.coalesced = coupling.is_singleton(set);
  out.state = std::move(state);
  return out;
}

/// Memory-efficient procedure whose sets start from the image of a
/// separately drawn first map instead of the full state space.
template <GrandCoupling C, WordSource S>
CompositeMapOutcome<typename C::State> apply_composite_map_first_special(
    const C& coupling, S& stream, typename C::State state,
    const EngineOptions& opts = {}) {
  CompositeMapOutcome<typename C::State> out;
  out.live_sets = 1;
  std::uint64_t count = 0;
  {
    auto set = image_of_first_random_map(coupling, stream);
    while (!coupling.is_singleton(set)) {
      if (2 * (count + 2) > opts.max_maps) {
        throw CapExceeded("composite max_maps", opts.max_maps);
      }
      apply_random_map(coupling, stream, set);
      ++count;
    }
  }
  auto set = image_of_first_random_map(coupling, stream, &state);
  for (std::uint64_t c = count; c > 0; --c) {
    apply_random_map(coupling, stream, set, &state);
  }
  out.maps_applied = 2 * (count + 1);
  out.set_updates = 2 * (count + 1);
  out.state_updates = count + 1;
  out.coalesced = coupling.is_singleton(set);
  out.state = std::move(state);
  return out;
}

template <GrandCoupling C, WordSource S>
CompositeMapOutcome<typename C::State> apply_composite_map(
    CompositeVariant variant, const C& coupling, S& stream,
    typename C::State state, const EngineOptions& opts = {}) {
  switch (variant) {
    case CompositeVariant::kInterleaved:
      return apply_composite_map_interleaved(coupling, stream, std::move(state), opts);
    case CompositeVariant::kMemoryEfficient:
      return apply_composite_map_memory_efficient(coupling, stream, std::move(state), opts);
    case CompositeVariant::kFirstSpecial:
      return apply_composite_map_first_special(coupling, stream, std::move(state), opts);
  }
  throw std::invalid_argument("unknown composite variant");
}

// ---------------------------------------------------------------------------
// Read-once CFTP

struct SampleCost {
  std::uint64_t maps = 0;
  std::uint64_t set_updates = 0;
  std::uint64_t state_updates = 0;
  std::uint32_t composites = 0;
};

/// Read-once CFTP over an arbitrary composite procedure
/// `composite(ReadOnceStream&, State) -> CompositeMapOutcome<State>`.
///
/// The first call to next_sample() runs Initialize(): composites are applied
/// to the initial state until one is officially coalescent. Each sample is
/// then the state held just before the next coalescent composite, whose
/// output seeds the following sample. The whole run reads one stream and
/// holds a ReadOnceScope for its lifetime.
template <class State, class Composite>
class ReadOnceCftp {
 public:
  ReadOnceCftp(Composite composite, ReadOnceStream& stream, State initial)
      : composite_(std::move(composite)),
        stream_(stream),
        scope_(stream),
        state_(std::move(initial)) {}

  ReadOnceCftp(const ReadOnceCftp&) = delete;
  ReadOnceCftp& operator=(const ReadOnceCftp&) = delete;

  State next_sample(SampleCost* cost = nullptr) {
    if (!initialized_) {
      while (!step(init_cost_)) {
      }
      initialized_ = true;
    }
    SampleCost local;
    State old_state;
    do {
      old_state = state_;
    } while (!step(local));
    if (cost != nullptr) *cost = local;
    return old_state;
  }

  const SampleCost& init_cost() const { return init_cost_; }
  std::uint32_t peak_live_sets() const { return peak_live_sets_; }
  std::uint64_t coalescent_composites() const { return coalescent_; }
  std::uint64_t composites() const { return composites_; }

 private:
  bool step(SampleCost& cost) {
    auto out = composite_(stream_, std::move(state_));
    cost.maps += out.maps_applied;
    cost.set_updates += out.set_updates;
    cost.state_updates += out.state_updates;
    ++cost.composites;
    ++composites_;
    peak_live_sets_ = std::max(peak_live_sets_, out.live_sets);
    state_ = std::move(out.state);
    if (out.coalesced) ++coalescent_;
    return out.coalesced;
  }

  Composite composite_;
  ReadOnceStream& stream_;
  ReadOnceScope scope_;
  State state_;
  bool initialized_ = false;
  SampleCost init_cost_;
  std::uint32_t peak_live_sets_ = 0;
  std::uint64_t coalescent_ = 0;
  std::uint64_t composites_ = 0;
};

/// Runs ReadOnceCftp for `num_samples` samples and collects the report.
template <class State, class Composite>
EngineReport<State> read_once_cftp_with(Composite composite, ReadOnceStream& stream,
                                        State initial, std::uint64_t num_samples) {
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");
  ReadOnceCftp<State, Composite> engine(std::move(composite), stream, std::move(initial));
  EngineReport<State> report;
  report.samples.reserve(num_samples);
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    SampleCost cost;
    report.samples.push_back(engine.next_sample(&cost));
    report.per_sample_maps.push_back(cost.maps);
    report.per_sample_set_updates.push_back(cost.set_updates);
    report.per_sample_state_updates.push_back(cost.state_updates);
    report.per_sample_composites.push_back(cost.composites);
    report.stream_positions.push_back(stream.position());
  }
  report.init_maps = engine.init_cost().maps;
  report.init_set_updates = engine.init_cost().set_updates;
  report.init_state_updates = engine.init_cost().state_updates;
  report.peak_live_sets = engine.peak_live_sets();
  report.total_words = stream.position();
  return report;
}

/// Read-once CFTP for a grand coupling, starting from its canonical state.
template <GrandCoupling C>
EngineReport<typename C::State> read_once_cftp(
    const C& coupling, ReadOnceStream& stream, CompositeVariant variant,
    std::uint64_t num_samples, const EngineOptions& opts = {}) {
  return read_once_cftp_with(
      [&](ReadOnceStream& s, typename C::State x) {
        return apply_composite_map(variant, coupling, s, std::move(x), opts);
      },
      stream, coupling.canonical_state(), num_samples);
}

}  // namespace rocftp
