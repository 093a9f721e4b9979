#pragma once

// Read-once sampler for locally stable point processes. One composite map is
// two rounds of [independence-sampler update, then birth-and-death dynamics]:
// round 1 runs until the dominated set representation coalesces and keeps
// only the elapsed time T; round 2 starts afresh, carries the input state and
// runs for exactly T.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "rocftp/core.hpp"
#include "rocftp/engines.hpp"
#include "rocftp/errors.hpp"
#include "rocftp/geometry.hpp"
#include "rocftp/stream.hpp"
#include "rocftp/strauss/model.hpp"

namespace rocftp::strauss {

/// All configurations that contain every point of `lower`, any subset of
/// `delta`, and at most `k` further points anywhere.
struct DominatedSetRepr {
  std::uint64_t k = 0;
  std::vector<Point> delta;
  std::vector<Point> lower;

  bool singleton() const { return k == 0 && delta.empty(); }
  friend bool operator==(const DominatedSetRepr&, const DominatedSetRepr&) = default;
};

inline bool contains(const DominatedSetRepr& repr, const PointConfiguration& config) {
  auto is_in = [](const std::vector<Point>& pts, const Point& p) {
    for (const auto& q : pts) {
      if (q == p) return true;
    }
    return false;
  };
  for (const auto& p : repr.lower) {
    if (!is_in(config.points(), p)) return false;
  }
  std::uint64_t free_points = 0;
  for (const auto& p : config) {
    if (!is_in(repr.lower, p) && !is_in(repr.delta, p)) ++free_points;
  }
  return free_points <= repr.k;
}

/// Time for all of k unit-rate exponential lifetimes to end, drawn in one
/// word from P(T <= t) = (1 - e^-t)^k.
template <WordSource S>
double phase_out_time(S& s, std::uint64_t k) {
  if (k == 0) return 0.0;
  const double log_u = std::log(uniform_open01(s));
  return -std::log(-std::expm1(log_u / static_cast<double>(k)));
}

struct FirstUpdateOutcome {
  DominatedSetRepr repr;
  std::optional<PointConfiguration> state;
  PointConfiguration proposal;
  double bound = 0.0;
  bool accepted = false;  // meaningful only with an input
};

/// Independence-sampler update proposing a Poisson(c K lambda) configuration.
/// Inputs with at least B(proposal) points always accept. The proposal and
/// one acceptance uniform are drawn whether or not an input is given.
template <WordSource S>
FirstUpdateOutcome mh_first_update(const StraussModel& model, S& stream,
                                   const std::optional<PointConfiguration>& input = std::nullopt) {
  FirstUpdateOutcome out{{}, std::nullopt,
                         poisson_point_process(stream, model.proposal_intensity(), model.region),
                         0.0, false};
  const double log_u = std::log(uniform_open01(stream));
  const std::uint64_t pairs = close_pairs(model, out.proposal);
  out.bound = stability_bound(model, out.proposal.size(), pairs);
  out.repr.k = static_cast<std::uint64_t>(std::ceil(out.bound));
  if (input) {
    const double nx = static_cast<double>(input->size());
    const double ny = static_cast<double>(out.proposal.size());
    if (nx >= out.bound) {
      out.accepted = true;
    } else {
      const double log_ratio = model.log_density(pairs) -
                               model.log_density(close_pairs(model, *input)) +
                               (nx - ny) * std::log(model.proposal_factor * model.K);
      out.accepted = log_u < log_ratio;
    }
    out.state = out.accepted ? out.proposal : *input;
  }
  return out;
}

struct EvolveOptions {
  /// Draw the time for the unlocated points to die out in one step
  /// (until-coalescent runs without a state only).
  bool phase_out_shortcut = true;
  std::uint64_t max_events = 10'000'000;
  /// Check after every event that the state lies in the represented set.
  bool check_sandwich = false;
};

struct EvolveResult {
  double elapsed = 0.0;
  std::uint64_t events = 0;
  bool coalesced = false;
};

/// Spatial birth-and-death dynamics (deaths at rate 1 per point, proposals
/// at rate K lambda per unit area, a proposal x born into sigma with
/// probability f(sigma + x) / (K f(sigma))) acting jointly on a dominated set
/// representation and, optionally, on one state inside it. Every proposal
/// carries one uniform shared by all members of the set. While unlocated
/// points remain, proposals that some member could accept join delta; after
/// that, the two bounds move by the crossover coupling: a proposal joins
/// `lower` if every member accepts it and `delta` if only some do.
class DominatedDynamics {
 public:
  DominatedDynamics(const StraussModel& model, const DominatedSetRepr& repr)
      : model_(model),
        delta_(model.region, model.radius),
        lower_(model.region, model.radius),
        state_(model.region, model.radius),
        k_(repr.k),
        birth_rate_(model.birth_proposal_rate()) {
    for (const auto& p : repr.delta) delta_.insert(next_id_++, p);
    for (const auto& p : repr.lower) lower_.insert(next_id_++, p);
  }

  /// Starts tracking `state`, which must lie in the represented set. Points
  /// not matched to `lower` or `delta` become located unknowns.
  void track_state(const PointConfiguration& state) {
    std::map<std::pair<double, double>, std::uint64_t> known;
    for (std::size_t i = 0; i < delta_.size(); ++i) {
      known[{delta_.point_at(i).x, delta_.point_at(i).y}] = delta_.id_at(i);
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      known[{lower_.point_at(i).x, lower_.point_at(i).y}] = lower_.id_at(i);
    }
    state_ = IndexedPoints(model_.region, model_.radius);
    old_ids_.clear();
    for (const auto& p : state) {
      const auto it = known.find({p.x, p.y});
      if (it != known.end()) {
        state_.insert(it->second, p);
      } else {
        const std::uint64_t id = kUnlocatedBit | next_id_++;
        old_ids_.push_back(id);
        state_.insert(id, p);
      }
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!state_.contains_id(lower_.id_at(i))) {
        throw std::invalid_argument("tracked state misses a definite point");
      }
    }
    if (old_ids_.size() > k_) {
      throw std::invalid_argument("tracked state has more free points than the bound allows");
    }
    tracking_ = true;
  }

  bool coalesced() const { return k_ == 0 && delta_.empty(); }
  bool tracking() const { return tracking_; }
  std::uint64_t unlocated() const { return k_; }

  DominatedSetRepr repr() const { return {k_, delta_.points(), lower_.points()}; }

  PointConfiguration state() const {
    if (!tracking_) throw ContractViolation("no state is being tracked");
    return PointConfiguration(model_.region, state_.points());
  }

  template <WordSource S>
  EvolveResult run_until_coalescent(S& stream, const EvolveOptions& opts = {}) {
    EvolveResult res;
    if (opts.phase_out_shortcut && !tracking_ && k_ > 0) {
      const double t1 = phase_out_time(stream, k_);
      const std::uint64_t unknown = k_;
      k_ = 0;
      // The unlocated points play no part in births or in other deaths
      // until they are gone, so only located points need explicit events.
      phase_out_unknowns_ = unknown;
      for (;;) {
        const double rate = birth_rate_ + located();
        if (rate <= 0.0) break;
        const double dt = exponential(stream, rate);
        if (res.elapsed + dt >= t1) break;
        res.elapsed += dt;
        event(stream, rate, res, opts);
      }
      phase_out_unknowns_ = 0;
      res.elapsed = t1;
    }
    while (!coalesced()) {
      const double rate = birth_rate_ + static_cast<double>(k_) + located();
      res.elapsed += exponential(stream, rate);
      event(stream, rate, res, opts);
    }
    res.coalesced = true;
    return res;
  }

  template <WordSource S>
  EvolveResult run_for(S& stream, double duration, const EvolveOptions& opts = {}) {
    if (!(duration >= 0.0)) throw std::invalid_argument("duration must be >= 0");
    EvolveResult res;
    for (;;) {
      const double rate = birth_rate_ + static_cast<double>(k_) + located();
      if (rate <= 0.0) break;
      const double dt = exponential(stream, rate);
      if (res.elapsed + dt >= duration) break;
      res.elapsed += dt;
      event(stream, rate, res, opts);
    }
    res.elapsed = duration;
    res.coalesced = coalesced();
    return res;
  }

 private:
  static constexpr std::uint64_t kUnlocatedBit = std::uint64_t{1} << 63;

  double located() const { return static_cast<double>(delta_.size() + lower_.size()); }

  template <WordSource S>
  void event(S& stream, double rate, EvolveResult& res, const EvolveOptions& opts) {
    if (res.events == opts.max_events) throw CapExceeded("strauss max_events", opts.max_events);
    ++res.events;
    if (uniform01(stream) * rate < birth_rate_) {
      birth(stream);
    } else {
      death(stream);
    }
    if (opts.check_sandwich && tracking_ && !contains(repr(), state())) {
      throw ContractViolation("tracked state left the represented set");
    }
  }

  template <WordSource S>
  void birth(S& stream) {
    const Point x = uniform_point(stream, model_.region);
    const double u = uniform01(stream);
    const std::uint64_t id = next_id_++;
    const std::uint64_t near_lower = lower_.count_near(x);
    bool kept = false;
    if (k_ > 0 || phase_out_unknowns_ > 0) {
      if (u < model_.birth_ratio(near_lower)) {
        delta_.insert(id, x);
        kept = true;
      }
    } else if (u < model_.birth_ratio(near_lower + delta_.count_near(x))) {
      lower_.insert(id, x);
      kept = true;
    } else if (u < model_.birth_ratio(near_lower)) {
      delta_.insert(id, x);
      kept = true;
    }
    if (tracking_ && u < model_.birth_ratio(state_.count_near(x))) {
      if (!kept) throw ContractViolation("state accepted a birth the bounds rejected");
      state_.insert(id, x);
    }
  }

  template <WordSource S>
  void death(S& stream) {
    const std::uint64_t pool = k_ + delta_.size() + lower_.size();
    std::uint64_t idx = uniform_int(stream, pool);
    if (idx < k_) {
      if (tracking_ && idx < old_ids_.size()) {
        state_.erase_id(old_ids_[idx]);
        old_ids_[idx] = old_ids_.back();
        old_ids_.pop_back();
      }
      --k_;
      return;
    }
    idx -= k_;
    std::uint64_t id;
    if (idx < delta_.size()) {
      id = delta_.id_at(idx);
      delta_.erase_slot(idx);
    } else {
      idx -= delta_.size();
      id = lower_.id_at(idx);
      lower_.erase_slot(idx);
    }
    if (tracking_) state_.erase_id(id);
  }

  StraussModel model_;
  IndexedPoints delta_;
  IndexedPoints lower_;
  IndexedPoints state_;
  std::vector<std::uint64_t> old_ids_;
  std::uint64_t k_;
  std::uint64_t phase_out_unknowns_ = 0;
  double birth_rate_;
  std::uint64_t next_id_ = 1;
  bool tracking_ = false;
};

struct EvolveOutcome {
  DominatedSetRepr repr;
  std::optional<PointConfiguration> state;
  EvolveResult result;
};

/// Runs the dynamics from `repr` for `duration`, or until the representation
/// coalesces when no duration is given.
template <WordSource S>
EvolveOutcome birth_death_evolve(const StraussModel& model, S& stream,
                                 const DominatedSetRepr& repr,
                                 std::optional<double> duration,
                                 const std::optional<PointConfiguration>& state = std::nullopt,
                                 const EvolveOptions& opts = {}) {
  DominatedDynamics dyn(model, repr);
  if (state) dyn.track_state(*state);
  EvolveOutcome out;
  out.result = duration ? dyn.run_for(stream, *duration, opts)
                        : dyn.run_until_coalescent(stream, opts);
  out.repr = dyn.repr();
  if (state) out.state = dyn.state();
  return out;
}

struct StraussCompositeOutcome {
  CompositeMapOutcome<PointConfiguration> outcome;
  double round1_time = 0.0;
  double round2_time = 0.0;
  std::uint64_t round1_events = 0;
  std::uint64_t round2_events = 0;
};

/// One composite map. Round 1 finds the coalescence time T of a fresh
/// dominated run and discards everything else; round 2 applies a fresh
/// first update to `state` and runs for exactly T. The flag is round 2's
/// official coalescence. maps_applied counts first updates plus events.
template <WordSource S>
StraussCompositeOutcome strauss_composite(const StraussModel& model, S& stream,
                                          PointConfiguration state,
                                          const EvolveOptions& opts = {}) {
  StraussCompositeOutcome out;
  {
    const auto first = mh_first_update(model, stream);
    DominatedDynamics dyn(model, first.repr);
    const auto r1 = dyn.run_until_coalescent(stream, opts);
    out.round1_time = r1.elapsed;
    out.round1_events = r1.events;
  }
  const auto second = mh_first_update(model, stream, std::optional<PointConfiguration>(state));
  DominatedDynamics dyn(model, second.repr);
  dyn.track_state(*second.state);
  const auto r2 = dyn.run_for(stream, out.round1_time, opts);
  out.round2_time = r2.elapsed;
  out.round2_events = r2.events;

  auto& o = out.outcome;
  o.state = dyn.state();
  o.coalesced = r2.coalesced;
  o.maps_applied = 2 + out.round1_events + out.round2_events;
  o.set_updates = o.maps_applied;
  o.state_updates = 1 + out.round2_events;
  o.live_sets = 1;
  return out;
}

struct StraussOptions {
  EvolveOptions evolve;
  /// Hard-core runs only: softened samples discarded before giving up.
  std::uint64_t max_rejections = 1'000'000;
};

struct StraussRun {
  std::vector<PointConfiguration> samples;
  std::vector<std::uint64_t> per_sample_events;
  std::vector<std::uint32_t> per_sample_composites;
  std::uint64_t composites = 0;
  std::uint64_t coalescent_composites = 0;
  std::uint64_t rejections = 0;
  std::uint64_t total_words = 0;
};

/// k exact samples by read-once CFTP over the two-round composite. With
/// gamma = 0 the softened density is sampled and samples with a close pair
/// are rejected.
inline StraussRun sample_strauss(const StraussModel& model, ReadOnceStream& stream,
                                 std::uint64_t num_samples, const StraussOptions& opts = {}) {
  model.validate();
  if (num_samples == 0) throw std::invalid_argument("num_samples must be >= 1");
  auto composite = [&](ReadOnceStream& s, PointConfiguration x) {
    return strauss_composite(model, s, std::move(x), opts.evolve).outcome;
  };
  ReadOnceCftp<PointConfiguration, decltype(composite)> engine(
      composite, stream, PointConfiguration(model.region, {}));
  StraussRun run;
  while (run.samples.size() < num_samples) {
    SampleCost cost;
    auto sample = engine.next_sample(&cost);
    if (model.hard_core() && close_pairs(model, sample) > 0) {
      if (run.rejections == opts.max_rejections) {
        throw CapExceeded("strauss max_rejections", opts.max_rejections);
      }
      ++run.rejections;
      continue;
    }
    run.samples.push_back(std::move(sample));
    run.per_sample_events.push_back(cost.maps);
    run.per_sample_composites.push_back(cost.composites);
  }
  run.composites = engine.composites();
  run.coalescent_composites = engine.coalescent_composites();
  run.total_words = stream.position();
  return run;
}

}  // namespace rocftp::strauss
