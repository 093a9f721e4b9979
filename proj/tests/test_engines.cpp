#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rocftp/chains/exact.hpp"
#include "rocftp/chains/finite_map_chain.hpp"
#include "rocftp/chains/ising.hpp"
#include "rocftp/chains/lazy_walk.hpp"
#include "rocftp/chains/sort_chain.hpp"
#include "rocftp/engines.hpp"
#include "rocftp/verify/stats.hpp"

using namespace rocftp;
using chains::FiniteMapChain;

namespace {

constexpr CompositeVariant kAll[] = {CompositeVariant::kInterleaved,
                                     CompositeVariant::kMemoryEfficient,
                                     CompositeVariant::kFirstSpecial};

bool strictly_increasing(const std::vector<std::uint64_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

}  // namespace

TEST(BinaryBackoff, ConstantMapsFinishAtTimeOne) {
  const auto chain = FiniteMapChain::constant_maps(3);
  const auto r = binary_backoff_cftp(chain, SeedTable(1), 50);
  ASSERT_EQ(r.samples.size(), 50u);
  for (auto t : r.per_sample_start_time) EXPECT_EQ(t, 1u);
  for (auto m : r.per_sample_maps) EXPECT_EQ(m, 1u);
  EXPECT_EQ(r.replay_events, 0u);
}

TEST(BinaryBackoff, ReplaysRandomnessOnLazyWalk) {
  const chains::LazyWalk walk(11);
  const auto r = binary_backoff_cftp(walk, SeedTable(2), 200);
  EXPECT_GT(r.replay_events, 0u);
  EXPECT_GT(r.reread_words, 0u);
  for (auto t : r.per_sample_start_time) EXPECT_TRUE(std::has_single_bit(t));
  // Attempts at 1, 2, ..., T apply 2T - 1 maps in total.
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    EXPECT_EQ(r.per_sample_maps[i], 2 * r.per_sample_start_time[i] - 1);
  }
}

TEST(BinaryBackoff, CapAndArgumentErrors) {
  const auto chain = FiniteMapChain::identity_only(2);
  EngineOptions opts;
  opts.max_start_time = 64;
  EXPECT_THROW(binary_backoff_cftp(chain, SeedTable(1), 1, opts), CapExceeded);
  EXPECT_THROW(binary_backoff_cftp(chain, SeedTable(1), 0), std::invalid_argument);
}

TEST(Composite, InterleavedOnConstantMapsIsOneIteration) {
  const auto chain = FiniteMapChain::constant_maps(4);
  ReadOnceStream s(1);
  const auto out = apply_composite_map_interleaved(chain, s, 0);
  EXPECT_TRUE(out.coalesced);
  EXPECT_EQ(out.maps_applied, 2u);
  EXPECT_EQ(out.state_updates, 1u);
  EXPECT_EQ(out.live_sets, 2u);
}

TEST(Composite, MemoryEfficientOnConstantMapsCountsOne) {
  const auto chain = FiniteMapChain::constant_maps(4);
  ReadOnceStream s(1);
  const auto out = apply_composite_map_memory_efficient(chain, s, 0);
  EXPECT_TRUE(out.coalesced);
  EXPECT_EQ(out.maps_applied, 2u);  // Count = 1, applied twice
  EXPECT_EQ(out.live_sets, 1u);
}

TEST(Composite, FirstSpecialWithConstantFirstMapCountsZero) {
  const auto base = FiniteMapChain::asymmetric_two_state();
  const auto chain = base.with_first_maps({{0, 0}, {1, 1}}, {8, 5});
  ReadOnceStream s(1);
  for (int i = 0; i < 100; ++i) {
    const auto out = apply_composite_map_first_special(chain, s, 1);
    EXPECT_TRUE(out.coalesced);
    EXPECT_EQ(out.maps_applied, 2u);  // two first maps, no ordinary ones
    EXPECT_EQ(out.state_updates, 1u);
  }
}

TEST(Composite, EveryVariantHitsCapOnIdentity) {
  const auto chain = FiniteMapChain::identity_only(2);
  EngineOptions opts;
  opts.max_maps = 1000;
  for (auto v : kAll) {
    ReadOnceStream s(1);
    EXPECT_THROW(apply_composite_map(v, chain, s, 0, opts), CapExceeded) << to_string(v);
  }
}

TEST(Composite, StateUpdateDoesNotChangeWords) {
  const chains::LazyWalk walk(11);
  for (auto v : kAll) {
    ReadOnceStream a(8), b(8);
    for (int i = 0; i < 200; ++i) {
      const auto x = apply_composite_map(v, walk, a, 0);
      const auto y = apply_composite_map(v, walk, b, 10);
      ASSERT_EQ(x.coalesced, y.coalesced);
      ASSERT_EQ(x.maps_applied, y.maps_applied);
      ASSERT_EQ(a.position(), b.position());
      if (x.coalesced) {
        ASSERT_EQ(x.state, y.state);
      }
    }
  }
}

TEST(ReadOnce, ConstantMapsGiveOneCompositePerSample) {
  const auto chain = FiniteMapChain::constant_maps(5);
  ReadOnceStream s(17);
  const auto r = read_once_cftp(chain, s, CompositeVariant::kInterleaved, 20);
  for (auto c : r.per_sample_composites) EXPECT_EQ(c, 1u);

  // Each interleaved composite draws the state's map first, then the set's.
  // Sample i is the constant carried out of composite i (composite 0 is the
  // initialization).
  ReadOnceStream replay(17);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto state_map = chain.draw_map(replay);
    chain.draw_map(replay);
    EXPECT_EQ(r.samples[i], chain.maps()[state_map.index][0]);
  }
}

TEST(ReadOnce, PositionsIncreaseAndMatchWords) {
  const chains::LazyWalk walk(11);
  for (auto v : kAll) {
    ReadOnceStream s(3);
    const auto reseeds = stream_audit().reseed_events.load();
    const auto r = read_once_cftp(walk, s, v, 500);
    EXPECT_TRUE(strictly_increasing(r.stream_positions));
    EXPECT_EQ(r.total_words, s.position());
    EXPECT_EQ(stream_audit().reseed_events.load(), reseeds);
    EXPECT_GT(r.init_maps, 0u);
  }
}

TEST(ReadOnce, ReplayStreamInsideCompositeIsViolation) {
  ReadOnceStream s(5);
  auto composite = [](ReadOnceStream&, int x) {
    SeededReplayStream forbidden{SeedTable(1)};
    CompositeMapOutcome<int> out;
    out.state = x;
    out.coalesced = true;
    return out;
  };
  EXPECT_THROW(read_once_cftp_with(composite, s, 0, 1), ContractViolation);
  EXPECT_TRUE(s.poisoned());
}

TEST(ReadOnce, ZeroSamplesRejected) {
  const chains::LazyWalk walk(3);
  ReadOnceStream s(1);
  EXPECT_THROW(read_once_cftp(walk, s, CompositeVariant::kInterleaved, 0), std::invalid_argument);
}

TEST(ReadOnce, ExactOnLazyWalkAndAgreesWithBackoff) {
  const chains::LazyWalk walk(11);
  const auto pi = chains::exact_stationary(walk);
  const auto backoff = binary_backoff_cftp(walk, SeedTable(44), 20000);
  const auto bh = verify::histogram(backoff.samples, 11);
  EXPECT_TRUE(verify::chi_square_gof(bh, pi).pass);
  for (auto v : kAll) {
    ReadOnceStream s(45);
    const auto r = read_once_cftp(walk, s, v, 20000);
    const auto h = verify::histogram(r.samples, 11);
    EXPECT_TRUE(verify::chi_square_gof(h, pi).pass) << to_string(v);
    EXPECT_TRUE(verify::two_sample_chi_square(h, bh).pass) << to_string(v);
  }
}

TEST(ReadOnce, ExactOnSortAndIsing) {
  const chains::SortChain sort(3);
  const chains::IsingHeatBath ising(2, 0.3);
  for (auto v : kAll) {
    ReadOnceStream s(46);
    const auto r = read_once_cftp(sort, s, v, 20000);
    std::vector<std::uint64_t> h(sort.num_states(), 0);
    for (const auto& x : r.samples) ++h[sort.index_of(x)];
    EXPECT_TRUE(verify::chi_square_gof(h, chains::exact_stationary(sort)).pass);

    ReadOnceStream t(47);
    const auto q = read_once_cftp(ising, t, v, 20000);
    std::vector<std::uint64_t> g(ising.num_states(), 0);
    for (const auto& x : q.samples) ++g[ising.index_of(x)];
    EXPECT_TRUE(verify::chi_square_gof(g, chains::exact_stationary(ising)).pass);
  }
}

TEST(ReadOnce, MemoryEfficientKeepsOneLiveSet) {
  const chains::LazyWalk walk(11);
  ReadOnceStream a(1), b(1);
  EXPECT_EQ(read_once_cftp(walk, a, CompositeVariant::kMemoryEfficient, 100).peak_live_sets, 1u);
  EXPECT_EQ(read_once_cftp(walk, b, CompositeVariant::kInterleaved, 100).peak_live_sets, 2u);
}

TEST(ReadOnce, NoTemptationToAbandonLongRuns) {
  // For a funnelling chain the maps still needed by a set that has already
  // survived j maps are stochastically no larger than a fresh run's.
  const chains::LazyWalk walk(11);
  ReadOnceStream s(9);
  std::vector<double> times;
  for (int i = 0; i < 20000; ++i) {
    auto set = walk.full_state_set();
    std::uint64_t t = 0;
    while (!walk.is_singleton(set)) {
      apply_random_map(walk, s, set);
      ++t;
    }
    times.push_back(static_cast<double>(t));
  }
  double mean = 0.0;
  for (double t : times) mean += t;
  mean /= static_cast<double>(times.size());
  for (double j : {0.5 * mean, mean, 2.0 * mean}) {
    double sum = 0.0, sum2 = 0.0;
    double n = 0.0;
    for (double t : times) {
      if (t > j) {
        sum += t - j;
        sum2 += (t - j) * (t - j);
        n += 1.0;
      }
    }
    ASSERT_GT(n, 100.0);
    const double m = sum / n;
    const double sd = std::sqrt(sum2 / n - m * m);
    EXPECT_LE(m, mean + 3.0 * sd / std::sqrt(n)) << "j=" << j;
  }
}
