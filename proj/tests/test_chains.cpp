#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rocftp/chains/exact.hpp"
#include "rocftp/chains/finite_map_chain.hpp"
#include "rocftp/chains/ising.hpp"
#include "rocftp/chains/lazy_walk.hpp"
#include "rocftp/chains/sort_chain.hpp"

using namespace rocftp;
using namespace rocftp::chains;

TEST(ExactStationary, LazyWalkIsUniform) {
  for (int n : {1, 2, 5, 11}) {
    const auto pi = exact_stationary(LazyWalk(n));
    ASSERT_EQ(pi.size(), static_cast<std::size_t>(n));
    for (double p : pi) EXPECT_NEAR(p, 1.0 / n, 1e-12);
  }
}

TEST(ExactStationary, SortChainOnThreeLettersIsUniform) {
  const auto pi = exact_stationary(SortChain(3));
  ASSERT_EQ(pi.size(), 6u);
  for (double p : pi) EXPECT_NEAR(p, 1.0 / 6.0, 1e-12);
}

TEST(ExactStationary, IsingMatchesGibbsWeights) {
  // Direct enumeration of the 16 spin states of a 2 x 2 grid with free
  // boundary: the four bonds are (0,1), (2,3), (0,2), (1,3).
  const double beta = 0.3;
  const IsingHeatBath chain(2, beta);
  std::vector<double> gibbs(16);
  double z = 0.0;
  for (int i = 0; i < 16; ++i) {
    auto s = [&](int b) { return ((i >> b) & 1) ? 1 : -1; };
    const int bonds = s(0) * s(1) + s(2) * s(3) + s(0) * s(2) + s(1) * s(3);
    gibbs[static_cast<std::size_t>(i)] = std::exp(beta * bonds);
    z += gibbs[static_cast<std::size_t>(i)];
  }
  const auto pi = exact_stationary(chain);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(pi[i], gibbs[i] / z, 1e-12);
}

TEST(ExactStationary, AsymmetricTwoState) {
  const auto pi = exact_stationary(FiniteMapChain::asymmetric_two_state());
  EXPECT_NEAR(pi[0], 8.0 / 13.0, 1e-12);
  EXPECT_NEAR(pi[1], 5.0 / 13.0, 1e-12);
}

TEST(ExactStationary, OneStepLeavesLawInvariant) {
  EXPECT_LT(stationarity_residual(LazyWalk(11), exact_stationary(LazyWalk(11))), 1e-12);
  EXPECT_LT(stationarity_residual(SortChain(4), exact_stationary(SortChain(4))), 1e-12);
  const IsingHeatBath ising(2, 0.3);
  EXPECT_LT(stationarity_residual(ising, exact_stationary(ising)), 1e-12);
  const IsingHeatBath ising3(3, 0.5);
  EXPECT_LT(stationarity_residual(ising3, exact_stationary(ising3)), 1e-12);
}

TEST(ExactStationary, SizeCap) {
  EXPECT_THROW(exact_stationary(LazyWalk(20), 10), std::length_error);
}

TEST(TransitionRows, SumToOne) {
  auto check = [](const auto& chain) {
    for (std::size_t i = 0; i < chain.num_states(); ++i) {
      double total = 0.0;
      for (const auto& [j, p] : chain.transition_row(i)) {
        EXPECT_LT(j, chain.num_states());
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  };
  check(LazyWalk(7));
  check(SortChain(4));
  check(IsingHeatBath(2, 0.3));
  check(FiniteMapChain::asymmetric_two_state());
}

TEST(Chains, InvalidParameters) {
  EXPECT_THROW(LazyWalk(0), std::invalid_argument);
  EXPECT_THROW(SortChain(1), std::invalid_argument);
  EXPECT_THROW(SortChain(8), std::invalid_argument);
  EXPECT_THROW(IsingHeatBath(0, 0.3), std::invalid_argument);
  EXPECT_THROW(IsingHeatBath(2, -0.1), std::invalid_argument);
  EXPECT_THROW(FiniteMapChain(2, {{0, 2}}, {1}), std::invalid_argument);
  EXPECT_THROW(FiniteMapChain(2, {{0, 1}}, {0}), std::invalid_argument);
  EXPECT_THROW(FiniteMapChain(2, {{0, 1}}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(IsingHeatBath(5, 0.3).num_states(), std::length_error);
}

TEST(SortChain, RankRoundTrip) {
  const SortChain chain(5);
  std::set<std::vector<int>> seen;
  for (std::size_t i = 0; i < chain.num_states(); ++i) {
    const auto p = chain.state_at(i);
    EXPECT_EQ(chain.index_of(p), i);
    seen.insert(p);
  }
  EXPECT_EQ(seen.size(), 120u);
  EXPECT_EQ(chain.canonical_state(), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(SortChain, MapsSortOrReverseAPair) {
  const SortChain chain(4);
  std::vector<int> x{3, 1, 2, 0};
  chain.apply({0, true}, x);
  EXPECT_EQ(x, (std::vector<int>{1, 3, 2, 0}));
  chain.apply({0, true}, x);
  EXPECT_EQ(x, (std::vector<int>{1, 3, 2, 0}));
  chain.apply({2, false}, x);
  EXPECT_EQ(x, (std::vector<int>{1, 3, 2, 0}));
  chain.apply({1, true}, x);
  EXPECT_EQ(x, (std::vector<int>{1, 2, 3, 0}));
}

TEST(SortChain, ExplicitSetIsExactImage) {
  const SortChain chain(4);
  ReadOnceStream s(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto set = chain.full_state_set();
    std::vector<SortChain::Map> maps;
    for (int i = 0; i < 6; ++i) {
      maps.push_back(chain.draw_map(s));
      chain.apply(maps.back(), set);
    }
    std::set<std::uint32_t> image;
    for (std::size_t i = 0; i < chain.num_states(); ++i) {
      auto x = chain.state_at(i);
      for (const auto& m : maps) chain.apply(m, x);
      image.insert(static_cast<std::uint32_t>(chain.index_of(x)));
    }
    EXPECT_EQ(std::vector<std::uint32_t>(image.begin(), image.end()), set);
  }
}

TEST(Ising, SandwichHoldsAndCoalescenceMeansEqualBounds) {
  const IsingHeatBath chain(4, 0.4);
  ReadOnceStream s(21);
  for (int trial = 0; trial < 50; ++trial) {
    auto set = chain.full_state_set();
    auto x = chain.canonical_state();
    for (std::size_t i = 0; i < chain.sites(); ++i) x[i] = uniform_int(s, 2) ? 1 : -1;
    for (int step = 0; step < 100000 && !chain.is_singleton(set); ++step) {
      const auto m = chain.draw_map(s);
      chain.apply(m, set);
      chain.apply(m, x);
      for (std::size_t i = 0; i < chain.sites(); ++i) {
        ASSERT_LE(set.lower[i], set.upper[i]);
        ASSERT_LE(set.lower[i], x[i]);
        ASSERT_LE(x[i], set.upper[i]);
      }
    }
    ASSERT_TRUE(chain.is_singleton(set));
    EXPECT_EQ(set.lower, set.upper);
    EXPECT_EQ(x, set.lower);
  }
}

TEST(Ising, PairSum) {
  const IsingHeatBath chain(3, 0.3);
  EXPECT_EQ(chain.pair_sum(IsingHeatBath::State(9, 1)), 12);
  IsingHeatBath::State checker(9);
  for (int i = 0; i < 9; ++i) checker[static_cast<std::size_t>(i)] = (i % 2) ? -1 : 1;
  EXPECT_EQ(chain.pair_sum(checker), -12);
}

TEST(LazyWalk, ClampsAtEnds) {
  const LazyWalk w(3);
  int x = 0;
  w.apply({-1, false}, x);
  EXPECT_EQ(x, 0);
  x = 2;
  w.apply({+1, false}, x);
  EXPECT_EQ(x, 2);
  w.apply({-1, true}, x);
  EXPECT_EQ(x, 2);
  w.apply({-1, false}, x);
  EXPECT_EQ(x, 1);
}

TEST(FiniteMapChain, FirstMapsDefaultToOrdinary) {
  const auto c = FiniteMapChain::asymmetric_two_state();
  ReadOnceStream a(5), b(5);
  EXPECT_EQ(c.first_image(c.draw_first_map(a)), [&] {
    auto set = c.full_state_set();
    c.apply(c.draw_map(b), set);
    return set;
  }());
}
