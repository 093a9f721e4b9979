#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <regex>
#include <sstream>
#include <vector>

#include "rocftp/strauss/model.hpp"
#include "rocftp/strauss/render.hpp"
#include "rocftp/strauss/sampler.hpp"
#include "rocftp/verify/oracles.hpp"
#include "rocftp/verify/stats.hpp"

using namespace rocftp;
using namespace rocftp::strauss;

namespace {

StraussModel tiny(double lambda = 0.5, double gamma = 0.5) {
  StraussModel m;
  m.lambda = lambda;
  m.gamma = gamma;
  m.radius = 1.0;
  m.region = Region(2.0, 2.0);
  return m;
}

std::uint64_t brute_pairs(const std::vector<Point>& pts, double r) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) n += squared_distance(pts[i], pts[j]) < r * r;
  }
  return n;
}

// Two-sample chi-square on continuous values, binned at pooled deciles.
verify::GofReport binned_two_sample(std::vector<double> a, std::vector<double> b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  for (int q = 1; q < 10; ++q) edges.push_back(pooled[pooled.size() * q / 10]);
  auto bin = [&](const std::vector<double>& v) {
    std::vector<std::uint64_t> h(10, 0);
    for (double x : v) {
      ++h[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), x) - edges.begin())];
    }
    return h;
  };
  return verify::two_sample_chi_square(bin(a), bin(b));
}

}  // namespace

TEST(StraussModel, Validation) {
  auto m = tiny();
  EXPECT_NO_THROW(m.validate());
  m.gamma = 1.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = tiny();
  m.lambda = -1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = tiny();
  m.K = 0.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = tiny();
  m.proposal_factor = 1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = tiny();
  m.epsilon_soft = 1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(StraussModel, BirthRatio) {
  const auto m = tiny(1.0, 0.5);
  EXPECT_DOUBLE_EQ(m.birth_ratio(0), 1.0);
  EXPECT_DOUBLE_EQ(m.birth_ratio(3), 0.125);
  auto h = tiny(1.0, 0.0);
  EXPECT_DOUBLE_EQ(h.birth_ratio(1), 1e-20);
  h.epsilon_soft = 0.0;
  EXPECT_DOUBLE_EQ(h.birth_ratio(1), 0.0);
  EXPECT_DOUBLE_EQ(h.birth_ratio(0), 1.0);
}

TEST(StabilityBound, EmptyConfigurationIsZero) {
  const auto m = tiny();
  EXPECT_DOUBLE_EQ(stability_bound(m, PointConfiguration(m.region)), 0.0);
}

TEST(StabilityBound, HalfGammaThreePointsOnePair) {
  const auto m = tiny(1.0, 0.5);
  const PointConfiguration sigma(m.region, {{0.1, 0.1}, {0.5, 0.1}, {1.9, 1.9}});
  EXPECT_EQ(close_pairs(m, sigma), 1u);
  EXPECT_DOUBLE_EQ(stability_bound(m, sigma), 4.0);
}

TEST(StabilityBound, SoftenedHardCore) {
  const auto m = tiny(1.0, 0.0);
  const PointConfiguration sigma(m.region, {{0.1, 0.1}, {0.5, 0.1}, {1.9, 1.9}});
  EXPECT_NEAR(stability_bound(m, sigma), 3.0 + 20.0 * std::log2(10.0), 1e-9);
  EXPECT_NEAR(stability_bound(m, sigma) - 3.0, 66.44, 0.01);
  auto hard = m;
  hard.epsilon_soft = 0.0;
  EXPECT_THROW(stability_bound(hard, sigma), std::domain_error);
  EXPECT_DOUBLE_EQ(stability_bound(hard, PointConfiguration(m.region, {{0.1, 0.1}})), 1.0);
}

TEST(StabilityBound, GuaranteesAcceptanceByHastingsRatio) {
  // Any x with #x >= B(sigma) has Hastings ratio f(sigma)/f(x) (cK)^(#x-#sigma) >= 1.
  auto m = tiny(1.0, 0.3);
  ReadOnceStream s(4);
  for (int i = 0; i < 2000; ++i) {
    const auto sigma = poisson_point_process(s, 2.0, m.region);
    const double b = stability_bound(m, sigma);
    const auto nx = static_cast<std::uint64_t>(std::ceil(b));
    // Worst case for x: as many pairs as possible doesn't matter since
    // f(x) <= 1; use f(x) = 1.
    const double log_ratio = m.log_density(close_pairs(m, sigma)) +
                             (static_cast<double>(nx) - static_cast<double>(sigma.size())) * std::log(2.0);
    EXPECT_GE(log_ratio, -1e-9);
  }
}

TEST(IndexedPoints, CountNearMatchesBruteForce) {
  const Region region(7.0, 5.0);
  ReadOnceStream s(5);
  for (double r : {0.3, 1.0, 2.5}) {
    IndexedPoints index(region, r);
    std::vector<Point> pts;
    std::vector<std::uint64_t> ids;
    for (std::uint64_t id = 0; id < 300; ++id) {
      const auto p = uniform_point(s, region);
      index.insert(id, p);
      pts.push_back(p);
      ids.push_back(id);
    }
    // Remove a third of them by id.
    for (std::uint64_t id = 0; id < 300; id += 3) {
      EXPECT_TRUE(index.erase_id(id));
      EXPECT_FALSE(index.contains_id(id));
    }
    EXPECT_FALSE(index.erase_id(0));
    std::vector<Point> kept;
    for (std::uint64_t id = 0; id < 300; ++id) {
      if (id % 3 != 0) kept.push_back(pts[id]);
    }
    ASSERT_EQ(index.size(), kept.size());
    for (int q = 0; q < 200; ++q) {
      const auto p = uniform_point(s, region);
      std::uint64_t expect = 0;
      for (const auto& k : kept) expect += squared_distance(k, p) < r * r;
      ASSERT_EQ(index.count_near(p), expect);
    }
  }
}

TEST(ClosePairs, MatchesBruteForce) {
  auto m = tiny();
  m.region = Region(6.0, 6.0);
  ReadOnceStream s(6);
  for (int i = 0; i < 200; ++i) {
    const auto c = poisson_point_process(s, 1.5, m.region);
    EXPECT_EQ(close_pairs(m, c), brute_pairs(c.points(), m.radius));
  }
}

TEST(DominatedSetRepr, Membership) {
  const Region reg(2, 2);
  const DominatedSetRepr repr{1, {{0.5, 0.5}}, {{1.0, 1.0}}};
  EXPECT_TRUE(contains(repr, PointConfiguration(reg, {{1.0, 1.0}})));
  EXPECT_TRUE(contains(repr, PointConfiguration(reg, {{1.0, 1.0}, {0.5, 0.5}, {0.2, 0.2}})));
  EXPECT_FALSE(contains(repr, PointConfiguration(reg, {{0.5, 0.5}})));
  EXPECT_FALSE(contains(repr, PointConfiguration(reg, {{1.0, 1.0}, {0.2, 0.2}, {0.3, 0.3}})));
  EXPECT_TRUE((DominatedSetRepr{0, {}, {{1, 1}}}.singleton()));
  EXPECT_FALSE((DominatedSetRepr{1, {}, {}}.singleton()));
}

TEST(FirstUpdate, PoissonCaseSetsKToProposalSize) {
  const auto m = tiny(1.0, 1.0);
  ReadOnceStream s(7);
  for (int i = 0; i < 500; ++i) {
    const auto out = mh_first_update(m, s);
    EXPECT_EQ(out.repr.k, out.proposal.size());
    EXPECT_TRUE(out.repr.delta.empty());
    EXPECT_TRUE(out.repr.lower.empty());
    EXPECT_FALSE(out.state.has_value());
  }
}

TEST(FirstUpdate, LargeInputIsReplaced) {
  const auto m = tiny(0.5, 0.5);
  ReadOnceStream s(8);
  std::vector<Point> many;
  for (int i = 0; i < 400; ++i) many.push_back({0.004 * i + 0.001, 0.004 * i + 0.002});
  const PointConfiguration input(m.region, many);
  for (int i = 0; i < 200; ++i) {
    const auto out = mh_first_update(m, s, std::optional<PointConfiguration>(input));
    ASSERT_LE(out.bound, 400.0);
    EXPECT_TRUE(out.accepted);
    ASSERT_TRUE(out.state.has_value());
    EXPECT_EQ(*out.state, out.proposal);
  }
}

TEST(FirstUpdate, WordsIndependentOfInput) {
  const auto m = tiny();
  ReadOnceStream a(9), b(9);
  for (int i = 0; i < 300; ++i) {
    const auto x = mh_first_update(m, a);
    const auto y = mh_first_update(m, b, std::optional<PointConfiguration>(PointConfiguration(m.region)));
    ASSERT_EQ(a.position(), b.position());
    ASSERT_EQ(x.proposal, y.proposal);
  }
}

TEST(FirstUpdate, PreservesStrausslaw) {
  // Feed oracle draws through the update; the output count law must match.
  const auto m = tiny(0.5, 0.5);
  verify::StraussRejectionOracle oracle(0.5, 0.5, 1.0, m.region, 10);
  ReadOnceStream s(11);
  std::vector<std::uint64_t> before, after;
  for (int i = 0; i < 20000; ++i) {
    const auto pts = oracle.draw();
    before.push_back(pts.size());
    const auto out = mh_first_update(m, s, std::optional<PointConfiguration>(PointConfiguration(m.region, pts)));
    after.push_back(out.state->size());
  }
  auto hb = verify::histogram(before), ha = verify::histogram(after);
  const auto width = std::max(hb.size(), ha.size());
  hb.resize(width, 0);
  ha.resize(width, 0);
  EXPECT_TRUE(verify::two_sample_chi_square(hb, ha).pass);
}

TEST(Dynamics, PureDeathThinsExponentially) {
  auto m = tiny(0.0, 0.5);  // no proposals
  m.region = Region(10, 10);
  ReadOnceStream s(12);
  std::vector<Point> lower;
  for (int i = 0; i < 20; ++i) lower.push_back({0.4 * i + 0.1, 0.3 * i + 0.2});
  const double t = 0.7;
  double survivors = 0.0;
  constexpr int kRuns = 10000;
  for (int i = 0; i < kRuns; ++i) {
    const auto out = birth_death_evolve(m, s, DominatedSetRepr{0, {}, lower}, t);
    for (const auto& p : out.repr.lower) {
      ASSERT_NE(std::find(lower.begin(), lower.end(), p), lower.end());
    }
    EXPECT_TRUE(out.repr.delta.empty());
    survivors += static_cast<double>(out.repr.lower.size());
  }
  const double p = std::exp(-t);
  const double mean = survivors / kRuns;
  const double sigma = std::sqrt(20.0 * p * (1 - p) / kRuns);
  EXPECT_LT(std::fabs(mean - 20.0 * p), 4.0 * sigma);
}

TEST(Dynamics, PoissonEquilibriumWhenGammaIsOne) {
  const auto m = tiny(1.0, 1.0);
  ReadOnceStream s(13);
  constexpr int kRuns = 10000;
  double total = 0.0;
  for (int i = 0; i < kRuns; ++i) {
    const auto out = birth_death_evolve(m, s, DominatedSetRepr{}, 15.0);
    EXPECT_TRUE(out.repr.delta.empty());
    total += static_cast<double>(out.repr.lower.size());
  }
  EXPECT_LT(std::fabs(total / kRuns - 4.0), 4.0 * std::sqrt(4.0 / kRuns));
}

TEST(Dynamics, PhaseOutTimeLaw) {
  ReadOnceStream s(14);
  std::vector<double> t;
  for (int i = 0; i < 10000; ++i) t.push_back(phase_out_time(s, 50));
  const auto r = verify::ks_test(t, [](double x) { return std::pow(-std::expm1(-x), 50.0); });
  EXPECT_TRUE(r.pass) << r.p_value;
  EXPECT_EQ(phase_out_time(s, 0), 0.0);
}

TEST(Dynamics, ShortcutMatchesExplicitPhaseOut) {
  const auto m = tiny(0.5, 0.5);
  EvolveOptions with, without;
  without.phase_out_shortcut = false;
  ReadOnceStream a(15), b(16);
  std::vector<double> ta, tb;
  for (int i = 0; i < 8000; ++i) {
    const auto fa = mh_first_update(m, a);
    ta.push_back(birth_death_evolve(m, a, fa.repr, std::nullopt, std::nullopt, with).result.elapsed);
    const auto fb = mh_first_update(m, b);
    tb.push_back(birth_death_evolve(m, b, fb.repr, std::nullopt, std::nullopt, without).result.elapsed);
  }
  EXPECT_TRUE(binned_two_sample(ta, tb).pass);
}

TEST(Dynamics, StateStaysInsideRepresentedSet) {
  StraussOptions opts;
  opts.evolve.check_sandwich = true;
  for (double gamma : {0.0, 0.3, 1.0}) {
    auto m = tiny(1.0, gamma);
    m.region = Region(3, 3);
    ReadOnceStream s(17);
    EXPECT_NO_THROW(sample_strauss(m, s, 100, opts)) << gamma;
  }
}

TEST(Dynamics, TrackStateRejectsOutsiders) {
  const auto m = tiny();
  DominatedDynamics dyn(m, DominatedSetRepr{1, {}, {{1.0, 1.0}}});
  EXPECT_THROW(dyn.track_state(PointConfiguration(m.region, {{0.5, 0.5}})), std::invalid_argument);
  EXPECT_THROW(dyn.track_state(PointConfiguration(m.region, {{1.0, 1.0}, {0.1, 0.1}, {0.2, 0.2}})),
               std::invalid_argument);
  EXPECT_THROW(dyn.state(), ContractViolation);
  EXPECT_NO_THROW(dyn.track_state(PointConfiguration(m.region, {{1.0, 1.0}, {0.1, 0.1}})));
}

TEST(Dynamics, EventCap) {
  auto m = tiny(2.0, 0.5);
  m.region = Region(20, 20);
  ReadOnceStream s(18);
  EvolveOptions opts;
  opts.max_events = 1000;
  const auto first = mh_first_update(m, s);
  EXPECT_THROW(birth_death_evolve(m, s, first.repr, std::nullopt, std::nullopt, opts), CapExceeded);
  EXPECT_THROW(birth_death_evolve(m, s, first.repr, -1.0), std::invalid_argument);
}

TEST(Composite, RoundTwoLastsExactlyRoundOne) {
  const auto m = tiny();
  ReadOnceStream s(19);
  PointConfiguration x(m.region);
  int flags = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto out = strauss_composite(m, s, x);
    EXPECT_EQ(out.round1_time, out.round2_time);
    EXPECT_EQ(out.outcome.maps_applied, 2 + out.round1_events + out.round2_events);
    flags += out.outcome.coalesced;
    x = out.outcome.state;
  }
  EXPECT_GE(flags, 2000 * 0.5 - 4.0 * std::sqrt(2000 * 0.25));
}

TEST(SampleStrauss, GammaOneIsPoisson) {
  const auto m = tiny(1.0, 1.0);
  ReadOnceStream s(20);
  const auto run = sample_strauss(m, s, 5000);
  std::vector<std::uint64_t> counts;
  for (const auto& c : run.samples) counts.push_back(c.size());
  auto h = verify::histogram(counts, 16);
  const auto cells = verify::poisson_cells(4.0, h.size());
  EXPECT_TRUE(verify::chi_square_gof(h, cells).pass);
  EXPECT_EQ(run.total_words, s.position());
}

TEST(SampleStrauss, MatchesRejectionOracle) {
  const auto m = tiny(0.5, 0.5);
  ReadOnceStream s(21);
  const auto run = sample_strauss(m, s, 5000);
  verify::StraussRejectionOracle oracle(0.5, 0.5, 1.0, m.region, 22);
  std::vector<std::uint64_t> a, b;
  for (const auto& c : run.samples) a.push_back(c.size());
  for (int i = 0; i < 50000; ++i) b.push_back(oracle.draw().size());
  auto ha = verify::histogram(a), hb = verify::histogram(b);
  const auto width = std::max(ha.size(), hb.size());
  ha.resize(width, 0);
  hb.resize(width, 0);
  EXPECT_LT(verify::tv_distance(verify::to_weights(ha), verify::to_weights(hb)), 0.03);
  EXPECT_TRUE(verify::two_sample_chi_square(ha, hb).pass);
}

TEST(SampleStrauss, HardCoreSamplesHaveNoClosePairs) {
  auto m = tiny(1.0, 0.0);
  m.region = Region(5, 5);
  ReadOnceStream s(23);
  const auto run = sample_strauss(m, s, 300);
  for (const auto& c : run.samples) EXPECT_EQ(brute_pairs(c.points(), 1.0), 0u);
  EXPECT_EQ(run.rejections, 0u);
}

TEST(SampleStrauss, Deterministic) {
  const auto m = tiny();
  ReadOnceStream a(24), b(24);
  EXPECT_EQ(sample_strauss(m, a, 50).samples, sample_strauss(m, b, 50).samples);
  EXPECT_EQ(a.position(), b.position());
  ReadOnceStream c(24);
  EXPECT_THROW(sample_strauss(m, c, 0), std::invalid_argument);
}

TEST(Render, CsvAndSvg) {
  const Region reg(4, 3);
  const std::vector<PointConfiguration> samples{
      PointConfiguration(reg, {{0.5, 0.25}, {3.5, 2.75}}), PointConfiguration(reg, {{1.0, 1.0}})};
  std::ostringstream csv;
  write_csv(csv, samples);
  EXPECT_EQ(csv.str(), "0,0.5,0.25\n0,3.5,2.75\n1,1,1\n");

  std::ostringstream svg;
  write_svg(svg, samples, reg, 1.0);
  const std::string doc = svg.str();
  EXPECT_EQ(doc.rfind("<?xml", 0), 0u);
  EXPECT_NE(doc.find("</svg>"), std::string::npos);
  const std::regex circle("<circle cx=\"([0-9.e-]+)\" cy=\"([0-9.e-]+)\" r=\"0.5\"");
  int n = 0;
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), circle); it != std::sregex_iterator();
       ++it) {
    const double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    EXPECT_TRUE(reg.contains({x, y}));
    ++n;
  }
  EXPECT_EQ(n, 3);
}
