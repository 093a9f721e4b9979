#pragma once

// Goodness-of-fit machinery. p-values use the asymptotic chi-square and
// Kolmogorov laws; cells are pooled until every expected count is >= 5.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace rocftp::verify {

inline constexpr double kDefaultAlpha = 0.001;

struct GofReport {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  std::uint64_t n = 0;
  double alpha = kDefaultAlpha;
  bool pass = true;
};

inline GofReport make_report(double statistic, double dof, double p,
                             std::uint64_t n, double alpha) {
  p = std::clamp(p, 0.0, 1.0);
  return {statistic, dof, p, n, alpha, p >= alpha};
}

/// Upper tail of the chi-square law with `dof` degrees of freedom.
inline double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

/// Kolmogorov survival function Q(t) = 2 sum (-1)^(k-1) exp(-2 k^2 t^2).
inline double kolmogorov_sf(double t) {
  if (t < 0.18) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Groups cell indices so every group's expectation is >= min_expected,
/// repeatedly merging the two smallest-expectation groups.
inline std::vector<std::vector<std::size_t>> pool_cells(
    const std::vector<double>& expected, double min_expected = 5.0) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<double> mass;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    groups.push_back({i});
    mass.push_back(expected[i]);
  }
  while (groups.size() >= 2) {
    std::size_t a = 0;
    for (std::size_t i = 1; i < mass.size(); ++i) {
      if (mass[i] < mass[a]) a = i;
    }
    if (mass[a] >= min_expected) break;
    std::size_t b = a == 0 ? 1 : 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (i != a && mass[i] < mass[b]) b = i;
    }
    groups[b].insert(groups[b].end(), groups[a].begin(), groups[a].end());
    mass[b] += mass[a];
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(a));
    mass.erase(mass.begin() + static_cast<std::ptrdiff_t>(a));
  }
  if (groups.size() < 2) {
    throw std::domain_error("fewer than 2 cells remain after pooling");
  }
  return groups;
}

/// Pearson goodness of fit of observed counts against probabilities.
inline GofReport chi_square_gof(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probabilities,
                                double alpha = kDefaultAlpha) {
  if (counts.size() != probabilities.size()) {
    throw std::invalid_argument("counts and probabilities differ in length");
  }
  const auto n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  std::vector<double> expected(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    expected[i] = static_cast<double>(n) * probabilities[i];
  }
  const auto groups = pool_cells(expected);
  double stat = 0.0;
  for (const auto& g : groups) {
    double obs = 0.0, exp = 0.0;
    for (auto i : g) {
      obs += static_cast<double>(counts[i]);
      exp += expected[i];
    }
    if (exp > 0.0) {
      stat += (obs - exp) * (obs - exp) / exp;
    } else if (obs > 0.0) {
      stat = INFINITY;
    }
  }
  const double dof = static_cast<double>(groups.size() - 1);
  const double p = std::isinf(stat) ? 0.0 : chi_square_sf(stat, dof);
  return make_report(stat, dof, p, n, alpha);
}

/// Two-sample chi-square homogeneity test on aligned count vectors.
inline GofReport two_sample_chi_square(const std::vector<std::uint64_t>& a,
                                       const std::vector<std::uint64_t>& b,
                                       double alpha = kDefaultAlpha) {
  if (a.size() != b.size()) throw std::invalid_argument("count vectors differ in length");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
  if (na == 0.0 || nb == 0.0) throw std::domain_error("empty sample");
  std::vector<double> expected(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    expected[i] = std::min(na, nb) * static_cast<double>(a[i] + b[i]) / (na + nb);
  }
  const auto groups = pool_cells(expected);
  double stat = 0.0;
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  for (const auto& g : groups) {
    double ga = 0.0, gb = 0.0;
    for (auto i : g) {
      ga += static_cast<double>(a[i]);
      gb += static_cast<double>(b[i]);
    }
    const double d = ka * ga - kb * gb;
    stat += d * d / (ga + gb);
  }
  const double dof = static_cast<double>(groups.size() - 1);
  return make_report(stat, dof, chi_square_sf(stat, dof),
                     static_cast<std::uint64_t>(na + nb), alpha);
}

/// Independence test on an r x c contingency table (row-major). Rows and
/// columns with zero total are dropped.
inline GofReport independence_chi_square(const std::vector<std::uint64_t>& table,
                                         std::size_t rows, std::size_t cols,
                                         double alpha = kDefaultAlpha) {
  if (table.size() != rows * cols) throw std::invalid_argument("table shape mismatch");
  std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
  double n = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<double>(table[r * cols + c]);
      rsum[r] += v;
      csum[c] += v;
      n += v;
    }
  }
  double stat = 0.0;
  std::size_t live_r = 0, live_c = 0;
  for (double v : rsum) live_r += v > 0.0 ? 1 : 0;
  for (double v : csum) live_c += v > 0.0 ? 1 : 0;
  if (live_r < 2 || live_c < 2) throw std::domain_error("degenerate contingency table");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (rsum[r] == 0.0 || csum[c] == 0.0) continue;
      const double e = rsum[r] * csum[c] / n;
      const double d = static_cast<double>(table[r * cols + c]) - e;
      stat += d * d / e;
    }
  }
  const double dof = static_cast<double>((live_r - 1) * (live_c - 1));
  return make_report(stat, dof, chi_square_sf(stat, dof), static_cast<std::uint64_t>(n),
                     alpha);
}

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
inline GofReport ks_test(std::vector<double> samples,
                         const std::function<double(double)>& cdf,
                         double alpha = kDefaultAlpha) {
  if (samples.empty()) throw std::domain_error("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  const double p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d);
  return make_report(d, 0.0, p, samples.size(), alpha);
}

/// Total variation distance between two distributions given as weights
/// (each normalised to sum 1).
inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in length");
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::fabs(p[i] / sp - q[i] / sq);
  return 0.5 * tv;
}

inline std::vector<double> to_weights(const std::vector<std::uint64_t>& counts) {
  return {counts.begin(), counts.end()};
}

/// Histogram of small non-negative integers, widened to `min_bins`.
template <class Range>
std::vector<std::uint64_t> histogram(const Range& values, std::size_t min_bins = 0) {
  std::vector<std::uint64_t> h(min_bins, 0);
  for (const auto& v : values) {
    const auto i = static_cast<std::size_t>(v);
    if (i >= h.size()) h.resize(i + 1, 0);
    ++h[i];
  }
  return h;
}

}  // namespace rocftp::verify
