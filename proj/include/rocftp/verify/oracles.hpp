#pragma once

// Brute-force oracles. None of these share sampling code with the engines
// they check: laws are enumerated directly, and the Strauss oracle draws
// from the standard library's generator.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/poisson.hpp>

#include "rocftp/chains/finite_map_chain.hpp"
#include "rocftp/ciaftp.hpp"
#include "rocftp/geometry.hpp"

namespace rocftp::verify {

/// Law of the forward simulation stopped at coalescence (the biased order),
/// by enumerating map sequences until less than `tolerance` mass is left.
inline std::vector<double> biased_forward_law(const chains::FiniteMapChain& chain,
                                              double tolerance = 1e-15,
                                              int max_depth = 10'000) {
  const auto& maps = chain.maps();
  const auto& weights = chain.weights();
  const double total = static_cast<double>(
      std::accumulate(weights.begin(), weights.end(), std::uint64_t{0}));
  const std::size_t n = chain.num_states();
  std::vector<double> law(n, 0.0);

  using Fn = std::vector<int>;
  Fn id(n);
  std::iota(id.begin(), id.end(), 0);
  std::map<Fn, double> live{{id, 1.0}};
  for (int depth = 0; depth < max_depth && !live.empty(); ++depth) {
    std::map<Fn, double> next;
    double remaining = 0.0;
    for (const auto& [f, mass] : live) {
      for (std::size_t m = 0; m < maps.size(); ++m) {
        Fn g(n);
        for (std::size_t x = 0; x < n; ++x) g[x] = maps[m][static_cast<std::size_t>(f[x])];
        const double p = mass * static_cast<double>(weights[m]) / total;
        if (std::all_of(g.begin(), g.end(), [&](int v) { return v == g[0]; })) {
          law[static_cast<std::size_t>(g[0])] += p;
        } else {
          next[g] += p;
          remaining += p;
        }
      }
    }
    live.swap(next);
    if (remaining < tolerance) break;
  }
  return law;
}

/// Every rooted spanning tree of a small graph, by checking all
/// (n-1)-edge subsets and orienting each tree toward every root.
inline std::vector<ciaftp::RootedTree> rooted_spanning_trees(const ciaftp::Graph& g) {
  const int n = g.size();
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v : g.neighbours(u)) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  if (edges.size() > 24) throw std::length_error("too many edges to enumerate");
  std::vector<ciaftp::RootedTree> out;
  if (n == 1) {
    out.push_back({0, {-1}});
    return out;
  }
  const std::uint32_t limit = std::uint32_t{1} << edges.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) != n - 1) continue;
    std::vector<int> comp(static_cast<std::size_t>(n));
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int x) {
      while (comp[static_cast<std::size_t>(x)] != x) x = comp[static_cast<std::size_t>(x)];
      return x;
    };
    bool acyclic = true;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!(mask >> e & 1U)) continue;
      const auto [u, v] = edges[e];
      const int a = find(u), b = find(v);
      if (a == b) {
        acyclic = false;
        break;
      }
      comp[static_cast<std::size_t>(a)] = b;
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    if (!acyclic) continue;
    for (int root = 0; root < n; ++root) {
      ciaftp::RootedTree t{root, std::vector<int>(static_cast<std::size_t>(n), -1)};
      std::vector<int> stack{root};
      std::vector<bool> seen(static_cast<std::size_t>(n), false);
      seen[static_cast<std::size_t>(root)] = true;
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(u)]) {
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = true;
            t.parent[static_cast<std::size_t>(v)] = u;
            stack.push_back(v);
          }
        }
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

/// Output law of the alternating toy under coupling from the past, by
/// walking the stationary reference chain backwards from time 0 to the most
/// recent coalescent composite and pushing the law of the composed map
/// forward. Returns {P(0), P(1)}.
inline std::vector<double> toy_output_law(const ciaftp::AlternatingToy& toy) {
  std::vector<double> law(2, 0.0);
  for (int x0 = 0; x0 < 2; ++x0) {
    // Reference states of composites f_{-1}, f_{-2}, ... are obtained by
    // stepping the reversed reference chain.
    std::vector<int> refs;
    int x = x0;
    for (int s = 1; s <= 64; ++s) {
      x = toy.reverse_reference(x);
      refs.push_back(x);
      if (x == 1) break;
    }
    if (refs.back() != 1) throw std::logic_error("toy never coalesces");
    // The oldest composite is a constant map; younger ones are identity or swap.
    std::vector<double> dist{1.0 - toy.to_one, toy.to_one};
    for (std::size_t i = refs.size() - 1; i-- > 0;) {
      dist = {toy.identity * dist[0] + (1.0 - toy.identity) * dist[1],
              toy.identity * dist[1] + (1.0 - toy.identity) * dist[0]};
    }
    law[0] += 0.5 * dist[0];
    law[1] += 0.5 * dist[1];
  }
  return law;
}

/// Gap S back to the most recent coalescent composite, simulated by running
/// the toy's reference chain backwards from a stationary start.
inline std::uint64_t toy_backward_gap(const ciaftp::AlternatingToy& toy, std::mt19937_64& rng) {
  int x = std::uniform_int_distribution<int>(0, 1)(rng);
  for (std::uint64_t s = 1;; ++s) {
    x = toy.reverse_reference(x);
    if (x == 1) return s;
  }
}

/// Plain rejection sampler for the Strauss process: Poisson(lambda) points
/// accepted with probability gamma^(close pairs).
class StraussRejectionOracle {
 public:
  StraussRejectionOracle(double lambda, double gamma, double radius, Region region,
                         std::uint64_t seed)
      : lambda_(lambda), gamma_(gamma), r2_(radius * radius), region_(region), rng_(seed) {}

  std::vector<Point> draw() {
    std::poisson_distribution<int> count(lambda_ * region_.area());
    std::uniform_real_distribution<double> ux(0.0, region_.width), uy(0.0, region_.height);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (;;) {
      std::vector<Point> pts(static_cast<std::size_t>(count(rng_)));
      for (auto& p : pts) p = {ux(rng_), uy(rng_)};
      int pairs = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
          if (dx * dx + dy * dy < r2_) ++pairs;
        }
      }
      ++attempts_;
      if (coin(rng_) < std::pow(gamma_, pairs)) return pts;
    }
  }

  std::uint64_t attempts() const { return attempts_; }

 private:
  double lambda_, gamma_, r2_;
  Region region_;
  std::mt19937_64 rng_;
  std::uint64_t attempts_ = 0;
};

/// Poisson(mean) probabilities for 0..max_count-1, the last cell taking the
/// upper tail.
inline std::vector<double> poisson_cells(double mean, std::size_t num_cells) {
  boost::math::poisson_distribution<double> law(mean);
  std::vector<double> p(num_cells);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < num_cells; ++i) {
    p[i] = boost::math::pdf(law, static_cast<double>(i));
    acc += p[i];
  }
  p.back() = 1.0 - acc;
  return p;
}

}  // namespace rocftp::verify
