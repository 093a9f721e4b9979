#pragma once

// Coupling into and from the past. Two pieces:
//  * the random-walk spanning tree sampler, which composes its overwriting
//    maps backwards in time and so reads its stream once natively;
//  * the general read-once procedure (count composites to the first
//    coalescent one, then rejection-sample a run of that length whose only
//    coalescent composite is the first), demonstrated on a bounded toy.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/stream.hpp"

namespace rocftp::ciaftp {

/// Undirected simple graph on vertices 0..n-1.
class Graph {
 public:
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {
    if (n < 1) throw std::invalid_argument("graph needs >= 1 vertex");
  }

  void add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= size() || v >= size()) {
      throw std::out_of_range("edge endpoint out of range");
    }
    if (u == v) throw std::invalid_argument("self loops are not supported");
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
    ++edges_;
  }

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<int>& neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  std::size_t degree(int v) const { return neighbours(v).size(); }

  bool has_edge(int u, int v) const {
    for (int w : neighbours(u)) {
      if (w == v) return true;
    }
    return false;
  }

  static Graph path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }
  static Graph cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
    Graph g = path(n);
    g.add_edge(n - 1, 0);
    return g;
  }
  static Graph complete(int n) {
    Graph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    }
    return g;
  }

  /// One "u v" pair per line, 0-indexed. Blank lines and '#' comments are
  /// skipped. Vertex count is one more than the largest index.
  static Graph from_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int max_vertex = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      int u, v;
      if (!(ls >> u)) continue;
      std::string rest;
      if (!(ls >> v) || (ls >> rest)) {
        throw std::invalid_argument("edge list line " + std::to_string(line_no) +
                                    ": expected \"u v\"");
      }
      edges.emplace_back(u, v);
      max_vertex = std::max({max_vertex, u, v});
    }
    if (max_vertex < 0) throw std::invalid_argument("edge list is empty");
    Graph g(max_vertex + 1);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  /// path:N, cycle:N, complete:N or file:PATH
  static Graph parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("graph spec needs kind:arg");
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (kind == "file") {
      std::ifstream in(arg);
      if (!in) throw std::invalid_argument("cannot open edge list " + arg);
      return from_edge_list(in);
    }
    const int n = std::stoi(arg);
    if (kind == "path") return path(n);
    if (kind == "cycle") return cycle(n);
    if (kind == "complete") return complete(n);
    throw std::invalid_argument("unknown graph kind " + kind);
  }

 private:
  std::vector<std::vector<int>> adj_;
  std::size_t edges_ = 0;
};

/// Spanning tree oriented toward `root`; parent[root] == -1.
struct RootedTree {
  int root = 0;
  std::vector<int> parent;

  friend bool operator==(const RootedTree&, const RootedTree&) = default;

  /// Every non-root vertex has a neighbouring parent and following parents
  /// reaches the root.
  bool is_valid(const Graph& g) const {
    const int n = g.size();
    if (static_cast<int>(parent.size()) != n || root < 0 || root >= n) return false;
    if (parent[static_cast<std::size_t>(root)] != -1) return false;
    for (int v = 0; v < n; ++v) {
      int cur = v;
      for (int steps = 0; cur != root; ++steps) {
        const int p = parent[static_cast<std::size_t>(cur)];
        if (steps > n || p < 0 || !g.has_edge(cur, p)) return false;
        cur = p;
      }
    }
    return true;
  }
};

struct TreeOptions {
  std::uint64_t max_steps = 10'000'000;
  int max_vertices = 1000;
};

/// Random rooted spanning tree. The root is drawn with probability
/// proportional to degree (the walk's stationary law); the walk then runs
/// backwards in time and each vertex's parent is fixed at its first visit,
/// i.e. the last exit before time 0. Untouched parts are never overwritten.
template <WordSource S>
RootedTree aldous_broder_tree(const Graph& g, S& stream, const TreeOptions& opts = {}) {
  const int n = g.size();
  if (n > opts.max_vertices) throw std::invalid_argument("graph too large for tree sampler");
  RootedTree tree;
  tree.parent.assign(static_cast<std::size_t>(n), -1);
  if (n == 1) return tree;
  if (g.edge_count() == 0) throw CapExceeded("tree walk max_steps (graph has no edges)", 0);

  auto half_edge = uniform_int(stream, 2 * g.edge_count());
  int root = 0;
  while (half_edge >= g.degree(root)) half_edge -= g.degree(root++);
  tree.root = root;

  std::vector<bool> touched(static_cast<std::size_t>(n), false);
  touched[static_cast<std::size_t>(root)] = true;
  int remaining = n - 1;
  int current = root;
  std::uint64_t steps = 0;
  while (remaining > 0) {
    if (steps++ == opts.max_steps) throw CapExceeded("tree walk max_steps", opts.max_steps);
    const auto& nb = g.neighbours(current);
    const int next = nb[uniform_int(stream, nb.size())];
    if (!touched[static_cast<std::size_t>(next)]) {
      touched[static_cast<std::size_t>(next)] = true;
      tree.parent[static_cast<std::size_t>(next)] = current;
      --remaining;
    }
    current = next;
  }
  return tree;
}

// ---------------------------------------------------------------------------
// General read-once CIAFTP

/// A reference chain paired with ex-post-facto coupled composite maps of the
/// target chain. random_composite advances the reference state X, applies
/// the composite to State and reports official coalescence.
template <class P>
concept CiaftpPair = requires(const P& p, ReadOnceStream& s, typename P::Reference& x,
                              typename P::State& st) {
  typename P::Reference;
  typename P::State;
  { p.reference_random_state(s) } -> std::same_as<typename P::Reference>;
  { p.arbitrary_state(x) } -> std::same_as<typename P::State>;
  { p.random_composite(s, x, st) } -> std::convertible_to<bool>;
};

template <class State>
struct CiaftpResult {
  State state{};
  std::uint64_t length = 0;             // composites in the accepted run
  std::uint64_t composite_calls = 0;    // including rejected attempts
  std::uint64_t rejection_attempts = 0;
};

struct CiaftpOptions {
  std::uint64_t max_composite_calls = 1'000'000;
};

/// Expected running time is infinite unless the gap law has bounded
/// support; the call cap turns a runaway run into CapExceeded.
template <CiaftpPair P>
CiaftpResult<typename P::State> read_once_ciaftp(const P& pair, ReadOnceStream& stream,
                                                 const CiaftpOptions& opts = {}) {
  ReadOnceScope scope(stream);
  CiaftpResult<typename P::State> result;
  auto composite = [&](typename P::Reference& x, typename P::State& st) {
    if (result.composite_calls == opts.max_composite_calls) {
      throw CapExceeded("ciaftp max_composite_calls", opts.max_composite_calls);
    }
    ++result.composite_calls;
    return static_cast<bool>(pair.random_composite(stream, x, st));
  };

  std::uint64_t length = 0;
  {
    auto x = pair.reference_random_state(stream);
    auto st = pair.arbitrary_state(x);
    bool flag = false;
    do {
      flag = composite(x, st);
      ++length;
    } while (!flag);
  }
  result.length = length;

  for (;;) {
    ++result.rejection_attempts;
    auto x = pair.reference_random_state(stream);
    auto st = pair.arbitrary_state(x);
    if (!composite(x, st)) continue;
    bool rejected = false;
    for (std::uint64_t c = 2; c <= length; ++c) {
      if (composite(x, st)) {
        rejected = true;
        break;
      }
    }
    if (rejected) continue;
    result.state = std::move(st);
    return result;
  }
}

/// Bounded toy pair. The reference chain on {0, 1} flips deterministically
/// (stationary law uniform, its own time reversal). A composite started at
/// X = 1 is a constant map to 1 with probability `to_one`, else to 0, and is
/// coalescent; at X = 0 it is the identity with probability `identity`, else
/// the swap, and is not coalescent. The gap between coalescent composites is
/// therefore 1 or 2.
struct AlternatingToy {
  using Reference = int;
  using State = int;

  double to_one = 0.3;
  double identity = 0.25;

  template <WordSource S>
  Reference reference_random_state(S& s) const {
    return static_cast<int>(uniform_int(s, 2));
  }
  Reference reverse_reference(Reference x) const { return 1 - x; }
  State arbitrary_state(const Reference&) const { return 0; }

  /// One word per call whatever the input.
  template <WordSource S>
  bool random_composite(S& s, Reference& x, State& st) const {
    const double u = uniform01(s);
    const bool coalescent = x == 1;
    if (coalescent) {
      st = u < to_one ? 1 : 0;
    } else if (u >= identity) {
      st = 1 - st;
    }
    x = 1 - x;
    return coalescent;
  }
};

}  // namespace rocftp::ciaftp
