#pragma once

// Cost comparison of the three engines on one chain: maps, updates and
// stream words per sample, against the measured mean coalescence time of a
// from-scratch composition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rocftp/core.hpp"
#include "rocftp/engines.hpp"
#include "rocftp/stream.hpp"

namespace rocftp::verify {

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

template <class T>
Summary summarize(std::vector<T> v) {
  Summary s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  double total = 0.0;
  for (const auto& x : v) total += static_cast<double>(x);
  s.mean = total / static_cast<double>(v.size());
  auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
    return static_cast<double>(v[std::min(idx, v.size() - 1)]);
  };
  s.median = quantile(0.5);
  s.p99 = quantile(0.99);
  s.max = static_cast<double>(v.back());
  return s;
}

/// T_N estimate: mean number of maps until the composed map of a run of
/// compose_into_the_past is constant.
template <FiniteChain C>
double estimate_coalescence_time(const C& chain, std::uint64_t seed, std::uint64_t runs = 1000) {
  ReadOnceStream stream(seed);
  double total = 0.0;
  for (std::uint64_t i = 0; i < runs; ++i) {
    total += static_cast<double>(compose_into_the_past(chain, stream).maps_applied);
  }
  return total / static_cast<double>(runs);
}

struct BenchRow {
  std::string engine;
  Summary maps;
  Summary updates;  // set plus state updates
  double words_per_sample = 0.0;
  std::uint64_t rereads = 0;
  bool positions_monotone = true;
};

struct BenchTable {
  std::string chain;
  double t_hat = 0.0;
  std::uint64_t samples = 0;
  std::vector<BenchRow> rows;
};

/// One row per engine: compose_into_the_past, binary-backoff and read-once
/// with the given composite variant.
template <FiniteChain C>
BenchTable performance_harness(const C& chain, std::string chain_name, std::uint64_t samples,
                               std::uint64_t seed, CompositeVariant variant,
                               const EngineOptions& opts = {}) {
  BenchTable table;
  table.chain = std::move(chain_name);
  table.samples = samples;
  SplitMix64 seeds(seed);
  table.t_hat = estimate_coalescence_time(chain, seeds());

  {
    ReadOnceStream stream(seeds());
    std::vector<std::uint64_t> maps;
    for (std::uint64_t i = 0; i < samples; ++i) {
      maps.push_back(compose_into_the_past(chain, stream).maps_applied);
    }
    BenchRow row{"citp", summarize(maps), summarize(maps), 0.0, 0, true};
    row.words_per_sample = static_cast<double>(stream.position()) / static_cast<double>(samples);
    table.rows.push_back(row);
  }
  {
    const auto r = binary_backoff_cftp(chain, SeedTable(seeds()), samples, opts);
    std::vector<std::uint64_t> updates(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      updates[i] = r.per_sample_set_updates[i] + r.per_sample_state_updates[i];
    }
    BenchRow row{"binary-backoff", summarize(r.per_sample_maps), summarize(updates), 0.0,
                 r.reread_words, true};
    row.words_per_sample = static_cast<double>(r.total_words) / static_cast<double>(samples);
    table.rows.push_back(row);
  }
  {
    ReadOnceStream stream(seeds());
    const auto r = read_once_cftp(chain, stream, variant, samples, opts);
    std::vector<std::uint64_t> updates(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      updates[i] = r.per_sample_set_updates[i] + r.per_sample_state_updates[i];
    }
    BenchRow row{"read-once/" + std::string(to_string(variant)), summarize(r.per_sample_maps),
                 summarize(updates), 0.0, 0, true};
    row.words_per_sample = static_cast<double>(r.total_words) / static_cast<double>(samples);
    row.positions_monotone =
        std::adjacent_find(r.stream_positions.begin(), r.stream_positions.end(),
                           std::greater_equal<>()) == r.stream_positions.end();
    table.rows.push_back(row);
  }
  return table;
}

inline void print_table(std::ostream& out, const BenchTable& t) {
  std::ostringstream s;
  s << "chain " << t.chain << ", " << t.samples << " samples, T_N estimate " << std::fixed
    << std::setprecision(2) << t.t_hat << "\n";
  s << std::left << std::setw(26) << "engine" << std::right << std::setw(11) << "maps/mean"
    << std::setw(11) << "maps/med" << std::setw(11) << "maps/p99" << std::setw(11) << "maps/T_N"
    << std::setw(12) << "upd/mean" << std::setw(11) << "upd/T_N" << std::setw(12) << "words/smp"
    << std::setw(12) << "rereads" << "\n";
  for (const auto& r : t.rows) {
    s << std::left << std::setw(26) << r.engine << std::right << std::setw(11) << r.maps.mean
      << std::setw(11) << r.maps.median << std::setw(11) << r.maps.p99 << std::setw(11)
      << r.maps.mean / t.t_hat << std::setw(12) << r.updates.mean << std::setw(11)
      << r.updates.mean / t.t_hat << std::setw(12) << r.words_per_sample << std::setw(12)
      << r.rereads << "\n";
  }
  out << s.str();
}

inline void write_table_csv(std::ostream& out, const BenchTable& t) {
  std::ostringstream s;
  s << std::setprecision(10);
  s << "chain,engine,samples,t_hat,maps_mean,maps_median,maps_p99,updates_mean,"
       "updates_median,updates_p99,words_per_sample,rereads\n";
  for (const auto& r : t.rows) {
    s << t.chain << ',' << r.engine << ',' << t.samples << ',' << t.t_hat << ',' << r.maps.mean
      << ',' << r.maps.median << ',' << r.maps.p99 << ',' << r.updates.mean << ','
      << r.updates.median << ',' << r.updates.p99 << ',' << r.words_per_sample << ','
      << r.rereads << '\n';
  }
  out << s.str();
}

}  // namespace rocftp::verify
