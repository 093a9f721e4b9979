#pragma once

// Verification suites. Every test draws from a seed derived from the master
// seed and its own name, so records are reproducible one by one and the
// serialized report of a re-run is byte-identical.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "rocftp/chains/exact.hpp"
#include "rocftp/chains/finite_map_chain.hpp"
#include "rocftp/chains/ising.hpp"
#include "rocftp/chains/lazy_walk.hpp"
#include "rocftp/chains/sort_chain.hpp"
#include "rocftp/ciaftp.hpp"
#include "rocftp/core.hpp"
#include "rocftp/engines.hpp"
#include "rocftp/strauss/render.hpp"
#include "rocftp/strauss/sampler.hpp"
#include "rocftp/verify/harness.hpp"
#include "rocftp/verify/oracles.hpp"
#include "rocftp/verify/stats.hpp"

namespace rocftp::verify {

struct TestRecord {
  std::string name;
  int criterion = 0;  // acceptance criterion the record belongs to
  double statistic = 0.0;
  std::optional<double> p_value;
  bool pass = false;
  std::string detail;
};

struct SuiteConfig {
  std::uint64_t seed = 7;
  /// Multiplies every sample size; 1 is the acceptance scale.
  double scale = 1.0;
  /// Run the full-size 20 x 20 point process renders.
  bool large_strauss = true;
  std::uint64_t large_max_events = 2'000'000'000;
  /// Where renders are written; empty keeps them in memory only.
  std::string artifact_dir;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  SplitMix64 mix(master ^ h);
  return mix();
}

inline nlohmann::ordered_json to_json(const std::vector<TestRecord>& records) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["test_name"] = r.name;
    j["criterion"] = r.criterion;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value ? nlohmann::ordered_json(*r.p_value) : nlohmann::ordered_json();
    j["verdict"] = r.pass ? "pass" : "fail";
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

class Suite {
 public:
  explicit Suite(SuiteConfig cfg) : cfg_(std::move(cfg)) {}

  const std::vector<TestRecord>& records() const { return records_; }
  /// Rendered SVG documents, in run order.
  const std::vector<std::string>& artifacts() const { return artifacts_; }

  bool all_pass() const {
    for (const auto& r : records_) {
      if (!r.pass) return false;
    }
    return true;
  }

  void run(std::string_view suite) {
    if (suite == "exactness" || suite == "all") run_exactness();
    if (suite == "performance" || suite == "all") run_performance();
    if (suite == "ciaftp" || suite == "all") run_ciaftp();
    if (suite == "strauss" || suite == "all") run_strauss();
    if (suite != "exactness" && suite != "performance" && suite != "ciaftp" &&
        suite != "strauss" && suite != "all") {
      throw std::invalid_argument("unknown suite " + std::string(suite));
    }
    finish_enforcement();
  }

  void run_exactness() {
    chain_exactness();
    negative_control();
    composite_contract();
    successive_independence();
  }

  void run_performance() {
    performance_constants();
    tail_behaviour();
  }

  void run_ciaftp() {
    spanning_trees();
    ciaftp_toy();
  }

  void run_strauss() {
    strauss_poisson_reduction();
    strauss_vs_oracle();
    strauss_phase_out_law();
    strauss_composite_properties();
    if (cfg_.large_strauss) strauss_large_renders();
  }

  /// Criterion 1 and 2: read-once with every composite variant against the
  /// exact stationary law, and read-once against binary-backoff.
  void chain_exactness() {
    const auto n = count(100'000);
    check_chain(chains::LazyWalk(11), "lazy_walk_11", n);
    check_chain(chains::SortChain(4), "sort_4", n);
    check_chain(chains::IsingHeatBath(2, 0.3), "ising_2x2", n);

    // Coupling into the past on a tiny chain.
    chains::LazyWalk w3(3);
    ReadOnceStream s(seed("citp_lazy_walk_3"));
    std::vector<std::uint64_t> counts(3, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(compose_into_the_past(w3, s).state)];
    add_gof("citp_lazy_walk_3_vs_exact", 1, chi_square_gof(counts, chains::exact_stationary(w3)));
  }

  /// Criterion 3.
  void negative_control() {
    const auto chain = chains::FiniteMapChain::asymmetric_two_state();
    const auto pi = chains::exact_stationary(chain);
    const auto biased_law = biased_forward_law(chain);
    const auto n = count(100'000);
    std::vector<std::uint64_t> correct(2, 0), biased(2, 0);
    {
      ReadOnceStream s(seed("citp_correct_order"));
      for (std::uint64_t i = 0; i < n; ++i) ++correct[static_cast<std::size_t>(compose_into_the_past(chain, s).state)];
    }
    {
      ReadOnceStream s(seed("citp_reversed_order"));
      for (std::uint64_t i = 0; i < n; ++i) ++biased[static_cast<std::size_t>(compose_into_the_past_biased(chain, s).state)];
    }
    add_gof("citp_correct_order_vs_exact", 3, chi_square_gof(correct, pi));
    const auto rej = chi_square_gof(biased, pi);
    add({"citp_reversed_order_rejected", 3, rej.statistic, rej.p_value, rej.p_value < 1e-6,
         "pass means p < 1e-6"});
    add_gof("citp_reversed_order_vs_enumerated_biased_law", 3, chi_square_gof(biased, biased_law));
  }

  /// Criterion 4.
  void composite_contract() {
    const chains::LazyWalk walk(11);
    const auto n = count(100'000);
    std::vector<std::vector<std::uint64_t>> joint;
    for (auto variant : kVariants) {
      const std::string name = "composite_" + std::string(to_string(variant));
      ReadOnceStream s(seed(name));
      ReadOnceScope scope(s);
      std::vector<std::uint64_t> cells(22, 0);
      std::uint64_t coalesced = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto out = apply_composite_map(variant, walk, s, walk.canonical_state());
        coalesced += out.coalesced ? 1 : 0;
        ++cells[static_cast<std::size_t>(out.state + (out.coalesced ? 11 : 0))];
      }
      const double frac = static_cast<double>(coalesced) / static_cast<double>(n);
      const double floor = 0.5 - 4.0 * std::sqrt(0.25 / static_cast<double>(n));
      add({name + "_coalescence_fraction", 4, frac, std::nullopt, frac >= floor,
           "threshold " + fmt(floor)});
      joint.push_back(std::move(cells));
    }
    add_gof("composite_interleaved_vs_memory_joint_law", 4,
            two_sample_chi_square(joint[0], joint[1]));
  }

  /// Criterion 8: consecutive outputs form an independent pair.
  void successive_independence() {
    const chains::LazyWalk walk(11);
    const auto pairs = count(100'000);
    ReadOnceStream s(seed("successive_independence"));
    const auto r = audited(s, [&] {
      return read_once_cftp(walk, s, CompositeVariant::kInterleaved, 2 * pairs);
    });
    std::vector<std::uint64_t> table(121, 0);
    for (std::uint64_t i = 0; i < pairs; ++i) {
      ++table[static_cast<std::size_t>(r.samples[2 * i] * 11 + r.samples[2 * i + 1])];
    }
    add_gof("successive_samples_independent", 8, independence_chi_square(table, 11, 11));
  }

  /// Criterion 5 and the measured constants.
  void performance_constants() {
    const chains::LazyWalk walk(11);
    const auto n = count(100'000);
    const double t_hat = estimate_coalescence_time(walk, seed("t_hat_lazy_walk_11"));
    add({"t_hat_lazy_walk_11", 5, t_hat, std::nullopt, t_hat > 0.0,
         "mean maps over 1000 coupling-into-the-past runs"});
    for (auto variant : kVariants) {
      const std::string name = "read_once_cost_" + std::string(to_string(variant));
      ReadOnceStream s(seed(name));
      const auto r = audited(s, [&] { return read_once_cftp(walk, s, variant, n); });
      std::vector<std::uint64_t> updates(n);
      for (std::size_t i = 0; i < n; ++i) {
        updates[i] = r.per_sample_set_updates[i] + r.per_sample_state_updates[i];
      }
      const double maps = summarize(r.per_sample_maps).mean / t_hat;
      const double upd = summarize(updates).mean / t_hat;
      add({name + "_maps_per_t_hat", 5, maps, std::nullopt, maps >= 2.0 && maps <= 5.0,
           "range [2, 5]"});
      add({name + "_updates_per_t_hat", 5, upd, std::nullopt, upd <= 6.0 * 1.25, "bound 7.5"});
    }
    const auto b = audited_backoff(
        [&] { return binary_backoff_cftp(walk, SeedTable(seed("backoff_cost")), n); });
    const double bmaps = summarize(b.per_sample_maps).mean / t_hat;
    add({"binary_backoff_maps_per_t_hat", 5, bmaps, std::nullopt, bmaps >= 2.0 && bmaps <= 4.5,
         "range [2, 4.5]"});
  }

  /// Criterion 7: survival of maps-per-sample beyond its mean, per T_N step.
  void tail_behaviour() {
    const chains::LazyWalk walk(11);
    const auto n = count(100'000);
    const double t_hat = estimate_coalescence_time(walk, seed("t_hat_tail"));
    ReadOnceStream s(seed("tail_behaviour"));
    const auto r = audited(
        s, [&] { return read_once_cftp(walk, s, CompositeVariant::kInterleaved, n); });
    auto maps = r.per_sample_maps;
    std::sort(maps.begin(), maps.end());
    auto survivors = [&](double m) {
      return static_cast<double>(maps.end() - std::upper_bound(maps.begin(), maps.end(),
                                                                static_cast<std::uint64_t>(m)));
    };
    const double start = summarize(maps).mean;
    double end = start;
    while (survivors(end + t_hat) >= 100.0) end += t_hat;
    const double steps = (end - start) / t_hat;
    const double factor =
        steps > 0 ? std::pow(survivors(start) / survivors(end), 1.0 / steps) : 0.0;
    add({"tail_decay_per_t_hat", 7, factor, std::nullopt, steps >= 1 && factor >= 1.5,
         "window " + fmt(start) + ".." + fmt(end) + " maps, " + fmt(steps) +
             " steps, threshold 1.5"});
  }

  /// Criterion 9, first part.
  void spanning_trees() {
    const auto g = ciaftp::Graph::complete(4);
    const auto trees = rooted_spanning_trees(g);
    const auto n = count(100'000);
    ReadOnceStream s(seed("aldous_broder_k4"));
    std::vector<std::uint64_t> counts(trees.size(), 0);
    bool valid = true;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto t = ciaftp::aldous_broder_tree(g, s);
      valid = valid && t.is_valid(g);
      const auto it = std::find(trees.begin(), trees.end(), t);
      if (it == trees.end()) {
        valid = false;
        continue;
      }
      ++counts[static_cast<std::size_t>(it - trees.begin())];
    }
    add({"aldous_broder_k4_trees_valid", 9, static_cast<double>(trees.size()), std::nullopt,
         valid && trees.size() == 64, "64 rooted spanning trees"});
    add_gof("aldous_broder_k4_uniform", 9,
            chi_square_gof(counts, std::vector<double>(trees.size(), 1.0 / trees.size())));
  }

  /// Criterion 9, second part.
  void ciaftp_toy() {
    const ciaftp::AlternatingToy toy;
    const auto n = count(100'000);
    ReadOnceStream s(seed("ciaftp_toy"));
    std::vector<std::uint64_t> states(2, 0), lengths(3, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto r = ciaftp::read_once_ciaftp(toy, s);
      ++states[static_cast<std::size_t>(r.state)];
      ++lengths[std::min<std::size_t>(r.length, 2)];
    }
    add_gof("ciaftp_toy_output_vs_oracle", 9, chi_square_gof(states, toy_output_law(toy)));

    std::mt19937_64 rng(seed("ciaftp_toy_backward_gap"));
    std::vector<std::uint64_t> gaps(3, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++gaps[std::min<std::size_t>(toy_backward_gap(toy, rng), 2)];
    add_gof("ciaftp_toy_length_vs_backward_gap", 9,
            two_sample_chi_square({lengths[1], lengths[2]}, {gaps[1], gaps[2]}));
  }

  /// Criterion 10(a).
  void strauss_poisson_reduction() {
    strauss::StraussModel m;
    m.lambda = 1.0;
    m.gamma = 1.0;
    m.radius = 1.0;
    m.region = Region(2.0, 2.0);
    ReadOnceStream s(seed("strauss_gamma_1"));
    const auto run = audited_strauss(s, [&] { return strauss::sample_strauss(m, s, count(10'000)); });
    std::vector<std::uint64_t> c(16, 0);
    for (const auto& x : run.samples) ++c[std::min<std::size_t>(x.size(), 15)];
    add_gof("strauss_gamma_1_count_vs_poisson", 10, chi_square_gof(c, poisson_cells(4.0, 16)));
  }

  /// Criterion 10(b): point-count law against plain rejection sampling.
  void strauss_vs_oracle() {
    const auto m = tiny_model();
    ReadOnceStream s(seed("strauss_tiny"));
    const auto run = audited_strauss(s, [&] { return strauss::sample_strauss(m, s, count(10'000)); });
    StraussRejectionOracle oracle(m.lambda, m.gamma, m.radius, m.region, seed("strauss_oracle"));
    std::vector<std::uint64_t> a(16, 0), b(16, 0);
    for (const auto& x : run.samples) ++a[std::min<std::size_t>(x.size(), 15)];
    const auto oracle_n = count(1'000'000);
    for (std::uint64_t i = 0; i < oracle_n; ++i) ++b[std::min<std::size_t>(oracle.draw().size(), 15)];
    const double tv = tv_distance(to_weights(a), to_weights(b));
    add({"strauss_count_tv_vs_rejection_oracle", 10, tv, std::nullopt, tv < 0.02,
         "threshold 0.02, oracle N " + std::to_string(oracle_n)});
    add_gof("strauss_count_two_sample_vs_rejection_oracle", 10, two_sample_chi_square(a, b));

    // Pair-count law as a second summary.
    std::vector<std::uint64_t> pa(8, 0), pb(8, 0);
    for (const auto& x : run.samples) ++pa[std::min<std::size_t>(strauss::close_pairs(m, x), 7)];
    StraussRejectionOracle oracle2(m.lambda, m.gamma, m.radius, m.region, seed("strauss_oracle_pairs"));
    for (std::uint64_t i = 0; i < oracle_n; ++i) {
      ++pb[std::min<std::size_t>(strauss::close_pairs(m, oracle2.draw()), 7)];
    }
    add_gof("strauss_pairs_two_sample_vs_rejection_oracle", 10, two_sample_chi_square(pa, pb));
  }

  /// Criterion 10(c).
  void strauss_phase_out_law() {
    ReadOnceStream s(seed("phase_out_time"));
    std::vector<double> t(count(10'000));
    for (auto& v : t) v = strauss::phase_out_time(s, 50);
    add_gof("phase_out_time_ks_k50", 10,
            ks_test(t, [](double x) { return std::pow(-std::expm1(-x), 50.0); }));
  }

  /// Coalescence frequency, stationarity of the first update, and hard-core
  /// softening on a tiny window.
  void strauss_composite_properties() {
    const auto m = tiny_model();
    {
      const auto n = count(10'000);
      ReadOnceStream s(seed("strauss_flag_fraction"));
      ReadOnceScope scope(s);
      std::uint64_t flags = 0;
      PointConfiguration x(m.region, {});
      for (std::uint64_t i = 0; i < n; ++i) {
        auto out = strauss::strauss_composite(m, s, x);
        flags += out.outcome.coalesced ? 1 : 0;
        x = std::move(out.outcome.state);
      }
      const double frac = static_cast<double>(flags) / static_cast<double>(n);
      const double floor = 0.5 - 4.0 * std::sqrt(0.25 / static_cast<double>(n));
      add({"strauss_coalescence_fraction", 10, frac, std::nullopt, frac >= floor,
           "threshold " + fmt(floor)});
    }
    {
      const auto n = count(100'000);
      StraussRejectionOracle oracle(m.lambda, m.gamma, m.radius, m.region, seed("mh_inputs"));
      ReadOnceStream s(seed("mh_stationarity"));
      std::vector<std::uint64_t> in(16, 0), out(16, 0);
      for (std::uint64_t i = 0; i < n; ++i) {
        const PointConfiguration x(m.region, oracle.draw());
        ++in[std::min<std::size_t>(x.size(), 15)];
        const auto u = strauss::mh_first_update(m, s, x);
        ++out[std::min<std::size_t>(u.state->size(), 15)];
      }
      const double tv = tv_distance(to_weights(in), to_weights(out));
      add({"mh_first_update_stationary_tv", 10, tv, std::nullopt, tv < 0.02, "threshold 0.02"});
    }
    {
      auto hard = tiny_model();
      hard.lambda = 1.0;
      hard.gamma = 0.0;
      const auto n = count(10'000);
      ReadOnceStream s(seed("hard_core_softening"));
      const auto run = audited_strauss(s, [&] { return strauss::sample_strauss(hard, s, n); });
      const double rate = static_cast<double>(n) / static_cast<double>(n + run.rejections);
      bool hard_core_ok = true;
      for (const auto& x : run.samples) hard_core_ok = hard_core_ok && strauss::close_pairs(hard, x) == 0;
      add({"hard_core_softened_acceptance_rate", 10, rate, std::nullopt,
           hard_core_ok && rate > 1.0 - 1e-6,
           std::to_string(run.rejections) + " rejections"});
    }
  }

  /// Criterion 10(d): the full-size renders terminate and stay in the window.
  void strauss_large_renders() {
    for (std::size_t i = 0; i < kLargeRenders; ++i) strauss_large_render(i);
  }

  static constexpr std::size_t kLargeRenders = 2;

  /// One 20 x 20 render: 0 is lambda 2, gamma 0.5; 1 is lambda 1, gamma 0.
  void strauss_large_render(std::size_t which) {
    struct Case {
      const char* name;
      double lambda, gamma;
    };
    constexpr Case cases[kLargeRenders] = {{"strauss_20x20_lambda2_gamma0.5", 2.0, 0.5},
                                           {"strauss_20x20_lambda1_gamma0", 1.0, 0.0}};
    if (which >= kLargeRenders) throw std::out_of_range("no such render");
    const Case c = cases[which];
    strauss::StraussModel m;
    m.lambda = c.lambda;
    m.gamma = c.gamma;
    m.radius = 1.0;
    m.region = Region(20.0, 20.0);
    strauss::StraussOptions opts;
    opts.evolve.max_events = cfg_.large_max_events;
    ReadOnceStream s(seed(c.name));
    const auto run = audited_strauss(s, [&] { return strauss::sample_strauss(m, s, 1, opts); });
    std::ostringstream svg;
    strauss::write_svg(svg, run.samples, m.region, m.radius);
    bool inside = true;
    for (const auto& p : run.samples.front()) inside = inside && m.region.contains(p);
    artifacts_.push_back(svg.str());
    if (!cfg_.artifact_dir.empty()) {
      std::filesystem::create_directories(cfg_.artifact_dir);
      std::ofstream(std::filesystem::path(cfg_.artifact_dir) / (std::string(c.name) + ".svg"))
          << svg.str();
    }
    add({std::string(c.name) + "_render", 10, static_cast<double>(run.samples.front().size()),
         std::nullopt, inside && svg.str().find("</svg>") != std::string::npos,
         "points in sample; events " + std::to_string(run.per_sample_events.front())});
  }

  /// Adds the criterion 6 records for every run since the last call.
  void finish_enforcement() {
    if (tally_.read_once_runs == 0 && tally_.backoff_runs == 0) return;
    const bool read_once_ok = tally_.nonmonotone == 0 && tally_.reseeds == 0 &&
                              tally_.replay_streams == 0 && tally_.violations == 0;
    add({"read_once_runs_never_reseed", 6, static_cast<double>(tally_.reseeds), std::nullopt,
         read_once_ok,
         std::to_string(tally_.read_once_runs) + " runs, " + std::to_string(tally_.nonmonotone) +
             " position regressions, " + std::to_string(tally_.replay_streams) +
             " replay streams"});
    if (tally_.backoff_runs > 0) {
      add({"binary_backoff_runs_replay", 6, static_cast<double>(tally_.backoff_without_replay),
           std::nullopt, tally_.backoff_without_replay == 0,
           std::to_string(tally_.backoff_runs) + " runs; statistic counts runs without replay"});
    }
    tally_ = {};
  }

 private:
  static constexpr CompositeVariant kVariants[] = {CompositeVariant::kInterleaved,
                                                   CompositeVariant::kMemoryEfficient,
                                                   CompositeVariant::kFirstSpecial};

  static strauss::StraussModel tiny_model() {
    strauss::StraussModel m;
    m.lambda = 0.5;
    m.gamma = 0.5;
    m.radius = 1.0;
    m.region = Region(2.0, 2.0);
    return m;
  }

  static std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

  std::uint64_t count(std::uint64_t n) const {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * cfg_.scale)));
  }
  std::uint64_t seed(std::string_view name) const { return derive_seed(cfg_.seed, name); }

  void add(TestRecord r) { records_.push_back(std::move(r)); }
  void add_gof(std::string name, int criterion, const GofReport& g) {
    add({std::move(name), criterion, g.statistic, g.p_value, g.pass,
         "dof " + fmt(g.dof) + ", n " + std::to_string(g.n)});
  }

  template <FiniteChain C>
  void check_chain(const C& chain, const std::string& name, std::uint64_t n) {
    const auto pi = chains::exact_stationary(chain);
    auto histogram_of = [&](const auto& samples) {
      std::vector<std::uint64_t> h(chain.num_states(), 0);
      for (const auto& x : samples) ++h[chain.index_of(x)];
      return h;
    };
    std::vector<std::uint64_t> first;
    for (auto variant : kVariants) {
      const std::string test = "read_once_" + std::string(to_string(variant)) + "_" + name;
      ReadOnceStream s(seed(test));
      const auto r = audited(s, [&] { return read_once_cftp(chain, s, variant, n); });
      const auto h = histogram_of(r.samples);
      add_gof(test + "_vs_exact", 1, chi_square_gof(h, pi));
      if (first.empty()) first = h;
    }
    const auto b = audited_backoff(
        [&] { return binary_backoff_cftp(chain, SeedTable(seed("backoff_" + name)), n); });
    const auto hb = histogram_of(b.samples);
    add_gof("binary_backoff_" + name + "_vs_exact", 2, chi_square_gof(hb, pi));
    add_gof("read_once_vs_binary_backoff_" + name, 2, two_sample_chi_square(first, hb));
  }

  template <class F>
  std::invoke_result_t<F&> audited(ReadOnceStream& s, F&& f) {
    const auto before = stream_audit().snapshot();
    const auto start = s.position();
    auto r = f();
    const auto after = stream_audit().snapshot();
    ++tally_.read_once_runs;
    std::uint64_t prev = start;
    for (auto p : r.stream_positions) {
      if (p <= prev) ++tally_.nonmonotone;
      prev = p;
    }
    if (r.total_words != s.position()) ++tally_.nonmonotone;
    tally_.reseeds += after.reseed_events - before.reseed_events;
    tally_.replay_streams += after.replay_streams_constructed - before.replay_streams_constructed;
    tally_.violations += after.violations - before.violations;
    return r;
  }

  template <class F>
  std::invoke_result_t<F&> audited_strauss(ReadOnceStream& s, F&& f) {
    const auto before = stream_audit().snapshot();
    auto r = f();
    const auto after = stream_audit().snapshot();
    ++tally_.read_once_runs;
    if (r.total_words != s.position()) ++tally_.nonmonotone;
    tally_.reseeds += after.reseed_events - before.reseed_events;
    tally_.replay_streams += after.replay_streams_constructed - before.replay_streams_constructed;
    tally_.violations += after.violations - before.violations;
    return r;
  }

  template <class F>
  std::invoke_result_t<F&> audited_backoff(F&& f) {
    auto r = f();
    ++tally_.backoff_runs;
    if (r.replay_events == 0) ++tally_.backoff_without_replay;
    return r;
  }

  /// Criterion 6, over every engine run made so far.
  struct Tally {
    std::uint64_t read_once_runs = 0;
    std::uint64_t nonmonotone = 0;
    std::uint64_t reseeds = 0;
    std::uint64_t replay_streams = 0;
    std::uint64_t violations = 0;
    std::uint64_t backoff_runs = 0;
    std::uint64_t backoff_without_replay = 0;
  };

  SuiteConfig cfg_;
  std::vector<TestRecord> records_;
  std::vector<std::string> artifacts_;
  Tally tally_;
};

/// Runs one named suite and returns its records.
inline std::vector<TestRecord> run_suite(std::string_view name, const SuiteConfig& cfg) {
  Suite s(cfg);
  s.run(name);
  return s.records();
}

}  // namespace rocftp::verify
