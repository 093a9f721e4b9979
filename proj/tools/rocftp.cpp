// rocftp: command-line front end.
//
//   rocftp sample  --chain lazy-walk --n 11 --engine read-once --samples 1000 --seed 1
//   rocftp verify  --suite exactness --seed 7 --json report.json
//   rocftp strauss --lambda 2 --gamma 0.5 --radius 1 --width 20 --height 20 --svg out.svg
//   rocftp bench   --chain lazy-walk --n 11 --samples 10000
//
// Exit codes: 0 success, 1 usage error, 2 cap exceeded or no coalescence,
// 3 verification failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rocftp/rocftp.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCap = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ChainArgs {
  std::string chain = "lazy-walk";
  int n = 11;
  double beta = 0.3;
  int size = 2;
};

struct RunConfig {
  ChainArgs chain;
  std::string engine = "read-once";
  std::string composite = "interleaved";
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> seed;
  int parallel = 1;
  std::uint64_t max_maps = 1'000'000;
  std::string out_path;
  std::string meta_path;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ROCFTP_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 10);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("ROCFTP_SEED is not a decimal 64-bit integer");
  }
  return fallback;
}

rocftp::CompositeVariant parse_variant(const std::string& s) {
  if (s == "interleaved") return rocftp::CompositeVariant::kInterleaved;
  if (s == "memory") return rocftp::CompositeVariant::kMemoryEfficient;
  if (s == "first-special") return rocftp::CompositeVariant::kFirstSpecial;
  throw UsageError("unknown composite " + s);
}

using AnyChain =
    std::variant<rocftp::chains::LazyWalk, rocftp::chains::SortChain, rocftp::chains::IsingHeatBath>;

AnyChain make_chain(const ChainArgs& a) {
  try {
    if (a.chain == "lazy-walk") return rocftp::chains::LazyWalk(a.n);
    if (a.chain == "sort") return rocftp::chains::SortChain(a.n);
    if (a.chain == "ising") return rocftp::chains::IsingHeatBath(a.size, a.beta);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown chain " + a.chain);
}

ordered_json chain_json(const ChainArgs& a) {
  ordered_json j;
  j["name"] = a.chain;
  if (a.chain == "ising") {
    j["size"] = a.size;
    j["beta"] = a.beta;
  } else {
    j["n"] = a.n;
  }
  return j;
}

void write_state(std::ostream& out, int x) { out << x; }
void write_state(std::ostream& out, const std::vector<int>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
}
void write_state(std::ostream& out, const std::vector<std::int8_t>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? "," : "") << static_cast<int>(x[i]);
}

template <class State>
struct StreamResult {
  std::vector<State> samples;
  std::vector<std::uint64_t> maps;
  std::uint64_t seed = 0;
  std::uint64_t words = 0;
  std::uint64_t reread_words = 0;
};

template <class C>
StreamResult<typename C::State> run_engine(const C& chain, const RunConfig& cfg,
                                           std::uint64_t seed, std::uint64_t count) {
  StreamResult<typename C::State> r;
  r.seed = seed;
  rocftp::EngineOptions opts;
  opts.max_maps = cfg.max_maps;
  if (cfg.engine == "read-once") {
    rocftp::ReadOnceStream stream(seed);
    auto rep = rocftp::read_once_cftp(chain, stream, parse_variant(cfg.composite), count, opts);
    r.samples = std::move(rep.samples);
    r.maps = std::move(rep.per_sample_maps);
    r.words = rep.total_words;
  } else if (cfg.engine == "binary-backoff") {
    auto rep = rocftp::binary_backoff_cftp(chain, rocftp::SeedTable(seed), count, opts);
    r.samples = std::move(rep.samples);
    r.maps = std::move(rep.per_sample_maps);
    r.words = rep.total_words;
    r.reread_words = rep.reread_words;
  } else if (cfg.engine == "citp") {
    rocftp::ReadOnceStream stream(seed);
    rocftp::CitpOptions copts;
    copts.max_maps = cfg.max_maps;
    for (std::uint64_t i = 0; i < count; ++i) {
      auto out = rocftp::compose_into_the_past(chain, stream, copts);
      r.samples.push_back(std::move(out.state));
      r.maps.push_back(out.maps_applied);
    }
    r.words = stream.position();
  } else {
    throw UsageError("unknown engine " + cfg.engine);
  }
  return r;
}

int cmd_sample(const RunConfig& cfg) {
  if (cfg.samples == 0) throw UsageError("--samples must be >= 1");
  if (cfg.parallel < 1) throw UsageError("--parallel must be >= 1");
  if (cfg.parallel > 1 && cfg.engine != "read-once") {
    throw UsageError("--parallel applies to the read-once engine only");
  }
  parse_variant(cfg.composite);
  const std::uint64_t seed = resolve_seed(cfg.seed, 1);
  const AnyChain chain = make_chain(cfg.chain);

  return std::visit(
      [&](const auto& c) {
        using State = typename std::decay_t<decltype(c)>::State;
        const auto streams = static_cast<std::uint64_t>(cfg.parallel);
        std::vector<StreamResult<State>> parts(streams);
        if (streams == 1) {
          parts[0] = run_engine(c, cfg, seed, cfg.samples);
        } else {
          // Independent streams with derived seeds; a different (still exact)
          // sample set than the single-stream run.
          std::vector<std::thread> workers;
          std::vector<std::exception_ptr> errors(streams);
          rocftp::SplitMix64 mix(seed);
          std::vector<std::uint64_t> seeds(streams);
          for (auto& s : seeds) s = mix();
          for (std::uint64_t i = 0; i < streams; ++i) {
            const std::uint64_t share = cfg.samples / streams + (i < cfg.samples % streams ? 1 : 0);
            workers.emplace_back([&, i, share] {
              try {
                if (share > 0) parts[i] = run_engine(c, cfg, seeds[i], share);
                parts[i].seed = seeds[i];
              } catch (...) {
                errors[i] = std::current_exception();
              }
            });
          }
          for (auto& w : workers) w.join();
          for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
          }
        }

        std::ostringstream csv;
        std::uint64_t total_words = 0, total_maps = 0;
        ordered_json stream_meta = ordered_json::array();
        for (const auto& p : parts) {
          for (const auto& x : p.samples) {
            write_state(csv, x);
            csv << '\n';
          }
          for (auto m : p.maps) total_maps += m;
          total_words += p.words;
          ordered_json sj;
          sj["seed"] = p.seed;
          sj["samples"] = p.samples.size();
          sj["final_position"] = p.words;
          if (cfg.engine == "binary-backoff") sj["reread_words"] = p.reread_words;
          stream_meta.push_back(sj);
        }
        if (cfg.out_path.empty()) {
          std::cout << csv.str();
        } else {
          std::ofstream(cfg.out_path) << csv.str();
        }

        ordered_json meta;
        meta["command"] = "sample";
        meta["chain"] = chain_json(cfg.chain);
        meta["engine"] = cfg.engine;
        if (cfg.engine == "read-once") meta["composite"] = cfg.composite;
        meta["samples"] = cfg.samples;
        meta["seed"] = seed;
        meta["parallel"] = cfg.parallel;
        meta["max_maps"] = cfg.max_maps;
        meta["streams"] = stream_meta;
        meta["total_words"] = total_words;
        meta["total_maps"] = total_maps;
        meta["mean_maps_per_sample"] =
            static_cast<double>(total_maps) / static_cast<double>(cfg.samples);
        const std::string meta_path =
            !cfg.meta_path.empty() ? cfg.meta_path
                                   : (cfg.out_path.empty() ? "" : cfg.out_path + ".json");
        if (meta_path.empty()) {
          std::cerr << meta.dump(2) << '\n';
        } else {
          std::ofstream(meta_path) << meta.dump(2) << '\n';
        }
        return kExitOk;
      },
      chain);
}

struct VerifyArgs {
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  std::string json_path;
  double scale = 1.0;
  bool skip_large = false;
  std::string artifacts;
};

int cmd_verify(const VerifyArgs& a) {
  rocftp::verify::SuiteConfig cfg;
  cfg.seed = resolve_seed(a.seed, 7);
  cfg.scale = a.scale;
  cfg.large_strauss = !a.skip_large;
  cfg.artifact_dir = a.artifacts;
  rocftp::verify::Suite suite(cfg);
  suite.run(a.suite);

  ordered_json report;
  report["suite"] = a.suite;
  report["seed"] = cfg.seed;
  report["scale"] = cfg.scale;
  report["tests"] = rocftp::verify::to_json(suite.records());
  if (a.json_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream(a.json_path) << report.dump(2) << '\n';
    for (const auto& r : suite.records()) {
      std::cout << (r.pass ? "pass  " : "FAIL  ") << r.name << '\n';
    }
  }
  return suite.all_pass() ? kExitOk : kExitVerify;
}

struct StraussArgs {
  double lambda = 1.0;
  double gamma = 0.5;
  double radius = 1.0;
  double width = 10.0;
  double height = 10.0;
  double K = 1.0;
  double epsilon = 1e-20;
  double proposal_factor = 2.0;
  std::uint64_t samples = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_events = 2'000'000'000;
  std::string svg_path;
  std::string csv_path;
  std::string meta_path;
};

int cmd_strauss(const StraussArgs& a) {
  rocftp::strauss::StraussModel m;
  m.lambda = a.lambda;
  m.gamma = a.gamma;
  m.radius = a.radius;
  m.K = a.K;
  m.epsilon_soft = a.epsilon;
  m.proposal_factor = a.proposal_factor;
  try {
    m.region = rocftp::Region(a.width, a.height);
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (a.samples == 0) throw UsageError("--samples must be >= 1");
  const std::uint64_t seed = resolve_seed(a.seed, 1);
  rocftp::strauss::StraussOptions opts;
  opts.evolve.max_events = a.max_events;
  rocftp::ReadOnceStream stream(seed);
  const auto run = rocftp::strauss::sample_strauss(m, stream, a.samples, opts);

  if (!a.svg_path.empty()) {
    std::ofstream out(a.svg_path);
    rocftp::strauss::write_svg(out, run.samples, m.region, m.radius);
  }
  if (!a.csv_path.empty()) {
    std::ofstream out(a.csv_path);
    rocftp::strauss::write_csv(out, run.samples);
  } else if (a.svg_path.empty()) {
    rocftp::strauss::write_csv(std::cout, run.samples);
  }

  ordered_json meta;
  meta["command"] = "strauss";
  meta["lambda"] = m.lambda;
  meta["gamma"] = m.gamma;
  meta["radius"] = m.radius;
  meta["width"] = a.width;
  meta["height"] = a.height;
  meta["K"] = m.K;
  meta["epsilon_soft"] = m.epsilon_soft;
  meta["proposal_factor"] = m.proposal_factor;
  meta["samples"] = a.samples;
  meta["seed"] = seed;
  meta["max_events"] = a.max_events;
  meta["final_position"] = run.total_words;
  meta["composites"] = run.composites;
  meta["coalescent_composites"] = run.coalescent_composites;
  meta["rejections"] = run.rejections;
  auto counts = ordered_json::array();
  for (const auto& s : run.samples) counts.push_back(s.size());
  meta["points_per_sample"] = counts;
  if (a.meta_path.empty()) {
    std::cerr << meta.dump(2) << '\n';
  } else {
    std::ofstream(a.meta_path) << meta.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, const std::string& csv_path) {
  if (cfg.samples == 0) throw UsageError("--samples must be >= 1");
  const auto variant = parse_variant(cfg.composite);
  const std::uint64_t seed = resolve_seed(cfg.seed, 1);
  const AnyChain chain = make_chain(cfg.chain);
  rocftp::EngineOptions opts;
  opts.max_maps = cfg.max_maps;
  const auto table = std::visit(
      [&](const auto& c) {
        return rocftp::verify::performance_harness(c, cfg.chain.chain, cfg.samples, seed,
                                                   variant, opts);
      },
      chain);
  rocftp::verify::print_table(std::cout, table);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    rocftp::verify::write_table_csv(out, table);
  }
  return kExitOk;
}

void add_chain_options(CLI::App* cmd, ChainArgs& a) {
  cmd->add_option("--chain", a.chain, "lazy-walk, sort or ising")
      ->check(CLI::IsMember({"lazy-walk", "sort", "ising"}));
  cmd->add_option("--n", a.n, "states (lazy-walk) or letters (sort)");
  cmd->add_option("--beta", a.beta, "inverse temperature (ising)");
  cmd->add_option("--size", a.size, "grid side (ising)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect sampling with read-once coupling from the past"};
  app.require_subcommand(1);

  RunConfig sample_cfg;
  auto* sample = app.add_subcommand("sample", "draw exact samples from a finite chain");
  add_chain_options(sample, sample_cfg.chain);
  sample->add_option("--engine", sample_cfg.engine, "citp, binary-backoff or read-once")
      ->check(CLI::IsMember({"citp", "binary-backoff", "read-once"}));
  sample->add_option("--composite", sample_cfg.composite, "interleaved, memory or first-special")
      ->check(CLI::IsMember({"interleaved", "memory", "first-special"}));
  sample->add_option("--samples", sample_cfg.samples, "number of samples")->required();
  sample->add_option("--seed", sample_cfg.seed, "64-bit seed (default: $ROCFTP_SEED, else 1)");
  sample->add_option("--parallel", sample_cfg.parallel,
                     "independent read-once streams run concurrently");
  sample->add_option("--max-maps", sample_cfg.max_maps, "map cap per composite or attempt");
  sample->add_option("--out", sample_cfg.out_path, "CSV output (default stdout)");
  sample->add_option("--meta", sample_cfg.meta_path, "JSON metadata (default OUT.json or stderr)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suite", verify_args.suite)
      ->check(CLI::IsMember({"exactness", "performance", "ciaftp", "strauss", "all"}));
  verify->add_option("--seed", verify_args.seed, "master seed (default: $ROCFTP_SEED, else 7)");
  verify->add_option("--json", verify_args.json_path, "report path (default stdout)");
  verify->add_option("--scale", verify_args.scale, "sample-size multiplier")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--no-large", verify_args.skip_large, "skip the 20x20 point process renders");
  verify->add_option("--artifacts", verify_args.artifacts, "directory for rendered SVGs");

  StraussArgs strauss_args;
  auto* strauss = app.add_subcommand("strauss", "exact samples of a Strauss process");
  strauss->add_option("--lambda", strauss_args.lambda, "intensity (default 1)");
  strauss->add_option("--gamma", strauss_args.gamma, "interaction in [0, 1] (default 0.5)");
  strauss->add_option("--radius", strauss_args.radius, "interaction radius (default 1)");
  strauss->add_option("--width", strauss_args.width, "window width (default 10)");
  strauss->add_option("--height", strauss_args.height, "window height (default 10)");
  strauss->add_option("--K", strauss_args.K, "local stability constant");
  strauss->add_option("--epsilon", strauss_args.epsilon, "softening factor for gamma = 0");
  strauss->add_option("--proposal-factor", strauss_args.proposal_factor,
                     "proposal intensity over K lambda, > 1 (default 2)");
  strauss->add_option("--samples", strauss_args.samples, "number of samples (default 1)");
  strauss->add_option("--seed", strauss_args.seed, "64-bit seed (default: $ROCFTP_SEED, else 1)");
  strauss->add_option("--max-events", strauss_args.max_events, "event cap per dynamics run");
  strauss->add_option("--svg", strauss_args.svg_path, "SVG with the samples side by side");
  strauss->add_option("--csv", strauss_args.csv_path, "points as sample,x,y (default stdout unless --svg)");
  strauss->add_option("--meta", strauss_args.meta_path, "JSON metadata (default stderr)");

  RunConfig bench_cfg;
  std::string bench_csv;
  auto* bench = app.add_subcommand("bench", "compare engine costs on a finite chain");
  add_chain_options(bench, bench_cfg.chain);
  bench->add_option("--samples", bench_cfg.samples, "samples per engine")->required();
  bench->add_option("--seed", bench_cfg.seed, "64-bit seed");
  bench->add_option("--composite", bench_cfg.composite)
      ->check(CLI::IsMember({"interleaved", "memory", "first-special"}));
  bench->add_option("--max-maps", bench_cfg.max_maps, "map cap per composite or attempt");
  bench->add_option("--csv", bench_csv, "also write the table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(sample_cfg);
    if (*verify) return cmd_verify(verify_args);
    if (*strauss) return cmd_strauss(strauss_args);
    if (*bench) return cmd_bench(bench_cfg, bench_csv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rocftp::CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
