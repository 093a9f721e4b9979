#pragma once

// Randomness sources. ReadOnceStream is the only source the read-once
// engines may touch: it has no seek, reseed or copy operation, so replaying
// a word is impossible by construction. SeededReplayStream is the
// re-readable source the binary-backoff engine needs, and it refuses to be
// constructed while a read-once run is active.

#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rocftp/errors.hpp"
#include "rocftp/geometry.hpp"

namespace rocftp {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna), 256 bits of state, seeded by SplitMix64.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 mix(seed);
    for (auto& word : s_) word = mix();
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

 private:
  std::array<std::uint64_t, 4> s_{};
};

template <class S>
concept WordSource = requires(S& s) {
  { s.next_word() } -> std::same_as<std::uint64_t>;
};

/// Process-wide counters checked by the test suites. Nothing in the
/// sampling logic reads them.
struct StreamAudit {
  std::atomic<std::uint64_t> replay_streams_constructed{0};
  std::atomic<std::uint64_t> reseed_events{0};
  std::atomic<std::uint64_t> replay_events{0};
  std::atomic<std::uint64_t> violations{0};
  std::atomic<std::uint64_t> read_once_runs{0};

  struct Snapshot {
    std::uint64_t replay_streams_constructed;
    std::uint64_t reseed_events;
    std::uint64_t replay_events;
    std::uint64_t violations;
    std::uint64_t read_once_runs;
  };

  Snapshot snapshot() const {
    return {replay_streams_constructed.load(), reseed_events.load(),
            replay_events.load(), violations.load(), read_once_runs.load()};
  }
};

inline StreamAudit& stream_audit() {
  static StreamAudit audit;
  return audit;
}

class ReadOnceScope;

class ReadOnceStream {
 public:
  explicit ReadOnceStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  ReadOnceStream(const ReadOnceStream&) = delete;
  ReadOnceStream& operator=(const ReadOnceStream&) = delete;

  // A moved-from stream is poisoned so the sequence cannot continue in two
  // places.
  ReadOnceStream(ReadOnceStream&& other) noexcept
      : seed_(other.seed_),
        position_(other.position_),
        poisoned_(other.poisoned_),
        gen_(other.gen_) {
    other.poisoned_ = true;
  }
  ReadOnceStream& operator=(ReadOnceStream&&) = delete;

  std::uint64_t next_word() {
    if (poisoned_) {
      throw ContractViolation("draw from a poisoned read-once stream");
    }
    ++position_;
    return gen_.next();
  }

  std::uint64_t position() const { return position_; }
  std::uint64_t seed() const { return seed_; }
  bool poisoned() const { return poisoned_; }

 private:
  friend class ReadOnceScope;

  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  bool poisoned_ = false;
  Xoshiro256 gen_;
};

/// Marks a read-once engine run. While any scope is alive on this thread,
/// constructing a SeededReplayStream is a contract violation: the active
/// stream is poisoned and ContractViolation is thrown.
class ReadOnceScope {
 public:
  explicit ReadOnceScope(ReadOnceStream& stream)
      : stream_(&stream), previous_(active_stream()) {
    active_stream() = stream_;
    ++stream_audit().read_once_runs;
  }
  ~ReadOnceScope() { active_stream() = previous_; }

  ReadOnceScope(const ReadOnceScope&) = delete;
  ReadOnceScope& operator=(const ReadOnceScope&) = delete;

  static bool active() { return active_stream() != nullptr; }

  [[noreturn]] static void violation(const char* what) {
    ++stream_audit().violations;
    if (auto* s = active_stream()) s->poisoned_ = true;
    throw ContractViolation(what);
  }

 private:
  static ReadOnceStream*& active_stream() {
    thread_local ReadOnceStream* current = nullptr;
    return current;
  }

  ReadOnceStream* stream_;
  ReadOnceStream* previous_;
};

/// Seeds indexed by (sample index, backoff level), derived from one master
/// seed. The table is conceptually infinite; entries are computed on demand.
class SeedTable {
 public:
  explicit SeedTable(std::uint64_t master_seed) : master_(master_seed) {}

  std::uint64_t seed(std::uint64_t sample, std::uint32_t level) const {
    SplitMix64 mix(master_ ^ (sample * 0xd1342543de82ef95ULL));
    std::uint64_t s = mix();
    SplitMix64 mix2(s + level * 0x9e3779b97f4a7c15ULL);
    return mix2();
  }

  std::uint64_t master_seed() const { return master_; }

 private:
  std::uint64_t master_;
};

/// Re-readable source used only by binary-backoff CFTP. Reseeding to an
/// entry already used for the current sample is recorded as a replay event;
/// words read again after such a reseed are counted as re-reads.
class SeededReplayStream {
 public:
  explicit SeededReplayStream(SeedTable table)
      : table_(table), gen_(table.seed(0, 0)) {
    if (ReadOnceScope::active()) {
      ReadOnceScope::violation(
          "seeded replay stream constructed inside a read-once run");
    }
    ++stream_audit().replay_streams_constructed;
  }

  void set_random_seed(std::uint64_t sample, std::uint32_t level) {
    if (!seeded_ || sample != sample_) {
      sample_ = sample;
      levels_read_.clear();
    }
    seeded_ = true;
    if (level >= levels_read_.size()) levels_read_.resize(level + 1, kUnused);
    if (levels_read_[level] != kUnused) {
      ++replay_events_;
      ++stream_audit().replay_events;
    } else {
      levels_read_[level] = 0;
    }
    level_ = level;
    offset_ = 0;
    gen_ = Xoshiro256(table_.seed(sample, level));
    ++reseed_events_;
    ++stream_audit().reseed_events;
  }

  std::uint64_t next_word() {
    if (!seeded_) {
      throw ContractViolation("replay stream read before set_random_seed");
    }
    ++total_words_;
    if (offset_ < levels_read_[level_]) {
      ++reread_words_;
    } else {
      levels_read_[level_] = offset_ + 1;
    }
    ++offset_;
    return gen_.next();
  }

  /// Offset within the currently selected seed's sequence.
  std::uint64_t position() const { return offset_; }
  std::uint64_t total_words() const { return total_words_; }
  std::uint64_t reread_words() const { return reread_words_; }
  std::uint64_t reseed_events() const { return reseed_events_; }
  std::uint64_t replay_events() const { return replay_events_; }

 private:
  static constexpr std::uint64_t kUnused =
      std::numeric_limits<std::uint64_t>::max();

  SeedTable table_;
  Xoshiro256 gen_;
  bool seeded_ = false;
  std::uint64_t sample_ = 0;
  std::uint32_t level_ = 0;
  std::uint64_t offset_ = 0;
  std::vector<std::uint64_t> levels_read_;  // high-water offset per level
  std::uint64_t total_words_ = 0;
  std::uint64_t reread_words_ = 0;
  std::uint64_t reseed_events_ = 0;
  std::uint64_t replay_events_ = 0;
};

// ---------------------------------------------------------------------------
// Distributions. Each consumes a number of words that depends only on the
// values drawn.

/// Uniform on [0, 1) with 53 random bits; one word.
template <WordSource S>
double uniform01(S& s) {
  return static_cast<double>(s.next_word() >> 11) * 0x1.0p-53;
}

/// Uniform on {0, ..., n-1}. Rejection on the low residue class removes
/// modulo bias.
template <WordSource S>
std::uint64_t uniform_int(S& s, std::uint64_t n) {
  if (n == 0) throw std::domain_error("uniform_int: n must be at least 1");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t w = s.next_word();
    if (w >= threshold) return w % n;
  }
}

/// Uniform on (0, 1); one word.
template <WordSource S>
double uniform_open01(S& s) {
  return (static_cast<double>(s.next_word() >> 11) + 0.5) * 0x1.0p-53;
}

/// Exponential with the given rate; strictly positive. One word.
template <WordSource S>
double exponential(S& s, double rate) {
  if (!(rate > 0.0)) throw std::domain_error("exponential: rate must be > 0");
  return -std::log(uniform_open01(s)) / rate;
}

namespace detail {

template <WordSource S>
std::uint64_t poisson_inversion(S& s, double mean) {
  const double u = uniform01(s);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  // The cap only matters when rounding leaves cdf just below u.
  while (u > cdf && k < 1000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Hormann's transformed rejection with squeeze (PTRS).
template <WordSource S>
std::uint64_t poisson_ptrs(S& s, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform01(s) - 0.5;
    const double v = uniform01(s);
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace detail

/// Poisson count: inversion below mean 30, PTRS rejection above.
template <WordSource S>
std::uint64_t poisson(S& s, double mean) {
  if (!(mean >= 0.0)) throw std::domain_error("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  return mean < 30.0 ? detail::poisson_inversion(s, mean)
                     : detail::poisson_ptrs(s, mean);
}

template <WordSource S>
Point uniform_point(S& s, const Region& region) {
  const double x = uniform01(s) * region.width;
  const double y = uniform01(s) * region.height;
  return {x, y};
}

/// Homogeneous Poisson process with `intensity` points per unit area.
template <WordSource S>
PointConfiguration poisson_point_process(S& s, double intensity,
                                         const Region& region) {
  if (!(intensity >= 0.0)) {
    throw std::domain_error("poisson_point_process: intensity must be >= 0");
  }
  const std::uint64_t n = poisson(s, intensity * region.area());
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) pts.push_back(uniform_point(s, region));
  return PointConfiguration(region, std::move(pts));
}

}  // namespace rocftp
