// Draws samples of the lazy walk on {0..10} with each engine and prints the
// empirical law next to the stationary one, plus the cost per sample.

#include <cstdint>
#include <cstdio>
#include <vector>

#include "rocftp/rocftp.hpp"

int main() {
  using namespace rocftp;
  const chains::LazyWalk walk(11);
  const auto pi = chains::exact_stationary(walk);
  constexpr std::uint64_t kSamples = 20000;

  ReadOnceStream stream(2024);
  const auto ro = read_once_cftp(walk, stream, CompositeVariant::kInterleaved, kSamples);
  const auto bb = binary_backoff_cftp(walk, SeedTable(2024), kSamples);

  std::vector<double> ro_law(11, 0.0), bb_law(11, 0.0);
  for (int x : ro.samples) ro_law[static_cast<std::size_t>(x)] += 1.0 / kSamples;
  for (int x : bb.samples) bb_law[static_cast<std::size_t>(x)] += 1.0 / kSamples;

  std::printf("state  stationary  read-once  backoff\n");
  for (std::size_t i = 0; i < 11; ++i) {
    std::printf("%5zu  %10.4f  %9.4f  %7.4f\n", i, pi[i], ro_law[i], bb_law[i]);
  }
  auto mean = [](const std::vector<std::uint64_t>& v) {
    double t = 0.0;
    for (auto x : v) t += static_cast<double>(x);
    return t / static_cast<double>(v.size());
  };
  std::printf("\nmaps per sample: read-once %.1f, binary-backoff %.1f\n", mean(ro.per_sample_maps),
              mean(bb.per_sample_maps));
  std::printf("stream words: read-once %llu (read once), binary-backoff %llu (%llu re-read)\n",
              static_cast<unsigned long long>(ro.total_words),
              static_cast<unsigned long long>(bb.total_words),
              static_cast<unsigned long long>(bb.reread_words));
  std::printf("TV(read-once, stationary) = %.4f\n", verify::tv_distance(ro_law, pi));
}
