// Exact Strauss samples on a 10 x 10 window, written as strauss_demo.svg.
//   strauss_demo [lambda] [gamma] [seed]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "rocftp/rocftp.hpp"

int main(int argc, char** argv) {
  using namespace rocftp;
  strauss::StraussModel model;
  model.lambda = argc > 1 ? std::atof(argv[1]) : 1.0;
  model.gamma = argc > 2 ? std::atof(argv[2]) : 0.5;
  model.radius = 1.0;
  model.region = Region(10.0, 10.0);
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

  ReadOnceStream stream(seed);
  const auto run = strauss::sample_strauss(model, stream, 4);
  for (std::size_t i = 0; i < run.samples.size(); ++i) {
    std::printf("sample %zu: %zu points, %zu close pairs, %llu events\n", i,
                run.samples[i].size(),
                static_cast<std::size_t>(strauss::close_pairs(model, run.samples[i])),
                static_cast<unsigned long long>(run.per_sample_events[i]));
  }
  std::printf("%llu composites, %llu coalescent, %llu words\n",
              static_cast<unsigned long long>(run.composites),
              static_cast<unsigned long long>(run.coalescent_composites),
              static_cast<unsigned long long>(run.total_words));
  std::ofstream out("strauss_demo.svg");
  strauss::write_svg(out, run.samples, model.region, model.radius);
  std::printf("wrote strauss_demo.svg\n");
}
