#pragma once

#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "rocftp/geometry.hpp"

namespace rocftp::strauss {

/// One "sample_index,x,y" line per point; no header.
inline void write_csv(std::ostream& out, const std::vector<PointConfiguration>& samples) {
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (const auto& p : samples[i]) buf << i << ',' << p.x << ',' << p.y << '\n';
  }
  out << buf.str();
}

/// Draws a circle of radius r/2 around each point, so two circles overlap
/// exactly when the points interact. Several samples are laid out side by
/// side.
inline void write_svg(std::ostream& out, const std::vector<PointConfiguration>& samples,
                      const Region& region, double radius, double pixels_per_unit = 20.0) {
  const double gap = 1.0;
  const std::size_t n = samples.empty() ? 1 : samples.size();
  const double total_w = static_cast<double>(n) * region.width + static_cast<double>(n - 1) * gap;
  std::ostringstream svg;
  svg << std::setprecision(10);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w * pixels_per_unit
      << "\" height=\"" << region.height * pixels_per_unit << "\" viewBox=\"0 0 " << total_w
      << ' ' << region.height << "\">\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double ox = static_cast<double>(i) * (region.width + gap);
    svg << "  <g id=\"sample-" << i << "\" transform=\"translate(" << ox << ",0)\">\n"
        << "    <rect x=\"0\" y=\"0\" width=\"" << region.width << "\" height=\"" << region.height
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"0.05\"/>\n";
    for (const auto& p : samples[i]) {
      svg << "    <circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << radius / 2.0
          << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.04\"/>\n";
    }
    svg << "  </g>\n";
  }
  svg << "</svg>\n";
  out << svg.str();
}

}  // namespace rocftp::strauss
