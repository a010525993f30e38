#include "oamlab/detector.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "oamlab/errors.hpp"

namespace oamlab {
namespace {

// weights[s * n_fine + i] = overlap of fine cell i with scan cell s, divided
// by the scan cell width. Fine cell i covers [lo_f + i d_f, lo_f + (i+1) d_f].
std::vector<double> overlap_weights(std::size_t n_fine, double lo_f, double d_f,
                                    std::size_t n_scan, double lo_s, double d_s) {
  std::vector<double> w(n_scan * n_fine, 0.0);
  for (std::size_t s = 0; s < n_scan; ++s) {
    const double a = lo_s + static_cast<double>(s) * d_s;
    const double b = a + d_s;
    const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - lo_f) / d_f)));
    for (std::size_t i = first; i < n_fine; ++i) {
      const double c = lo_f + static_cast<double>(i) * d_f;
      if (c >= b) break;
      const double overlap = std::min(b, c + d_f) - std::max(a, c);
      if (overlap > 0.0) w[s * n_fine + i] = overlap / d_s;
    }
  }
  return w;
}

DetectorScan scan_region(const RealGrid& in, std::size_t n_x, std::size_t n_y, double lo_x,
                         double lo_y, double width_x, double width_y) {
  const auto& g = in.grid;
  if (n_x == 0 || n_y == 0) throw DomainError("scan needs at least one cell per axis");
  if (n_x > g.n_x || n_y > g.n_y) throw DomainError("detector scan cannot upsample the grid");

  const double fine_lo_x = g.x(0) - 0.5 * g.dx();
  const double fine_lo_y = g.y(0) - 0.5 * g.dy();
  const double tol = 1e-9 * std::max(g.extent_x, g.extent_y);
  if (lo_x < fine_lo_x - tol || lo_y < fine_lo_y - tol || lo_x + width_x > fine_lo_x + g.extent_x + tol ||
      lo_y + width_y > fine_lo_y + g.extent_y + tol) {
    throw GeometryError("scan window extends past the simulation grid");
  }
  const double ds_x = width_x / static_cast<double>(n_x);
  const double ds_y = width_y / static_cast<double>(n_y);
  const auto wx = overlap_weights(g.n_x, fine_lo_x, g.dx(), n_x, lo_x, ds_x);
  const auto wy = overlap_weights(g.n_y, fine_lo_y, g.dy(), n_y, lo_y, ds_y);

  // Separable: collapse x first, then y.
  std::vector<double> rows(n_x * g.n_y, 0.0);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    for (std::size_t s = 0; s < n_x; ++s) {
      double acc = 0.0;
      for (std::size_t i = 0; i < g.n_x; ++i) {
        const double w = wx[s * g.n_x + i];
        if (w != 0.0) acc += w * in.at(i, j);
      }
      rows[j * n_x + s] = acc;
    }
  }
  DetectorScan scan{RealGrid(GridSpec{n_x, n_y, width_x, width_y})};
  for (std::size_t t = 0; t < n_y; ++t) {
    for (std::size_t s = 0; s < n_x; ++s) {
      double acc = 0.0;
      for (std::size_t j = 0; j < g.n_y; ++j) {
        const double w = wy[t * g.n_y + j];
        if (w != 0.0) acc += w * rows[j * n_x + s];
      }
      scan.map.at(s, t) = acc;
    }
  }
  return scan;
}

}  // namespace

DetectorScan detector_scan(const RealGrid& intensity, std::size_t n_x, std::size_t n_y) {
  const auto& g = intensity.grid;
  return scan_region(intensity, n_x, n_y, g.x(0) - 0.5 * g.dx(), g.y(0) - 0.5 * g.dy(), g.extent_x,
                     g.extent_y);
}

DetectorScan detector_scan(const RealGrid& intensity, std::size_t n_x, std::size_t n_y,
                           double window_x, double window_y) {
  if (!(window_x > 0.0) || !(window_y > 0.0)) throw DomainError("scan window must be positive");
  // Scan cells follow the GridSpec convention: cell n/2 is centered on the axis.
  const double ds_x = window_x / static_cast<double>(n_x);
  const double ds_y = window_y / static_cast<double>(n_y);
  const double lo_x = -static_cast<double>(n_x / 2) * ds_x - 0.5 * ds_x;
  const double lo_y = -static_cast<double>(n_y / 2) * ds_y - 0.5 * ds_y;
  return scan_region(intensity, n_x, n_y, lo_x, lo_y, window_x, window_y);
}

Graymap to_grayscale_bitmap(const DetectorScan& scan) {
  const auto& m = scan.map;
  const auto [lo_it, hi_it] = std::minmax_element(m.values.begin(), m.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  Graymap out;
  const std::string header =
      "P5\n" + std::to_string(scan.n_x()) + " " + std::to_string(scan.n_y()) + "\n255\n";
  out.bytes.assign(header.begin(), header.end());
  out.degenerate = !(hi > lo) || !(hi > 0.0);
  out.bytes.reserve(header.size() + m.values.size());
  for (std::size_t row = 0; row < scan.n_y(); ++row) {
    const std::size_t j = scan.n_y() - 1 - row;
    for (std::size_t i = 0; i < scan.n_x(); ++i) {
      std::uint8_t px = 0;
      if (!out.degenerate) {
        const double v = 255.0 * (m.at(i, j) - lo) / (hi - lo);
        px = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
      out.bytes.push_back(px);
    }
  }
  return out;
}

RealGrid read_graymap(const std::vector<std::uint8_t>& bytes, double extent_x, double extent_y) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&] {
    skip_space();
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) ++pos;
    if (start == pos) throw ConfigError("malformed graymap header");
    return std::stoul(std::string(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                  bytes.begin() + static_cast<std::ptrdiff_t>(pos)));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw ConfigError("not a P5/P2 graymap");
  }
  const bool binary = bytes[1] == '5';
  pos = 2;
  const std::size_t w = read_int();
  const std::size_t h = read_int();
  const std::size_t maxval = read_int();
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) throw ConfigError("unsupported graymap size");

  RealGrid out(GridSpec{w, h, extent_x, extent_y});
  if (binary) {
    ++pos;  // single whitespace after maxval
    if (bytes.size() < pos + w * h) throw ConfigError("truncated graymap data");
  }
  for (std::size_t row = 0; row < h; ++row) {
    const std::size_t j = h - 1 - row;
    for (std::size_t i = 0; i < w; ++i) {
      out.at(i, j) = binary ? static_cast<double>(bytes[pos++]) : static_cast<double>(read_int());
    }
  }
  return out;
}

DetectorScan add_shot_noise(const DetectorScan& scan, double mean_counts, std::uint64_t seed) {
  if (!(mean_counts > 0.0)) throw DomainError("mean counts must be positive");
  double mean = 0.0;
  for (double v : scan.map.values) mean += v;
  mean /= static_cast<double>(scan.map.values.size());
  if (!(mean > 0.0)) throw DomainError("scan has no signal to scale");

  const double scale = mean_counts / mean;
  std::mt19937_64 rng(seed);
  DetectorScan out = scan;
  for (double& v : out.map.values) {
    const double lambda = std::max(0.0, v) * scale;
    v = lambda > 0.0 ? static_cast<double>(std::poisson_distribution<long long>(lambda)(rng)) : 0.0;
  }
  return out;
}

}  // namespace oamlab
