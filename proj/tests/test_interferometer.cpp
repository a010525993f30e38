#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "oamlab/errors.hpp"
#include "oamlab/interferometer.hpp"
#include "oamlab/oam_analysis.hpp"

using namespace oamlab;
using namespace oamlab::testing;

namespace {

ComplexField plane_wave(const GridSpec& g) {
  ComplexField f(g, 633e-9);
  for (auto& a : f.samples()) a = 1.0;
  return f;
}

Point2 centroid(const ComplexField& f) {
  const auto& g = f.grid();
  double s = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < g.n_y; ++j)
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double p = std::norm(f.at(i, j));
      s += p;
      sx += p * g.x(i);
      sy += p * g.y(j);
    }
  return {sx / s, sy / s};
}

// Spectral carrier peak of an intensity grid, excluding the DC bin neighbourhood.
Point2 carrier_peak(const RealGrid& I) {
  const auto& g = I.grid;
  double best = -1.0;
  Point2 at{};
  for (std::size_t v = 0; v < g.n_y; ++v) {
    for (std::size_t u = 0; u < g.n_x; ++u) {
      if (std::hypot(g.kx(u), g.ky(v)) < 3.0 * 2.0 * std::numbers::pi / g.extent_x) continue;
      Complex acc{};
      // Direct DFT is fine for the small grids used here.
      for (std::size_t j = 0; j < g.n_y; ++j)
        for (std::size_t i = 0; i < g.n_x; ++i)
          acc += I.at(i, j) * std::polar(1.0, -(g.kx(u) * g.x(i) + g.ky(v) * g.y(j)));
      if (std::abs(acc) > best) {
        best = std::abs(acc);
        at = {g.kx(u), g.ky(v)};
      }
    }
  }
  return at;
}

}  // namespace

TEST_CASE("shift_field") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(1), g);

  SUBCASE("zero shift is the identity") { CHECK(max_abs_diff(shift_field(f, 0.0, 0.0), f) < 1e-12); }

  SUBCASE("one-cell shift equals an integer roll") {
    const auto s = shift_field(f, g.dx(), 0.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.n_y; ++j)
      for (std::size_t i = 8; i + 8 < g.n_x; ++i) worst = std::max(worst, std::abs(s.at(i, j) - f.at(i - 1, j)));
    CHECK(worst < 1e-9);
  }

  SUBCASE("shift then inverse shift, power conserved") {
    const double dx = 0.37e-3, dy = -0.21e-3;
    const auto s = shift_field(f, dx, dy);
    CHECK(std::abs(total_power(s) - total_power(f)) < 1e-9);
    CHECK(max_abs_diff(shift_field(s, -dx, -dy), f) < 1e-9);
  }

  SUBCASE("Gaussian centroid moves by the shift") {
    const auto gauss = synthesize_lg(lg(0), g);
    const double dx = 0.3172e-3, dy = 0.1413e-3;
    const Point2 c = centroid(shift_field(gauss, dx, dy));
    CHECK(std::abs(c.x - dx) < 1e-3 * g.dx());
    CHECK(std::abs(c.y - dy) < 1e-3 * g.dy());
  }

  SUBCASE("oversized shift is rejected") {
    CHECK_THROWS_AS(shift_field(f, 0.3 * g.extent_x, 0.0), GeometryError);
  }
}

TEST_CASE("Michelson: aligned arms give 4|E|^2") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(2), g);
  const auto I = michelson_interferogram(f, MichelsonConfig{});
  const auto ref = intensity(f);
  double worst = 0.0;
  for (std::size_t k = 0; k < ref.values.size(); ++k) worst = std::max(worst, std::abs(I.values[k] - 4.0 * ref.values[k]));
  CHECK(worst < 1e-12);
}

TEST_CASE("Michelson: plane-wave stripes follow the tilt") {
  const GridSpec g{64, 64, 64e-6, 64e-6};
  const auto f = plane_wave(g);
  // 8 and 16 fringes across the grid: vertical stripes, narrower for larger tilt.
  for (double fringes : {8.0, 16.0}) {
    MichelsonConfig cfg;
    cfg.tilt_x = 2.0 * std::numbers::pi * fringes / g.extent_x;
    const auto I = michelson_interferogram(f, cfg);
    const std::size_t period = static_cast<std::size_t>(64 / fringes);
    double worst_rows = 0.0, worst_period = 0.0;
    for (std::size_t j = 0; j < g.n_y; ++j)
      for (std::size_t i = 0; i < g.n_x; ++i) {
        worst_rows = std::max(worst_rows, std::abs(I.at(i, j) - I.at(i, 0)));
        worst_period = std::max(worst_period, std::abs(I.at(i, j) - I.at((i + period) % g.n_x, j)));
      }
    CHECK(worst_rows < 1e-12);    // vertical stripes
    CHECK(worst_period < 1e-12);  // period 2 pi / k
    const Point2 peak = carrier_peak(I);
    CHECK(std::abs(std::abs(peak.x) - cfg.tilt_x) < 2.0 * std::numbers::pi / g.extent_x);
    CHECK(std::abs(peak.y) < 2.0 * std::numbers::pi / g.extent_y);
  }
}

TEST_CASE("Michelson: interferogram is bounded by (1 + r)^2 |E|^2") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(1), g);
  auto cfg = MichelsonConfig::defaults_for_waist(1e-3);
  cfg.arm_ratio = 0.7;
  const auto I = michelson_interferogram(f, cfg);
  double sum = 0.0;
  for (double v : I.values) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum * g.cell_area() <= (1.0 + cfg.arm_ratio) * (1.0 + cfg.arm_ratio) * total_power(f));
}

TEST_CASE("Michelson: LG(-m) interferogram mirrors LG(+m)") {
  const auto g = default_grid();
  auto cfg = MichelsonConfig::defaults_for_waist(1e-3);
  cfg.tilt_y = 0.0;
  for (int m : {1, 2}) {
    const auto plus = michelson_interferogram(synthesize_lg(lg(m), g), cfg);
    const auto minus = michelson_interferogram(synthesize_lg(lg(-m), g), cfg);
    const auto mirrored = mirror_about_x_axis(plus);
    double worst = 0.0;
    for (std::size_t j = 1; j < g.n_y; ++j)
      for (std::size_t i = 0; i < g.n_x; ++i) worst = std::max(worst, std::abs(mirrored.at(i, j) - minus.at(i, j)));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("Michelson: sheared LG shows two opposed forks") {
  const auto g = default_grid();
  const auto cfg = MichelsonConfig::defaults_for_waist(1e-3);
  const auto I = michelson_interferogram(synthesize_lg(lg(1), g), cfg);
  const auto phase = fringe_demodulate(I, {cfg.tilt_x, cfg.tilt_y});
  // One extra fringe at each bifurcation, with opposite senses.
  CHECK(winding_number(phase, {0.4e-3, 0.0}, 0.2e-3) == 1);
  CHECK(winding_number(phase, {-0.4e-3, 0.0}, 0.2e-3) == -1);
  CHECK(winding_number(phase, {0.0, 0.0}, 1.0e-3) == 0);
}

TEST_CASE("Michelson: config validation") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(0), g);
  MichelsonConfig cfg;
  cfg.arm_ratio = 0.0;
  CHECK_THROWS_AS(michelson_interferogram(f, cfg), DomainError);
  cfg.arm_ratio = 1.0;
  cfg.tilt_x = 2.0 * std::numbers::pi / (3.0 * g.dx());  // 3-cell fringes
  CHECK_THROWS_AS(michelson_interferogram(f, cfg), SamplingError);
  cfg.tilt_x = 0.0;
  cfg.shear = {0.3 * g.extent_x, 0.0};
  CHECK_THROWS_AS(michelson_interferogram(f, cfg), GeometryError);
}
