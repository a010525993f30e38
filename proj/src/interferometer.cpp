#include "oamlab/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "oamlab/errors.hpp"

namespace oamlab {

double MichelsonConfig::carrier_magnitude() const { return std::hypot(tilt_x, tilt_y); }

void MichelsonConfig::validate(const GridSpec& grid) const {
  if (!(arm_ratio > 0.0)) throw DomainError("Michelson arm ratio must be positive");
  const double k = carrier_magnitude();
  if (k > 0.0) {
    const double period = 2.0 * std::numbers::pi / k;
    if (period < 4.0 * std::max(grid.dx(), grid.dy())) {
      throw SamplingError("Michelson fringe period is shorter than 4 grid cells");
    }
  }
}

MichelsonConfig MichelsonConfig::defaults_for_waist(double w0, double fringes_per_waist) {
  MichelsonConfig cfg;
  cfg.tilt_x = 2.0 * std::numbers::pi * fringes_per_waist / w0;
  cfg.tilt_y = 0.12 * cfg.tilt_x;
  cfg.shear = {0.8 * w0, 0.0};
  return cfg;
}

ComplexField shift_field(const ComplexField& f, double dx, double dy) {
  const auto& g = f.grid();
  if (std::abs(dx) > 0.25 * g.extent_x || std::abs(dy) > 0.25 * g.extent_y) {
    throw GeometryError("shift exceeds 25% of the grid extent");
  }
  if (dx == 0.0 && dy == 0.0) return f;

  std::vector<Complex> spec(f.samples().begin(), f.samples().end());
  detail::fft2d(spec, g.n_x, g.n_y, false);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double ky = g.ky(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      spec[g.index(i, j)] *= std::polar(1.0, -(g.kx(i) * dx + ky * dy));
    }
  }
  detail::fft2d(spec, g.n_x, g.n_y, true);
  return ComplexField(g, f.wavelength(), std::move(spec));
}

RealGrid michelson_interferogram(const ComplexField& f, const MichelsonConfig& cfg) {
  const auto& g = f.grid();
  cfg.validate(g);
  if (std::abs(cfg.shear.x) > 0.25 * g.extent_x || std::abs(cfg.shear.y) > 0.25 * g.extent_y) {
    throw GeometryError("Michelson shear exceeds 25% of the grid extent");
  }
  // Arm 1 samples E(x + s/2), arm 2 samples E(x - s/2).
  const ComplexField arm1 = shift_field(f, -0.5 * cfg.shear.x, -0.5 * cfg.shear.y);
  const ComplexField arm2 = shift_field(f, 0.5 * cfg.shear.x, 0.5 * cfg.shear.y);

  RealGrid out(g);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double x = g.x(i);
      const Complex tilt = cfg.arm_ratio * std::polar(1.0, cfg.tilt_x * x + cfg.tilt_y * y + cfg.arm_phase);
      out.at(i, j) = std::norm(arm1.at(i, j) + tilt * arm2.at(i, j));
    }
  }
  return out;
}

}  // namespace oamlab
