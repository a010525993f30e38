#include "oamlab/field_core.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "oamlab/errors.hpp"

namespace oamlab {
namespace {

constexpr double kPi = std::numbers::pi;

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) throw GeometryError("fields live on different grids");
}

std::vector<Complex> spectrum_of(const ComplexField& f) {
  std::vector<Complex> spec(f.samples().begin(), f.samples().end());
  detail::fft2d(spec, f.grid().n_x, f.grid().n_y, false);
  return spec;
}

}  // namespace

double required_extent(const LGModeSpec& spec) {
  return 4.0 * spec.waist_w0 * std::sqrt(std::abs(spec.charge_m) + spec.radial_index_p + 1.0);
}

double generalized_laguerre(int p, double alpha, double x) {
  if (p == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < p; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

ComplexField synthesize_lg(const LGModeSpec& spec, const GridSpec& grid) {
  grid.validate();
  if (!(spec.waist_w0 > 0.0)) throw DomainError("LG waist must be positive");
  if (spec.radial_index_p < 0) throw DomainError("LG radial index must be non-negative");
  if (!(spec.wavelength > 0.0)) throw DomainError("LG wavelength must be positive");
  if (spec.waist_w0 < 4.0 * std::max(grid.dx(), grid.dy())) {
    throw SamplingError("LG waist spans fewer than 4 grid cells");
  }
  const double need = required_extent(spec);
  const double room_x = grid.extent_x - 2.0 * std::abs(spec.center.x);
  const double room_y = grid.extent_y - 2.0 * std::abs(spec.center.y);
  if (room_x < need || room_y < need) {
    throw SamplingError("grid extent too small for LG mode (needs " + std::to_string(need) +
                        " m around the mode center)");
  }

  const int order = std::abs(spec.charge_m);
  const double sign = spec.charge_m < 0 ? -1.0 : 1.0;
  const double scale = std::sqrt(2.0) / spec.waist_w0;
  const double w2 = spec.waist_w0 * spec.waist_w0;
  const Complex phase0 = std::polar(1.0, spec.global_phase);

  ComplexField out(grid, spec.wavelength);
  double power = 0.0;
  for (std::size_t j = 0; j < grid.n_y; ++j) {
    const double y = grid.y(j) - spec.center.y;
    for (std::size_t i = 0; i < grid.n_x; ++i) {
      const double x = grid.x(i) - spec.center.x;
      const double r2 = x * x + y * y;
      // (sqrt2 (x + i sgn(m) y) / w0)^|m| = (r sqrt2 / w0)^|m| exp(i m phi)
      const Complex base(scale * x, sign * scale * y);
      Complex vortex(1.0, 0.0);
      for (int k = 0; k < order; ++k) vortex *= base;
      const double radial = generalized_laguerre(spec.radial_index_p, order, 2.0 * r2 / w2) *
                            std::exp(-r2 / w2);
      const Complex a = phase0 * vortex * radial;
      out.at(i, j) = a;
      power += std::norm(a);
    }
  }
  power *= grid.cell_area();
  if (!(power > 0.0)) throw SamplingError("LG mode has no power on this grid");
  const double norm = 1.0 / std::sqrt(power);
  for (auto& a : out.samples()) a *= norm;
  return out;
}

double total_power(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& a : f.samples()) sum += std::norm(a);
  return sum * f.grid().cell_area();
}

Complex inner_product(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  Complex sum{};
  auto sa = a.samples();
  auto sb = b.samples();
  for (std::size_t k = 0; k < sa.size(); ++k) sum += sa[k] * std::conj(sb[k]);
  return sum * a.grid().cell_area();
}

ComplexField conjugate_field(const ComplexField& f) {
  ComplexField out = f;
  for (auto& a : out.samples()) a = std::conj(a);
  return out;
}

ComplexField scale_field(const ComplexField& f, Complex factor) {
  ComplexField out = f;
  for (auto& a : out.samples()) a *= factor;
  return out;
}

ComplexField add_fields(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  ComplexField out = a;
  auto sb = b.samples();
  auto so = out.samples();
  for (std::size_t k = 0; k < so.size(); ++k) so[k] += sb[k];
  return out;
}

ComplexField mirror_about_x_axis(const ComplexField& f) {
  const auto& g = f.grid();
  ComplexField out(g, f.wavelength());
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const std::size_t src = (g.n_y - j) % g.n_y;
    for (std::size_t i = 0; i < g.n_x; ++i) out.at(i, j) = f.at(i, src);
  }
  return out;
}

RealGrid mirror_about_x_axis(const RealGrid& in) {
  const auto& g = in.grid;
  RealGrid out(g);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const std::size_t src = (g.n_y - j) % g.n_y;
    for (std::size_t i = 0; i < g.n_x; ++i) out.at(i, j) = in.at(i, src);
  }
  return out;
}

double outer_spectral_fraction(const ComplexField& f) {
  const auto& g = f.grid();
  const auto spec = spectrum_of(f);
  const double kx_nyq = kPi / g.dx();
  const double ky_nyq = kPi / g.dy();
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double vy = g.ky(j) / ky_nyq;
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double vx = g.kx(i) / kx_nyq;
      const double p = std::norm(spec[g.index(i, j)]);
      total += p;
      if (vx * vx + vy * vy > 0.81) outer += p;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

ComplexField propagate_angular_spectrum(const ComplexField& f, double distance) {
  const auto& g = f.grid();
  std::vector<Complex> spec = spectrum_of(f);

  double outer = 0.0;
  double total = 0.0;
  const double kx_nyq = kPi / g.dx();
  const double ky_nyq = kPi / g.dy();
  const double k = 2.0 * kPi / f.wavelength();
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double ky = g.ky(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double kx = g.kx(i);
      auto& s = spec[g.index(i, j)];
      const double p = std::norm(s);
      total += p;
      const double vx = kx / kx_nyq;
      const double vy = ky / ky_nyq;
      if (vx * vx + vy * vy > 0.81) outer += p;

      const double kz2 = k * k - kx * kx - ky * ky;
      if (kz2 <= 0.0) {
        s = 0.0;  // evanescent
      } else {
        s *= std::polar(1.0, std::sqrt(kz2) * distance);
      }
    }
  }
  if (total > 0.0 && outer / total > 1e-6) {
    throw SamplingError("field is not band-limited on this grid (outer spectral fraction " +
                        std::to_string(outer / total) + ")");
  }
  detail::fft2d(spec, g.n_x, g.n_y, true);
  return ComplexField(g, f.wavelength(), std::move(spec));
}

ComplexField apply_thin_lens(const ComplexField& f, double focal_length) {
  if (focal_length == 0.0 || !std::isfinite(focal_length)) {
    throw DomainError("thin lens focal length must be finite and nonzero");
  }
  const auto& g = f.grid();
  const double coeff = -kPi / (f.wavelength() * focal_length);
  ComplexField out = f;
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double x = g.x(i);
      out.at(i, j) *= std::polar(1.0, coeff * (x * x + y * y));
    }
  }
  return out;
}

}  // namespace oamlab
