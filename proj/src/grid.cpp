#include "oamlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oamlab/errors.hpp"

namespace oamlab {

void GridSpec::validate(std::size_t min_samples) const {
  if (n_x < min_samples || n_y < min_samples) {
    throw GeometryError("grid needs at least " + std::to_string(min_samples) +
                        " samples per axis, got " + std::to_string(n_x) + "x" +
                        std::to_string(n_y));
  }
  if (!(extent_x > 0.0) || !(extent_y > 0.0)) {
    throw GeometryError("grid extent must be positive");
  }
}

bool GridSpec::contains(Point2 p) const {
  const double ci = column_of(p.x);
  const double cj = row_of(p.y);
  return ci >= 0.0 && ci <= static_cast<double>(n_x - 1) && cj >= 0.0 &&
         cj <= static_cast<double>(n_y - 1);
}

double GridSpec::kx(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(n_x);
  auto s = static_cast<std::ptrdiff_t>(k);
  if (s >= n / 2) s -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(s) / extent_x;
}

double GridSpec::ky(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(n_y);
  auto s = static_cast<std::ptrdiff_t>(k);
  if (s >= n / 2) s -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(s) / extent_y;
}

ComplexField::ComplexField(GridSpec grid, double wavelength)
    : ComplexField(grid, wavelength, std::vector<Complex>(grid.size())) {}

ComplexField::ComplexField(GridSpec grid, double wavelength, std::vector<Complex> amplitude)
    : grid_(grid), wavelength_(wavelength), amplitude_(std::move(amplitude)) {
  grid_.validate();
  if (!(wavelength_ > 0.0)) throw DomainError("wavelength must be positive");
  if (amplitude_.size() != grid_.size()) {
    throw GeometryError("amplitude size does not match grid");
  }
}

RealGrid::RealGrid(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw GeometryError("value count does not match grid");
}

RealGrid intensity(const ComplexField& f) {
  RealGrid out(f.grid());
  auto a = f.samples();
  for (std::size_t k = 0; k < a.size(); ++k) out.values[k] = std::norm(a[k]);
  return out;
}

RealGrid wrapped_phase(const ComplexField& f) {
  RealGrid out(f.grid());
  auto a = f.samples();
  for (std::size_t k = 0; k < a.size(); ++k) out.values[k] = wrap_phase(std::arg(a[k]));
  return out;
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(angle, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

}  // namespace oamlab
