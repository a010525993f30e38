#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oamlab {

using Complex = std::complex<double>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform sampling of a rectangular transverse plane centered on the optical axis.
///
/// Sample (i, j) sits at x = (i - n_x/2) * dx, y = (j - n_y/2) * dy, so the
/// origin is always a sample point. Storage is row-major with x fastest:
/// index = j * n_x + i.
struct GridSpec {
  std::size_t n_x = 256;
  std::size_t n_y = 256;
  double extent_x = 8e-3;
  double extent_y = 8e-3;

  // Throws GeometryError unless both counts are >= min_samples and extents > 0.
  void validate(std::size_t min_samples = kMinFieldSamples) const;

  double dx() const { return extent_x / static_cast<double>(n_x); }
  double dy() const { return extent_y / static_cast<double>(n_y); }
  double cell_area() const { return dx() * dy(); }
  std::size_t size() const { return n_x * n_y; }
  std::size_t index(std::size_t i, std::size_t j) const { return j * n_x + i; }

  double x(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_x / 2)) * dx();
  }
  double y(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(n_y / 2)) * dy();
  }
  // Inverse of x()/y() in fractional sample units.
  double column_of(double x_m) const { return x_m / dx() + static_cast<double>(n_x / 2); }
  double row_of(double y_m) const { return y_m / dy() + static_cast<double>(n_y / 2); }

  bool contains(Point2 p) const;

  // Angular spatial frequency (rad/m) of FFT bin k along each axis.
  double kx(std::size_t k) const;
  double ky(std::size_t k) const;

  bool operator==(const GridSpec&) const = default;

  static constexpr std::size_t kMinFieldSamples = 16;
};

/// Sampled complex scalar amplitude. Power is sum |a|^2 * cell area.
class ComplexField {
 public:
  ComplexField(GridSpec grid, double wavelength);
  ComplexField(GridSpec grid, double wavelength, std::vector<Complex> amplitude);

  const GridSpec& grid() const { return grid_; }
  double wavelength() const { return wavelength_; }

  std::span<const Complex> samples() const { return amplitude_; }
  std::span<Complex> samples() { return amplitude_; }

  const Complex& at(std::size_t i, std::size_t j) const { return amplitude_[grid_.index(i, j)]; }
  Complex& at(std::size_t i, std::size_t j) { return amplitude_[grid_.index(i, j)]; }

 private:
  GridSpec grid_;
  double wavelength_;
  std::vector<Complex> amplitude_;
};

/// Real-valued map on a grid (intensities, wrapped phases, detector scans).
struct RealGrid {
  GridSpec grid;
  std::vector<double> values;

  RealGrid() = default;
  explicit RealGrid(GridSpec g) : grid(g), values(g.size(), 0.0) {}
  RealGrid(GridSpec g, std::vector<double> v);

  double at(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
  double& at(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
};

// |a|^2 per sample.
RealGrid intensity(const ComplexField& f);

// arg(a) per sample, in (-pi, pi].
RealGrid wrapped_phase(const ComplexField& f);

// Map any angle to the principal interval (-pi, pi].
double wrap_phase(double angle);

}  // namespace oamlab
