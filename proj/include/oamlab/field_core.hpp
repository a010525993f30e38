#pragma once

#include "oamlab/grid.hpp"

namespace oamlab {

/// Laguerre-Gauss mode at its waist plane.
///
/// `charge_m` is the azimuthal index (OAM per photon in units of hbar) and
/// `radial_index_p` the number of radial nodes. Phase follows exp(+i m phi)
/// with phi = atan2(y, x).
struct LGModeSpec {
  double waist_w0 = 1e-3;
  int radial_index_p = 0;
  int charge_m = 0;
  Point2 center{};
  double global_phase = 0.0;
  double wavelength = 442e-9;
};

// Minimum grid extent (per axis) accepted by synthesize_lg for a mode.
double required_extent(const LGModeSpec& spec);

/// Samples the LG amplitude
///   (r sqrt2 / w0)^|m| L_p^|m|(2 r^2 / w0^2) exp(-r^2 / w0^2) exp(i m phi)
/// on `grid`, rescaled so that the discrete total power is exactly 1.
///
/// Throws DomainError for non-positive waist/wavelength or negative p, and
/// SamplingError when w0 spans fewer than 4 cells or the grid extent is below
/// required_extent().
ComplexField synthesize_lg(const LGModeSpec& spec, const GridSpec& grid);

// Generalized Laguerre polynomial L_p^alpha(x) by the three-term recurrence.
double generalized_laguerre(int p, double alpha, double x);

double total_power(const ComplexField& f);

// <a, b> = sum a * conj(b) * cell area. Grids must match.
Complex inner_product(const ComplexField& a, const ComplexField& b);

ComplexField conjugate_field(const ComplexField& f);
ComplexField scale_field(const ComplexField& f, Complex factor);
ComplexField add_fields(const ComplexField& a, const ComplexField& b);

// Reflection y -> -y (row j -> row n_y - j, row 0 fixed).
ComplexField mirror_about_x_axis(const ComplexField& f);
RealGrid mirror_about_x_axis(const RealGrid& g);

// Fraction of spectral power whose normalized radial frequency
// sqrt((kx/kx_nyq)^2 + (ky/ky_nyq)^2) exceeds 0.9.
double outer_spectral_fraction(const ComplexField& f);

/// Exact scalar propagation by the angular spectrum transfer function
/// exp(i z sqrt(k^2 - kx^2 - ky^2)). Evanescent components are set to zero.
///
/// Throws SamplingError if more than 1e-6 of the spectral power sits in the
/// outer 10% of the spectral disc (the field would alias).
ComplexField propagate_angular_spectrum(const ComplexField& f, double distance);

// Multiplies by exp(-i pi (x^2 + y^2) / (lambda f)). Throws DomainError for f == 0.
ComplexField apply_thin_lens(const ComplexField& f, double focal_length);

}  // namespace oamlab
