#pragma once

#include <optional>
#include <vector>

#include "oamlab/grid.hpp"
#include "oamlab/interferometer.hpp"

namespace oamlab {

/// Power per azimuthal charge in the window [-max_charge, +max_charge].
///
/// `residual` holds the power of every harmonic outside the window, so that
/// sum(power) + residual equals the field's total power.
struct OAMSpectrum {
  int max_charge = 0;
  std::vector<double> power;  // power[m + max_charge]
  double residual = 0.0;
  // Unscaled polar quadrature of all harmonics; its distance from the
  // Cartesian power measures the resampling error.
  double quadrature_power = 0.0;

  double at(int m) const { return power.at(static_cast<std::size_t>(m + max_charge)); }
  double window_power() const;
  double total() const { return window_power() + residual; }
};

// Polar resampling used by oam_spectrum: N_r = n_x / 2, N_phi = 256, bilinear.
inline constexpr std::size_t kAzimuthalSamples = 256;

/// Azimuthal Fourier decomposition about `center`.
///
/// The field is resampled onto a polar grid reaching the nearest grid edge,
/// c_m(r) is obtained by a DFT over phi, and P_m = 2 pi sum |c_m(r)|^2 r dr.
/// The harmonic distribution is then scaled to the field's exact Cartesian
/// power. Throws GeometryError if the center is outside the grid and
/// DomainError for max_charge < 1.
OAMSpectrum oam_spectrum(const ComplexField& f, Point2 center, int max_charge);

/// Argmax over the window. Values within 1e-12 relative of the maximum tie;
/// ties go to smaller |m|, then to positive m. Throws DomainError when the
/// window carries no power.
int dominant_charge(const OAMSpectrum& s);

/// Fourier-transform fringe analysis. The intensity is apodized with a Tukey
/// window, the lobe around +carrier is kept, transformed back, and the
/// carrier ramp exp(-i k.x) is removed with physical coordinates.
struct Demodulation {
  std::vector<Complex> signal;  // complex fringe term, carrier removed
  RealGrid phase;               // arg(signal), in (-pi, pi]
  double carrier_lobe_power = 0.0;
  double dc_lobe_power = 0.0;
  double residual_power = 0.0;  // outside the DC and both carrier lobes
  double dc_lobe_width = 0.0;   // rms radius of the DC lobe, rad/m
  Point2 lobe_peak{};           // measured +carrier lobe centroid, rad/m
};

// Throws DemodulationError when |carrier| < 3 * dc_lobe_width or the carrier
// is below one spectral bin.
Demodulation demodulate(const RealGrid& intensity, Point2 carrier);

// Wrapped phase only; see demodulate().
RealGrid fringe_demodulate(const RealGrid& intensity, Point2 carrier);

/// Sum of wrapped phase increments around a sampled circle, divided by 2 pi.
///
/// Unit phasors are interpolated bilinearly. The loop is declared unreliable
/// (UnreliableLoopError) if an interpolated phasor has magnitude below 0.5,
/// i.e. neighbouring samples disagree, or a step exceeds pi/2. The loop must
/// lie inside the grid (GeometryError) with at least 64 samples.
int winding_number(const RealGrid& phase, Point2 loop_center, double loop_radius);

// Same loop on a field; additionally rejects loops crossing amplitudes below
// 1e-6 of the field maximum.
int winding_number(const ComplexField& f, Point2 loop_center, double loop_radius);

struct ForkReport {
  int charge = 0;
  std::optional<Point2> singularity_location;  // empty when charge == 0
  double axis_angle = 0.0;                     // fork axis from vertical, rad
  double confidence = 0.0;                     // carrier / (carrier + residual)
};

/// Reads the topological charge from a fork interferogram.
///
/// Demodulates at cfg's carrier, finds plaquette residues of the phase where
/// the fringe signal is present, box-sums them (discrete curl), and takes the
/// strongest defect on the +shear side of the fork pair. Its winding number
/// is the reported charge. The fork axis follows the fringes through the
/// fork, measured from the carrier-lobe centroid.
ForkReport detect_fork(const RealGrid& intensity, const MichelsonConfig& cfg);

}  // namespace oamlab
