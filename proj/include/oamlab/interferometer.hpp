#pragma once

#include "oamlab/grid.hpp"

namespace oamlab {

/// Misaligned Michelson: arm 2 is tilted by the carrier (tilt_x, tilt_y) in
/// rad/m and laterally displaced relative to arm 1 by `shear`.
struct MichelsonConfig {
  double tilt_x = 0.0;
  double tilt_y = 0.0;
  Point2 shear{};
  double arm_phase = 0.0;
  double arm_ratio = 1.0;

  double carrier_magnitude() const;

  // arm_ratio > 0 and, for nonzero tilt, a fringe period of at least 4 cells
  // along each axis of `grid`. Throws DomainError / SamplingError.
  void validate(const GridSpec& grid) const;

  /// Fringe period w0 / fringes_per_waist along x, tilt_y = 0.12 tilt_x,
  /// shear 0.8 w0 along x. Six fringes per waist resolve forks up to |m| = 4
  /// on the default grid; three keep fringes resolvable on coarse scans.
  static MichelsonConfig defaults_for_waist(double w0, double fringes_per_waist = 6.0);
};

/// Translates the field by (dx, dy) with a Fourier phase ramp, i.e. the
/// result g satisfies g(x, y) = f(x - dx, y - dy). Shifts above 25% of the
/// extent throw GeometryError.
ComplexField shift_field(const ComplexField& f, double dx, double dy);

/// Single output port of the misaligned Michelson:
///   I = |E(x + sx/2, y + sy/2) + r exp(i(tx x + ty y + phi)) E(x - sx/2, y - sy/2)|^2
RealGrid michelson_interferogram(const ComplexField& f, const MichelsonConfig& cfg);

}  // namespace oamlab
