#pragma once

#include "oamlab/grid.hpp"

namespace oamlab {

struct CrystalConfig {
  double gain = 1.0;             // effective coupling x length, dimensionless
  double crystal_length = 3e-3;  // metadata only in the thin-crystal model

  void validate() const;
};

// 1/lambda_i = 1/lambda_p - 1/lambda_s. Requires 0 < lambda_p < lambda_s.
double idler_wavelength(double lambda_p, double lambda_s);

// Charge bookkeeping m_i = m_p - m_s.
constexpr int expected_idler_charge(int m_p, int m_s) { return m_p - m_s; }

/// Thin-crystal stimulated idler at the crystal plane:
///   E_i(x, y) = gain * E_p(x, y) * conj(E_s(x, y)).
/// Spontaneous emission is neglected. The result carries the idler wavelength.
///
/// Throws GeometryError for mismatched grids and DomainError unless the pump
/// wavelength is shorter than the auxiliary (signal-seeding) wavelength.
ComplexField stimulated_idler(const ComplexField& pump, const ComplexField& aux,
                              const CrystalConfig& cfg);

}  // namespace oamlab
