#include "oamlab/downconversion.hpp"

#include <cmath>

#include "oamlab/errors.hpp"

namespace oamlab {

void CrystalConfig::validate() const {
  if (!(gain > 0.0)) throw DomainError("crystal gain must be positive");
  if (!(crystal_length > 0.0)) throw DomainError("crystal length must be positive");
}

double idler_wavelength(double lambda_p, double lambda_s) {
  if (!(lambda_p > 0.0) || !(lambda_s > 0.0)) throw DomainError("wavelengths must be positive");
  if (!(lambda_p < lambda_s)) {
    throw DomainError("down-conversion needs the pump wavelength below the signal wavelength");
  }
  return 1.0 / (1.0 / lambda_p - 1.0 / lambda_s);
}

ComplexField stimulated_idler(const ComplexField& pump, const ComplexField& aux,
                              const CrystalConfig& cfg) {
  cfg.validate();
  if (!(pump.grid() == aux.grid())) throw GeometryError("pump and auxiliary grids differ");
  const double lambda_i = idler_wavelength(pump.wavelength(), aux.wavelength());

  ComplexField idler(pump.grid(), lambda_i);
  auto p = pump.samples();
  auto s = aux.samples();
  auto out = idler.samples();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = cfg.gain * p[k] * std::conj(s[k]);
  return idler;
}

}  // namespace oamlab
