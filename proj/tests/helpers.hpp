#pragma once

#include <algorithm>
#include <cmath>

#include "oamlab/field_core.hpp"

namespace oamlab::testing {

inline GridSpec default_grid(double w0 = 1e-3, std::size_t n = 256) {
  return GridSpec{n, n, 8.0 * w0, 8.0 * w0};
}

inline LGModeSpec lg(int m, int p = 0, double w0 = 1e-3, double wavelength = 442e-9) {
  LGModeSpec s;
  s.waist_w0 = w0;
  s.radial_index_p = p;
  s.charge_m = m;
  s.wavelength = wavelength;
  return s;
}

inline double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.samples().size(); ++k) d = std::max(d, std::abs(a.samples()[k] - b.samples()[k]));
  return d;
}

inline double max_value(const RealGrid& g) { return *std::max_element(g.values.begin(), g.values.end()); }

// 1/e^2 intensity radius from the second moment: w = sqrt(2 <r^2>).
inline double moment_radius(const ComplexField& f) {
  const auto& g = f.grid();
  double s0 = 0.0, sr2 = 0.0;
  for (std::size_t j = 0; j < g.n_y; ++j) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double p = std::norm(f.at(i, j));
      s0 += p;
      sr2 += p * (g.x(i) * g.x(i) + g.y(j) * g.y(j));
    }
  }
  return std::sqrt(2.0 * sr2 / s0);
}

}  // namespace oamlab::testing
