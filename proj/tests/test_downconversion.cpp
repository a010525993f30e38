#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oamlab/downconversion.hpp"
#include "oamlab/errors.hpp"
#include "oamlab/oam_analysis.hpp"

using namespace oamlab;
using namespace oamlab::testing;

namespace {

ComplexField idler_for(int m_p, int m_s, double gain = 1.0) {
  const auto g = default_grid();
  const auto pump = synthesize_lg(lg(m_p, 0, 1e-3, 442e-9), g);
  const auto aux = synthesize_lg(lg(m_s, 0, 1e-3, 845e-9), g);
  return stimulated_idler(pump, aux, CrystalConfig{gain, 3e-3});
}

}  // namespace

TEST_CASE("idler wavelength from energy conservation") {
  const double li = idler_wavelength(442e-9, 845e-9);
  // 442 * 845 / (845 - 442) nm
  CHECK(li == doctest::Approx(442.0 * 845.0 / 403.0 * 1e-9).epsilon(1e-14));
  CHECK(li > 920e-9);
  CHECK(li < 935e-9);
  CHECK(idler_wavelength(500e-9, 1000e-9) == doctest::Approx(1000e-9).epsilon(1e-14));
  const double back = idler_wavelength(442e-9, li);
  CHECK(std::abs(back - 845e-9) / 845e-9 < 1e-12);
  CHECK_THROWS_AS(idler_wavelength(845e-9, 442e-9), DomainError);
  CHECK_THROWS_AS(idler_wavelength(500e-9, 500e-9), DomainError);
  CHECK_THROWS_AS(idler_wavelength(-1.0, 500e-9), DomainError);
  CHECK_THROWS_AS(idler_wavelength(400e-9, 0.0), DomainError);
}

TEST_CASE("expected idler charge bookkeeping") {
  CHECK(expected_idler_charge(1, 0) == 1);
  CHECK(expected_idler_charge(0, 1) == -1);
  CHECK(expected_idler_charge(0, 0) == 0);
  static_assert(expected_idler_charge(2, -2) == 4);
}

TEST_CASE("stimulated idler: the two reported configurations") {
  const auto a = idler_for(1, 0);
  CHECK(dominant_charge(oam_spectrum(a, {}, 8)) == 1);
  const auto b = idler_for(0, 1);
  CHECK(dominant_charge(oam_spectrum(b, {}, 8)) == -1);
  CHECK(a.wavelength() == doctest::Approx(idler_wavelength(442e-9, 845e-9)));
}

TEST_CASE("stimulated idler: Gaussian inputs give an on-axis maximum") {
  const auto f = idler_for(0, 0);
  CHECK(dominant_charge(oam_spectrum(f, {}, 8)) == 0);
  const auto I = intensity(f);
  CHECK(I.at(128, 128) == max_value(I));
}

TEST_CASE("stimulated idler: conservation sweep with doughnut profile") {
  // Oracle: azimuthal decomposition of the product field, independent of the
  // charge bookkeeping.
  for (int m_p = -2; m_p <= 2; ++m_p) {
    for (int m_s = -2; m_s <= 2; ++m_s) {
      CAPTURE(m_p);
      CAPTURE(m_s);
      const auto f = idler_for(m_p, m_s);
      const auto s = oam_spectrum(f, {}, 8);
      const int m_i = m_p - m_s;
      CHECK(dominant_charge(s) == m_i);
      CHECK(s.at(m_i) >= 0.99 * s.total());
      if (m_i != 0) {
        const auto I = intensity(f);
        CHECK(I.at(128, 128) < 1e-10 * max_value(I));
      }
    }
  }
  CHECK(dominant_charge(oam_spectrum(idler_for(2, 1), {}, 8)) == 1);
}

TEST_CASE("stimulated idler: power scales with gain squared") {
  const double p1 = total_power(idler_for(1, 0, 1.0));
  for (double c : {0.5, 2.0, 3.0}) {
    CHECK(total_power(idler_for(1, 0, c)) == doctest::Approx(c * c * p1).epsilon(1e-12));
  }
}

TEST_CASE("stimulated idler: mirrored inputs negate the charge") {
  const auto g = default_grid();
  for (auto [m_p, m_s] : {std::pair{1, 0}, {0, 1}, {2, -1}, {-1, 1}}) {
    const auto pump = mirror_about_x_axis(synthesize_lg(lg(m_p, 0, 1e-3, 442e-9), g));
    const auto aux = mirror_about_x_axis(synthesize_lg(lg(m_s, 0, 1e-3, 845e-9), g));
    const auto f = stimulated_idler(pump, aux, {});
    CHECK(dominant_charge(oam_spectrum(f, {}, 8)) == -(m_p - m_s));
  }
}

TEST_CASE("stimulated idler: errors") {
  const auto g = default_grid();
  const auto pump = synthesize_lg(lg(0, 0, 1e-3, 442e-9), g);
  const auto aux = synthesize_lg(lg(0, 0, 1e-3, 845e-9), g);
  const auto other = synthesize_lg(lg(0, 0, 1e-3, 845e-9), default_grid(1e-3, 128));
  CHECK_THROWS_AS(stimulated_idler(pump, other, {}), GeometryError);
  CHECK_THROWS_AS(stimulated_idler(aux, pump, {}), DomainError);
  CHECK_THROWS_AS(stimulated_idler(pump, aux, CrystalConfig{0.0, 3e-3}), DomainError);
  CHECK_THROWS_AS(stimulated_idler(pump, aux, CrystalConfig{1.0, -1.0}), DomainError);
}
