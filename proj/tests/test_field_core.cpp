#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "oamlab/errors.hpp"
#include "oamlab/oam_analysis.hpp"

using namespace oamlab;
using namespace oamlab::testing;

TEST_CASE("grid sample mapping is centered and invertible") {
  const GridSpec g{32, 16, 4.0, 2.0};
  CHECK(g.x(16) == 0.0);
  CHECK(g.y(8) == 0.0);
  CHECK(g.x(0) == doctest::Approx(-2.0));
  CHECK(g.y(15) == doctest::Approx(0.875));
  for (std::size_t i = 0; i < g.n_x; ++i) CHECK(g.column_of(g.x(i)) == doctest::Approx(static_cast<double>(i)));
  for (std::size_t j = 0; j < g.n_y; ++j) CHECK(g.row_of(g.y(j)) == doctest::Approx(static_cast<double>(j)));
  CHECK_THROWS_AS(GridSpec({8, 32, 1.0, 1.0}).validate(), GeometryError);
  CHECK_THROWS_AS(GridSpec({32, 32, 0.0, 1.0}).validate(), GeometryError);
}

TEST_CASE("wrap_phase maps into (-pi, pi]") {
  const double pi = std::numbers::pi;
  CHECK(wrap_phase(pi) == doctest::Approx(pi));
  CHECK(wrap_phase(-pi) == doctest::Approx(pi));
  CHECK(wrap_phase(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  CHECK(wrap_phase(0.25) == doctest::Approx(0.25));
}

TEST_CASE("generalized Laguerre matches closed forms") {
  for (double x : {0.0, 0.3, 1.7, 4.0}) {
    CHECK(generalized_laguerre(1, 2.0, x) == doctest::Approx(3.0 - x));
    CHECK(generalized_laguerre(2, 1.0, x) == doctest::Approx(0.5 * x * x - 3.0 * x + 3.0));
  }
}

TEST_CASE("synthesize_lg: Gaussian peaks on axis with constant phase") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(0), g);
  const auto I = intensity(f);
  CHECK(I.at(128, 128) == max_value(I));
  double worst_phase = 0.0;
  for (const auto& a : f.samples()) worst_phase = std::max(worst_phase, std::abs(std::arg(a)));
  CHECK(worst_phase < 1e-12);
  CHECK(std::abs(total_power(f) - 1.0) < 1e-9);
}

TEST_CASE("synthesize_lg: charge-1 doughnut ring radius") {
  const double w0 = 1e-3;
  const auto g = default_grid(w0);
  const auto f = synthesize_lg(lg(1, 0, w0), g);
  const auto I = intensity(f);
  const double peak = max_value(I);
  CHECK(I.at(128, 128) < 1e-12 * peak);

  // Analytic ring radius w0 sqrt(|m|/2); grid argmax must land within a cell.
  const auto it = std::max_element(I.values.begin(), I.values.end());
  const auto k = static_cast<std::size_t>(it - I.values.begin());
  const double r = std::hypot(g.x(k % g.n_x), g.y(k / g.n_x));
  CHECK(std::abs(r - w0 * std::sqrt(0.5)) <= g.dx());
}

TEST_CASE("synthesize_lg: m and -m share intensity, conjugate phase") {
  const auto g = default_grid();
  const auto plus = synthesize_lg(lg(1), g);
  const auto minus = synthesize_lg(lg(-1), g);
  double worst_i = 0.0, worst_c = 0.0;
  for (std::size_t k = 0; k < plus.samples().size(); ++k) {
    worst_i = std::max(worst_i, std::abs(std::norm(plus.samples()[k]) - std::norm(minus.samples()[k])));
    worst_c = std::max(worst_c, std::abs(std::conj(plus.samples()[k]) - minus.samples()[k]));
  }
  CHECK(worst_i < 1e-12);
  CHECK(worst_c < 1e-12);
}

TEST_CASE("synthesize_lg: phase circulates m times") {
  const auto g = default_grid();
  for (int m = -3; m <= 3; ++m) {
    CHECK(winding_number(synthesize_lg(lg(m), g), {0.0, 0.0}, 0.7e-3) == m);
  }
}

TEST_CASE("synthesize_lg: radial modes and offset centers keep unit power") {
  const auto g = default_grid();
  auto spec = lg(1, 1);
  CHECK(std::abs(total_power(synthesize_lg(spec, g)) - 1.0) < 1e-9);
  spec = lg(0);
  spec.center = {0.5e-3, -0.25e-3};
  spec.global_phase = 0.7;
  const auto f = synthesize_lg(spec, g);
  CHECK(std::abs(total_power(f) - 1.0) < 1e-9);
  const auto ci = static_cast<std::size_t>(g.column_of(0.5e-3));
  const auto cj = static_cast<std::size_t>(g.row_of(-0.25e-3));
  CHECK(std::arg(f.at(ci, cj)) == doctest::Approx(0.7));
}

TEST_CASE("synthesize_lg: errors") {
  const auto g = default_grid();
  CHECK_THROWS_AS(synthesize_lg(lg(0, 0, 0.0), g), DomainError);
  CHECK_THROWS_AS(synthesize_lg(lg(0, -1), g), DomainError);
  // Waist of 2 cells.
  CHECK_THROWS_AS(synthesize_lg(lg(0, 0, 2.0 * g.dx()), g), SamplingError);
  // Extent 8 w0 is too small for |m| = 4 (needs 4 w0 sqrt(5)).
  CHECK_THROWS_AS(synthesize_lg(lg(4), g), SamplingError);
  CHECK_NOTHROW(synthesize_lg(lg(3), g));
}

TEST_CASE("total_power: zero, normalized and quadratic scaling") {
  const auto g = default_grid();
  CHECK(total_power(ComplexField(g, 442e-9)) == 0.0);
  const auto f = synthesize_lg(lg(2), g);
  CHECK(std::abs(total_power(f) - 1.0) < 1e-9);
  CHECK(total_power(scale_field(f, 2.0)) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("LG modes are orthogonal") {
  const auto g = default_grid();
  std::vector<ComplexField> modes;
  for (int m = -3; m <= 3; ++m) modes.push_back(synthesize_lg(lg(m), g));
  for (std::size_t a = 0; a < modes.size(); ++a) {
    CHECK(std::abs(inner_product(modes[a], modes[a]) - 1.0) < 1e-9);
    for (std::size_t b = a + 1; b < modes.size(); ++b) {
      CHECK(std::abs(inner_product(modes[a], modes[b])) < 1e-6);
    }
  }
}

TEST_CASE("grid refinement barely moves LG power") {
  for (int m : {0, 1, 2}) {
    const double coarse = total_power(synthesize_lg(lg(m), default_grid(1e-3, 128)));
    const double fine = total_power(synthesize_lg(lg(m), default_grid(1e-3, 256)));
    CHECK(std::abs(fine - coarse) / coarse < 1e-6);
  }
}

TEST_CASE("conjugate_field flips charge and is an involution") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(1), g);
  const auto c = conjugate_field(f);
  CHECK(dominant_charge(oam_spectrum(c, {}, 4)) == -1);
  CHECK(max_abs_diff(conjugate_field(c), f) == 0.0);
  const auto I0 = intensity(f);
  const auto I1 = intensity(c);
  CHECK(I0.values == I1.values);

  const auto real = synthesize_lg(lg(0), g);
  CHECK(max_abs_diff(conjugate_field(real), real) == 0.0);

  for (int m = -3; m <= 3; ++m) {
    const auto mode = synthesize_lg(lg(m), g);
    CHECK(dominant_charge(oam_spectrum(conjugate_field(mode), {}, 4)) ==
          -dominant_charge(oam_spectrum(mode, {}, 4)));
  }
}

TEST_CASE("angular spectrum propagation") {
  const double w0 = 1e-3;
  const auto g = default_grid(w0);

  SUBCASE("zero distance is the identity") {
    const auto f = synthesize_lg(lg(2), g);
    CHECK(max_abs_diff(propagate_angular_spectrum(f, 0.0), f) < 1e-12);
  }
  SUBCASE("power is conserved") {
    for (double z : {0.1, 1.0, 5.0}) {
      const auto f = synthesize_lg(lg(1), g);
      const auto out = propagate_angular_spectrum(f, z);
      CHECK(std::abs(total_power(out) - total_power(f)) / total_power(f) < 1e-9);
    }
  }
  SUBCASE("charge survives propagation") {
    for (double z : {0.5, 3.0, 7.0}) {
      const auto out = propagate_angular_spectrum(synthesize_lg(lg(1), g), z);
      CHECK(dominant_charge(oam_spectrum(out, {}, 4)) == 1);
    }
  }
  SUBCASE("Gaussian expands by sqrt2 over one Rayleigh range") {
    const double lambda = 442e-9;
    const double z_r = std::numbers::pi * w0 * w0 / lambda;
    const auto f = synthesize_lg(lg(0, 0, w0, lambda), g);
    CHECK(std::abs(moment_radius(f) - w0) <= g.dx());
    const auto out = propagate_angular_spectrum(f, z_r);
    CHECK(std::abs(moment_radius(out) - w0 * std::sqrt(2.0)) <= g.dx());
  }
  SUBCASE("aliased field is rejected") {
    ComplexField noise(g, 442e-9);
    for (std::size_t k = 0; k < noise.samples().size(); ++k) noise.samples()[k] = (k % 2) ? 1.0 : -1.0;
    CHECK(outer_spectral_fraction(noise) > 0.5);
    CHECK_THROWS_AS(propagate_angular_spectrum(noise, 0.1), SamplingError);
  }
}

TEST_CASE("thin lens") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(1), g);
  const auto out = apply_thin_lens(f, 0.5);
  const auto I0 = intensity(f);
  const auto I1 = intensity(out);
  double worst = 0.0;
  for (std::size_t k = 0; k < I0.values.size(); ++k) worst = std::max(worst, std::abs(I0.values[k] - I1.values[k]));
  CHECK(worst < 1e-12 * max_value(I0));
  CHECK(std::abs(total_power(out) - total_power(f)) < 1e-12);
  CHECK(max_abs_diff(apply_thin_lens(out, -0.5), f) < 1e-12);
  CHECK(dominant_charge(oam_spectrum(out, {}, 4)) == 1);
  CHECK_THROWS_AS(apply_thin_lens(f, 0.0), DomainError);
}

TEST_CASE("mirror about the x axis") {
  const auto g = default_grid();
  const auto f = synthesize_lg(lg(2), g);
  const auto m = mirror_about_x_axis(f);
  const auto expect = synthesize_lg(lg(-2), g);
  double worst = 0.0;
  for (std::size_t j = 1; j < g.n_y; ++j)
    for (std::size_t i = 0; i < g.n_x; ++i) worst = std::max(worst, std::abs(m.at(i, j) - expect.at(i, j)));
  CHECK(worst < 1e-12);
  CHECK(max_abs_diff(mirror_about_x_axis(m), f) == 0.0);
}
