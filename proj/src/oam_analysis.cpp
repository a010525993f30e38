#include "oamlab/oam_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "oamlab/errors.hpp"
#include "oamlab/field_core.hpp"

namespace oamlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bilinear interpolation at fractional sample coordinates (ci, cj); caller
// guarantees 0 <= ci <= n_x - 1 and 0 <= cj <= n_y - 1.
template <typename T, typename Get>
T bilinear(const GridSpec& g, double ci, double cj, Get get) {
  const auto i0 = std::min(static_cast<std::size_t>(std::floor(ci)), g.n_x - 2);
  const auto j0 = std::min(static_cast<std::size_t>(std::floor(cj)), g.n_y - 2);
  const double fx = ci - static_cast<double>(i0);
  const double fy = cj - static_cast<double>(j0);
  return (1.0 - fx) * (1.0 - fy) * get(i0, j0) + fx * (1.0 - fy) * get(i0 + 1, j0) +
         (1.0 - fx) * fy * get(i0, j0 + 1) + fx * fy * get(i0 + 1, j0 + 1);
}

double tukey(std::size_t k, std::size_t n, double alpha) {
  const double t = (static_cast<double>(k) + 0.5) / static_cast<double>(n);
  const double edge = 0.5 * alpha;
  if (t < edge) return 0.5 * (1.0 - std::cos(kPi * t / edge));
  if (t > 1.0 - edge) return 0.5 * (1.0 - std::cos(kPi * (1.0 - t) / edge));
  return 1.0;
}

constexpr double kTukeyAlpha = 0.25;

void require_loop_inside(const GridSpec& g, Point2 c, double radius) {
  if (!(radius > 0.0)) throw GeometryError("winding loop radius must be positive");
  const Point2 lo{c.x - radius, c.y - radius};
  const Point2 hi{c.x + radius, c.y + radius};
  if (!g.contains(lo) || !g.contains(hi)) throw GeometryError("winding loop leaves the grid");
}

std::size_t loop_samples(const GridSpec& g, double radius) {
  const double step = 0.25 * std::min(g.dx(), g.dy());
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(kTwoPi * radius / step)));
}

double mean_on_circle(const RealGrid& amp, Point2 c, double radius) {
  const auto& g = amp.grid;
  constexpr int kSamples = 64;
  double sum = 0.0;
  int used = 0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = kTwoPi * k / kSamples;
    const Point2 p{c.x + radius * std::cos(t), c.y + radius * std::sin(t)};
    if (!g.contains(p)) continue;
    sum += bilinear<double>(g, g.column_of(p.x), g.row_of(p.y),
                            [&](std::size_t i, std::size_t j) { return amp.at(i, j); });
    ++used;
  }
  return used > 0 ? sum / used : 0.0;
}

}  // namespace

double OAMSpectrum::window_power() const {
  double s = 0.0;
  for (double p : power) s += p;
  return s;
}

OAMSpectrum oam_spectrum(const ComplexField& f, Point2 center, int max_charge) {
  if (max_charge < 1) throw DomainError("charge window must be at least 1");
  const auto& g = f.grid();
  if (!g.contains(center)) throw GeometryError("spectrum center lies outside the grid");

  const double r_max = std::min({center.x - g.x(0), g.x(g.n_x - 1) - center.x,
                                 center.y - g.y(0), g.y(g.n_y - 1) - center.y});
  const std::size_t n_r = g.n_x / 2;
  const std::size_t n_phi = kAzimuthalSamples;
  const double dr = r_max / static_cast<double>(n_r);

  std::vector<Complex> rings(n_r * n_phi);
  for (std::size_t k = 0; k < n_r; ++k) {
    const double r = (static_cast<double>(k) + 0.5) * dr;
    for (std::size_t q = 0; q < n_phi; ++q) {
      const double phi = kTwoPi * static_cast<double>(q) / static_cast<double>(n_phi);
      const double ci = g.column_of(center.x + r * std::cos(phi));
      const double cj = g.row_of(center.y + r * std::sin(phi));
      rings[k * n_phi + q] = bilinear<Complex>(
          g, ci, cj, [&](std::size_t i, std::size_t j) { return f.at(i, j); });
    }
  }
  detail::fft_rows(rings, n_phi, n_r);

  // Harmonic power over all n_phi charges, P_m = 2 pi sum |c_m(r)|^2 r dr.
  std::vector<double> harmonic(n_phi, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n_phi);
  for (std::size_t k = 0; k < n_r; ++k) {
    const double r = (static_cast<double>(k) + 0.5) * dr;
    for (std::size_t q = 0; q < n_phi; ++q) {
      harmonic[q] += kTwoPi * std::norm(rings[k * n_phi + q] * inv_n) * r * dr;
    }
  }
  double polar_total = 0.0;
  for (double h : harmonic) polar_total += h;

  OAMSpectrum s;
  s.max_charge = max_charge;
  s.power.assign(static_cast<std::size_t>(2 * max_charge + 1), 0.0);
  s.quadrature_power = polar_total;
  const double cartesian_total = total_power(f);
  if (!(polar_total > 0.0)) {
    s.residual = cartesian_total;
    return s;
  }
  const double scale = cartesian_total / polar_total;
  const auto n = static_cast<int>(n_phi);
  for (int m = -max_charge; m <= max_charge; ++m) {
    if (std::abs(m) >= n / 2) continue;
    const auto q = static_cast<std::size_t>((m + n) % n);
    s.power[static_cast<std::size_t>(m + max_charge)] = harmonic[q] * scale;
  }
  s.residual = std::max(0.0, cartesian_total - s.window_power());
  return s;
}

int dominant_charge(const OAMSpectrum& s) {
  const double peak = s.power.empty() ? 0.0 : *std::max_element(s.power.begin(), s.power.end());
  if (!(peak > 0.0)) throw DomainError("spectrum window carries no power");
  const double tie = peak * (1.0 - 1e-12);
  // Visit 0, +1, -1, +2, -2, ... so the first tied entry wins.
  for (int a = 0; a <= s.max_charge; ++a) {
    if (s.at(a) >= tie) return a;
    if (a > 0 && s.at(-a) >= tie) return -a;
  }
  return 0;  // unreachable
}

Demodulation demodulate(const RealGrid& intensity, Point2 carrier) {
  const auto& g = intensity.grid;
  g.validate(8);
  const double c_mag = std::hypot(carrier.x, carrier.y);
  const double bin = kTwoPi / std::max(g.extent_x, g.extent_y);
  if (c_mag < bin) throw DemodulationError("carrier is below one spectral bin");
  if (std::abs(carrier.x) * 1.5 > kPi / g.dx() || std::abs(carrier.y) * 1.5 > kPi / g.dy()) {
    throw DemodulationError("carrier lobe extends past the Nyquist frequency");
  }

  // Mean removed first so the apodized background does not leak into the lobe.
  double mean = 0.0;
  for (double v : intensity.values) mean += v;
  mean /= static_cast<double>(g.size());
  // Lobe diagnostics use the raw apodized spectrum; the filter acts on the
  // mean-removed one.
  std::vector<Complex> raw(g.size()), spec(g.size());
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double wy = tukey(j, g.n_y, kTukeyAlpha);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double w = wy * tukey(i, g.n_x, kTukeyAlpha);
      raw[g.index(i, j)] = intensity.at(i, j) * w;
      spec[g.index(i, j)] = (intensity.at(i, j) - mean) * w;
    }
  }
  detail::fft2d(raw, g.n_x, g.n_y, false);
  detail::fft2d(spec, g.n_x, g.n_y, false);

  Demodulation out;
  const double lobe_r = 0.5 * c_mag;
  double dc_moment = 0.0;
  double dc_weight = 0.0;
  Point2 peak_sum{};
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double ky = g.ky(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double kx = g.kx(i);
      auto& s = spec[g.index(i, j)];
      const double p = std::norm(raw[g.index(i, j)]);
      const double d0 = std::hypot(kx, ky);
      const double d_plus = std::hypot(kx - carrier.x, ky - carrier.y);
      const double d_minus = std::hypot(kx + carrier.x, ky + carrier.y);
      // Baseband width measured over everything outside the carrier lobes, so
      // a broad envelope spectrum is not truncated at the lobe radius.
      if (d_plus >= lobe_r && d_minus >= lobe_r) {
        dc_weight += p;
        dc_moment += d0 * d0 * p;
      }
      if (d0 < lobe_r) {
        out.dc_lobe_power += p;
      } else if (d_plus < lobe_r) {
        out.carrier_lobe_power += p;
        peak_sum.x += kx * p;
        peak_sum.y += ky * p;
      } else if (d_minus >= lobe_r) {
        out.residual_power += p;
      }
      // Raised-cosine bandpass around +carrier: flat to 0.7 R, zero at R.
      const double t = d_plus / lobe_r;
      double h = 0.0;
      if (t <= 0.7) {
        h = 1.0;
      } else if (t < 1.0) {
        const double c = std::cos(0.5 * kPi * (t - 0.7) / 0.3);
        h = c * c;
      }
      s *= h;
    }
  }
  out.dc_lobe_width = dc_weight > 0.0 ? std::sqrt(dc_moment / dc_weight) : 0.0;
  if (c_mag < 3.0 * out.dc_lobe_width) {
    throw DemodulationError("carrier lobe overlaps the DC lobe (carrier " + std::to_string(c_mag) +
                            " rad/m, DC width " + std::to_string(out.dc_lobe_width) + " rad/m)");
  }
  if (out.carrier_lobe_power > 0.0) {
    out.lobe_peak = {peak_sum.x / out.carrier_lobe_power, peak_sum.y / out.carrier_lobe_power};
  }

  detail::fft2d(spec, g.n_x, g.n_y, true);
  out.phase = RealGrid(g);
  for (std::size_t j = 0; j < g.n_y; ++j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < g.n_x; ++i) {
      auto& z = spec[g.index(i, j)];
      z *= std::polar(1.0, -(carrier.x * g.x(i) + carrier.y * y));
      out.phase.at(i, j) = wrap_phase(std::arg(z));
    }
  }
  out.signal = std::move(spec);
  return out;
}

RealGrid fringe_demodulate(const RealGrid& intensity, Point2 carrier) {
  return demodulate(intensity, carrier).phase;
}

int winding_number(const RealGrid& phase, Point2 loop_center, double loop_radius) {
  const auto& g = phase.grid;
  require_loop_inside(g, loop_center, loop_radius);
  const std::size_t n = loop_samples(g, loop_radius);

  auto phasor_at = [&](std::size_t i, std::size_t j) { return std::polar(1.0, phase.at(i, j)); };
  double total = 0.0;
  double prev = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    double angle;
    if (k == n) {
      angle = first;
    } else {
      const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
      const double ci = g.column_of(loop_center.x + loop_radius * std::cos(t));
      const double cj = g.row_of(loop_center.y + loop_radius * std::sin(t));
      const Complex z = bilinear<Complex>(g, ci, cj, phasor_at);
      if (std::abs(z) < 0.5) {
        throw UnreliableLoopError("winding loop crosses an incoherent phase region");
      }
      angle = std::arg(z);
    }
    if (k == 0) {
      first = angle;
    } else {
      const double step = wrap_phase(angle - prev);
      if (std::abs(step) > 0.5 * kPi) {
        throw UnreliableLoopError("winding loop is undersampled (phase step above pi/2)");
      }
      total += step;
    }
    prev = angle;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

int winding_number(const ComplexField& f, Point2 loop_center, double loop_radius) {
  const auto& g = f.grid();
  require_loop_inside(g, loop_center, loop_radius);
  double a_max = 0.0;
  for (const auto& a : f.samples()) a_max = std::max(a_max, std::abs(a));
  const std::size_t n = loop_samples(g, loop_radius);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    const double ci = g.column_of(loop_center.x + loop_radius * std::cos(t));
    const double cj = g.row_of(loop_center.y + loop_radius * std::sin(t));
    const Complex z = bilinear<Complex>(g, ci, cj, [&](std::size_t i, std::size_t j) { return f.at(i, j); });
    if (!(std::abs(z) >= 1e-6 * a_max)) {
      throw UnreliableLoopError("winding loop crosses a near-zero amplitude region");
    }
  }
  return winding_number(wrapped_phase(f), loop_center, loop_radius);
}

ForkReport detect_fork(const RealGrid& intensity, const MichelsonConfig& cfg) {
  const auto& g = intensity.grid;
  const Demodulation demod = demodulate(intensity, {cfg.tilt_x, cfg.tilt_y});

  ForkReport report;
  report.axis_angle = std::atan2(demod.lobe_peak.y, demod.lobe_peak.x);
  const double signal_power = demod.carrier_lobe_power + demod.residual_power;
  report.confidence = signal_power > 0.0 ? demod.carrier_lobe_power / signal_power : 0.0;

  RealGrid amp(g);
  double a_max = 0.0;
  Point2 centroid{};
  double weight = 0.0;
  for (std::size_t j = 0; j < g.n_y; ++j) {
    for (std::size_t i = 0; i < g.n_x; ++i) {
      const double a = std::abs(demod.signal[g.index(i, j)]);
      amp.at(i, j) = a;
      a_max = std::max(a_max, a);
      centroid.x += a * a * g.x(i);
      centroid.y += a * a * g.y(j);
      weight += a * a;
    }
  }
  if (!(a_max > 0.0)) return report;
  centroid = {centroid.x / weight, centroid.y / weight};

  const double cell = std::max(g.dx(), g.dy());
  const double shear = std::hypot(cfg.shear.x, cfg.shear.y);
  const double base_radius =
      shear > 0.0 ? 0.4 * shear : 0.1 * std::min(g.extent_x, g.extent_y);
  const Point2 side = shear > 0.0 ? Point2{cfg.shear.x / shear, cfg.shear.y / shear} : Point2{};

  // Plaquette residues; plaquette (i, j) spans samples i..i+1, j..j+1.
  const std::size_t px = g.n_x - 1;
  const std::size_t py = g.n_y - 1;
  std::vector<int> residue(px * py, 0);
  const auto& ph = demod.phase;
  for (std::size_t j = 0; j < py; ++j) {
    for (std::size_t i = 0; i < px; ++i) {
      const double s = wrap_phase(ph.at(i + 1, j) - ph.at(i, j)) +
                       wrap_phase(ph.at(i + 1, j + 1) - ph.at(i + 1, j)) +
                       wrap_phase(ph.at(i, j + 1) - ph.at(i + 1, j + 1)) +
                       wrap_phase(ph.at(i, j) - ph.at(i, j + 1));
      residue[j * px + i] = static_cast<int>(std::lround(s / kTwoPi));
    }
  }
  auto plaquette_center = [&](std::size_t i, std::size_t j) {
    return Point2{g.x(i) + 0.5 * g.dx(), g.y(j) + 0.5 * g.dy()};
  };

  // Signal present within the loop radius: masks residues of pure noise.
  constexpr double kSignalFloor = 0.05;
  std::vector<signed char> valid(px * py, -1);
  // Residues inside the apodization taper are window artefacts.
  const double taper_x = 0.5 * kTukeyAlpha * static_cast<double>(g.n_x);
  const double taper_y = 0.5 * kTukeyAlpha * static_cast<double>(g.n_y);
  auto in_taper = [&](std::size_t i, std::size_t j) {
    const double ci = static_cast<double>(i) + 0.5, cj = static_cast<double>(j) + 0.5;
    return ci < taper_x || ci > static_cast<double>(g.n_x - 1) - taper_x || cj < taper_y ||
           cj > static_cast<double>(g.n_y - 1) - taper_y;
  };
  auto is_valid = [&](std::size_t i, std::size_t j) {
    auto& v = valid[j * px + i];
    if (v >= 0) return v == 1;
    if (in_taper(i, j)) {
      v = 0;
      return false;
    }
    const Point2 c = plaquette_center(i, j);
    const auto reach_i = static_cast<std::ptrdiff_t>(std::ceil(base_radius / g.dx()));
    const auto reach_j = static_cast<std::ptrdiff_t>(std::ceil(base_radius / g.dy()));
    double local = 0.0;
    for (std::ptrdiff_t dj = -reach_j; dj <= reach_j + 1; ++dj) {
      for (std::ptrdiff_t di = -reach_i; di <= reach_i + 1; ++di) {
        const auto ii = static_cast<std::ptrdiff_t>(i) + di;
        const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
        if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(g.n_x) ||
            jj >= static_cast<std::ptrdiff_t>(g.n_y)) {
          continue;
        }
        const double ddx = g.x(static_cast<std::size_t>(ii)) - c.x;
        const double ddy = g.y(static_cast<std::size_t>(jj)) - c.y;
        if (ddx * ddx + ddy * ddy > base_radius * base_radius) continue;
        local = std::max(local, amp.at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)));
      }
    }
    v = local >= kSignalFloor * a_max ? 1 : 0;
    return v == 1;
  };
  auto valid_residue = [&](std::size_t i, std::size_t j) {
    const int q = residue[j * px + i];
    return q != 0 && is_valid(i, j) ? q : 0;
  };

  // Box-summed curl; strongest defect on each side of the fork pair.
  struct Defect {
    double score = 0.0;
    std::size_t i = 0, j = 0;
    int curl = 0;
  };
  Defect best[2];  // [0]: +shear side, [1]: -shear side
  for (std::size_t j = 0; j < py; ++j) {
    for (std::size_t i = 0; i < px; ++i) {
      if (residue[j * px + i] == 0 || !is_valid(i, j)) continue;
      const Point2 c = plaquette_center(i, j);
      const double along = (c.x - centroid.x) * side.x + (c.y - centroid.y) * side.y;
      const int slot = shear > 0.0 && along <= 0.0 ? 1 : 0;
      int curl = 0;
      for (std::size_t jj = j > 0 ? j - 1 : 0; jj <= std::min(j + 1, py - 1); ++jj) {
        for (std::size_t ii = i > 0 ? i - 1 : 0; ii <= std::min(i + 1, px - 1); ++ii) {
          curl += valid_residue(ii, jj);
        }
      }
      if (curl == 0) continue;
      const double score = std::abs(curl) * mean_on_circle(amp, c, base_radius);
      if (score > best[slot].score) best[slot] = {score, i, j, curl};
    }
  }

  struct Reading {
    int charge = 0;
    Point2 location{};
    double score = 0.0;
    bool reliable = false;
  };
  auto read_defect = [&](const Defect& d, int sign) {
    Reading out;
    if (d.curl == 0) return out;
    // Sub-plaquette refinement: centroid of same-sign residues in the 3x3 box.
    Point2 loc{};
    double w = 0.0;
    for (std::size_t jj = d.j > 0 ? d.j - 1 : 0; jj <= std::min(d.j + 1, py - 1); ++jj) {
      for (std::size_t ii = d.i > 0 ? d.i - 1 : 0; ii <= std::min(d.i + 1, px - 1); ++ii) {
        const int q = valid_residue(ii, jj);
        if (q == 0 || (q > 0) != (d.curl > 0)) continue;
        const Point2 c = plaquette_center(ii, jj);
        loc.x += c.x;
        loc.y += c.y;
        w += 1.0;
      }
    }
    loc = {loc.x / w, loc.y / w};
    const double edge = std::min({loc.x - g.x(0), g.x(g.n_x - 1) - loc.x, loc.y - g.y(0),
                                  g.y(g.n_y - 1) - loc.y});
    const double radius = std::min(base_radius, edge - 0.5 * cell);
    for (double factor : {1.0, 0.75, 1.25, 0.5}) {
      const double r = std::min(radius * factor, edge - 0.25 * cell);
      if (r < cell) continue;
      try {
        out.charge = sign * winding_number(ph, loc, r);
        out.location = loc;
        out.score = d.score;
        out.reliable = true;
        return out;
      } catch (const UnreliableLoopError&) {
      } catch (const GeometryError&) {
      }
    }
    return out;
  };

  // The tilted arm's null (+shear side) winds as +m, the other arm's as -m.
  const Reading plus = read_defect(best[0], +1);
  const Reading minus = shear > 0.0 ? read_defect(best[1], -1) : Reading{};
  const Reading* pick = nullptr;
  if (plus.reliable && minus.reliable) {
    if (plus.charge == minus.charge || plus.charge == 0 || minus.charge == 0) {
      pick = plus.charge != 0 ? &plus : &minus;
    } else {
      pick = plus.score >= minus.score ? &plus : &minus;
    }
  } else if (plus.reliable) {
    pick = &plus;
  } else if (minus.reliable) {
    pick = &minus;
  }
  if (pick && pick->charge != 0) {
    report.charge = pick->charge;
    report.singularity_location = pick->location;
  }
  return report;
}

}  // namespace oamlab
