#include "oamlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "oamlab/errors.hpp"

namespace oamlab {
namespace {

using nlohmann::json;

constexpr double kScanPitchInWaists = 0.07;

template <typename Err>
[[noreturn]] void rethrow_as(const std::string& name, const Err& e) {
  throw Err("scenario '" + name + "': " + e.what());
}

// Preserves the concrete error type while prepending the scenario name.
template <typename Fn>
auto with_context(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const SamplingError& e) {
    rethrow_as(name, e);
  } catch (const DomainError& e) {
    rethrow_as(name, e);
  } catch (const GeometryError& e) {
    rethrow_as(name, e);
  } catch (const DemodulationError& e) {
    rethrow_as(name, e);
  } catch (const UnreliableLoopError& e) {
    rethrow_as(name, e);
  } catch (const ConfigError& e) {
    rethrow_as(name, e);
  }
}

json point_json(Point2 p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string(what) + " must be a two-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json mode_json(const LGModeSpec& m) {
  return {{"waist", m.waist_w0},      {"radial_index", m.radial_index_p},
          {"charge", m.charge_m},     {"center", point_json(m.center)},
          {"phase", m.global_phase},  {"wavelength", m.wavelength}};
}

LGModeSpec mode_from(const json& j, LGModeSpec m) {
  m.waist_w0 = j.value("waist", m.waist_w0);
  m.radial_index_p = j.value("radial_index", m.radial_index_p);
  m.charge_m = j.value("charge", m.charge_m);
  if (j.contains("center")) m.center = point_from(j["center"], "center");
  m.global_phase = j.value("phase", m.global_phase);
  m.wavelength = j.value("wavelength", m.wavelength);
  return m;
}

json michelson_json(const MichelsonConfig& c) {
  return {{"tilt_x", c.tilt_x},       {"tilt_y", c.tilt_y},       {"shear", point_json(c.shear)},
          {"arm_phase", c.arm_phase}, {"arm_ratio", c.arm_ratio}};
}

json scan_json(const DetectorScan& s) {
  json rows = json::array();
  for (std::size_t j = 0; j < s.n_y(); ++j) {
    json row = json::array();
    for (std::size_t i = 0; i < s.n_x(); ++i) row.push_back(s.map.at(i, j));
    rows.push_back(row);
  }
  return {{"n_x", s.n_x()},
          {"n_y", s.n_y()},
          {"extent", json::array({s.map.grid.extent_x, s.map.grid.extent_y})},
          {"values", rows}};
}

json fork_json(const ForkReport& f) {
  json j = {{"charge", f.charge}, {"axis_angle", f.axis_angle}, {"confidence", f.confidence}};
  j["singularity_location"] = f.singularity_location ? point_json(*f.singularity_location) : json(nullptr);
  return j;
}

DetectorScan make_scan(const RealGrid& map, std::size_t n, const std::optional<double>& extent) {
  if (extent) return detector_scan(map, n, n, *extent, *extent);
  return detector_scan(map, n, n);
}

}  // namespace

std::string to_string(Product p) {
  switch (p) {
    case Product::kIdlerIntensity: return "idler_intensity";
    case Product::kPumpInterferogram: return "pump_interferogram";
    case Product::kIdlerInterferogram: return "idler_interferogram";
    case Product::kOamSpectrum: return "oam_spectrum";
    case Product::kForkReport: return "fork_report";
  }
  return "unknown";
}

Product product_from_string(const std::string& name) {
  for (auto p : {Product::kIdlerIntensity, Product::kPumpInterferogram, Product::kIdlerInterferogram,
                 Product::kOamSpectrum, Product::kForkReport}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown output product '" + name + "'");
}

void ScenarioConfig::validate() const {
  auto fail = [&](const std::string& what) { throw ConfigError("scenario '" + name + "': " + what); };
  for (const auto* m : {&pump, &aux}) {
    const char* which = m == &pump ? "pump" : "aux";
    if (!(m->waist_w0 > 0.0)) fail(std::string(which) + ".waist must be positive");
    if (m->radial_index_p < 0) fail(std::string(which) + ".radial_index must be >= 0");
    if (!(m->wavelength > 0.0)) fail(std::string(which) + ".wavelength must be positive");
  }
  if (!(pump.wavelength < aux.wavelength)) fail("pump wavelength must be shorter than aux wavelength");
  if (!(crystal.gain > 0.0)) fail("crystal.gain must be positive");
  if (!(crystal.crystal_length > 0.0)) fail("crystal.length must be positive");
  if (!(michelson.arm_ratio > 0.0)) fail("michelson.arm_ratio must be positive");
  if (grid.n_x < GridSpec::kMinFieldSamples || grid.n_y < GridSpec::kMinFieldSamples) {
    fail("grid needs at least 16 samples per axis");
  }
  if (!(grid.extent_x > 0.0) || !(grid.extent_y > 0.0)) fail("grid extent must be positive");
  if (scan.pump_n < 8 || scan.idler_n < 8) fail("scan dimensions must be at least 8");
  for (const auto& e : {scan.pump_extent, scan.idler_extent}) {
    if (e && !(*e > 0.0)) fail("scan extent must be positive");
  }
  if (charge_window < 1) fail("charge_window must be >= 1");
  if (mean_counts && !(*mean_counts > 0.0)) fail("mean_counts must be positive");
  if (mean_counts.has_value() != noise_seed.has_value()) {
    fail("noise needs both noise_seed and mean_counts");
  }
}

ScenarioConfig ScenarioConfig::for_charges(int m_p, int m_s) {
  ScenarioConfig cfg;
  cfg.name = "mp" + std::to_string(m_p) + "_ms" + std::to_string(m_s);
  cfg.pump.charge_m = m_p;
  cfg.aux.charge_m = m_s;
  return cfg;
}

ScenarioConfig scenario_from_json(const json& j) {
  try {
    ScenarioConfig cfg = ScenarioConfig::for_charges(0, 0);
    cfg.name = j.value("name", std::string("scenario"));
    if (j.contains("pump")) cfg.pump = mode_from(j["pump"], cfg.pump);
    if (j.contains("aux")) cfg.aux = mode_from(j["aux"], cfg.aux);
    const double w0 = cfg.pump.waist_w0;
    if (j.contains("crystal")) {
      cfg.crystal.gain = j["crystal"].value("gain", cfg.crystal.gain);
      cfg.crystal.crystal_length = j["crystal"].value("length", cfg.crystal.crystal_length);
    }
    cfg.michelson = MichelsonConfig::defaults_for_waist(w0);
    if (j.contains("michelson")) {
      const auto& m = j["michelson"];
      cfg.michelson.tilt_x = m.value("tilt_x", cfg.michelson.tilt_x);
      cfg.michelson.tilt_y = m.value("tilt_y", cfg.michelson.tilt_y);
      if (m.contains("shear")) cfg.michelson.shear = point_from(m["shear"], "michelson.shear");
      cfg.michelson.arm_phase = m.value("arm_phase", cfg.michelson.arm_phase);
      cfg.michelson.arm_ratio = m.value("arm_ratio", cfg.michelson.arm_ratio);
    }
    cfg.grid = GridSpec{256, 256, 8.0 * w0, 8.0 * w0};
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      cfg.grid.n_x = g.value("n_x", cfg.grid.n_x);
      cfg.grid.n_y = g.value("n_y", cfg.grid.n_y);
      cfg.grid.extent_x = g.value("extent_x", cfg.grid.extent_x);
      cfg.grid.extent_y = g.value("extent_y", cfg.grid.extent_y);
    }
    cfg.propagation_distance = j.value("propagation_distance", 0.0);
    if (j.contains("scan")) {
      const auto& s = j["scan"];
      cfg.scan.pump_n = s.value("pump_n", cfg.scan.pump_n);
      cfg.scan.idler_n = s.value("idler_n", cfg.scan.idler_n);
      if (s.contains("pump_extent") && !s["pump_extent"].is_null()) {
        cfg.scan.pump_extent = s["pump_extent"].get<double>();
      }
      if (s.contains("idler_extent") && !s["idler_extent"].is_null()) {
        cfg.scan.idler_extent = s["idler_extent"].get<double>();
      }
    }
    if (j.contains("outputs")) {
      cfg.outputs.clear();
      for (const auto& o : j["outputs"]) cfg.outputs.insert(product_from_string(o.get<std::string>()));
    }
    cfg.charge_window = j.value("charge_window", cfg.charge_window);
    if (j.contains("noise_seed") && !j["noise_seed"].is_null()) {
      cfg.noise_seed = j["noise_seed"].get<std::uint64_t>();
    }
    if (j.contains("mean_counts") && !j["mean_counts"].is_null()) {
      cfg.mean_counts = j["mean_counts"].get<double>();
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario config: ") + e.what());
  }
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json outputs = json::array();
  for (auto p : cfg.outputs) outputs.push_back(to_string(p));
  auto opt = [](const auto& o) { return o ? json(*o) : json(nullptr); };
  return {{"name", cfg.name},
          {"pump", mode_json(cfg.pump)},
          {"aux", mode_json(cfg.aux)},
          {"crystal", {{"gain", cfg.crystal.gain}, {"length", cfg.crystal.crystal_length}}},
          {"michelson", michelson_json(cfg.michelson)},
          {"grid",
           {{"n_x", cfg.grid.n_x},
            {"n_y", cfg.grid.n_y},
            {"extent_x", cfg.grid.extent_x},
            {"extent_y", cfg.grid.extent_y}}},
          {"propagation_distance", cfg.propagation_distance},
          {"scan",
           {{"pump_n", cfg.scan.pump_n},
            {"idler_n", cfg.scan.idler_n},
            {"pump_extent", opt(cfg.scan.pump_extent)},
            {"idler_extent", opt(cfg.scan.idler_extent)}}},
          {"outputs", outputs},
          {"charge_window", cfg.charge_window},
          {"noise_seed", opt(cfg.noise_seed)},
          {"mean_counts", opt(cfg.mean_counts)}};
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  return with_context(cfg.name, [&] {
    ScenarioReport rep;
    rep.config = cfg;
    rep.expected_idler_charge = expected_idler_charge(cfg.pump.charge_m, cfg.aux.charge_m);

    const ComplexField pump = synthesize_lg(cfg.pump, cfg.grid);
    const ComplexField aux = synthesize_lg(cfg.aux, cfg.grid);
    ComplexField idler = stimulated_idler(pump, aux, cfg.crystal);
    if (cfg.propagation_distance != 0.0) idler = propagate_angular_spectrum(idler, cfg.propagation_distance);
    rep.idler_wavelength = idler.wavelength();

    const Point2 axis = cfg.pump.center;
    rep.idler_spectrum = oam_spectrum(idler, axis, cfg.charge_window);
    rep.measured.spectrum = dominant_charge(rep.idler_spectrum);
    const double loop = 0.5 * std::min(cfg.pump.waist_w0, cfg.aux.waist_w0);
    rep.measured.winding = winding_number(idler, axis, loop);

    rep.idler_intensity = intensity(idler);
    rep.idler_interferogram = michelson_interferogram(idler, cfg.michelson);
    rep.idler_fork = detect_fork(rep.idler_interferogram, cfg.michelson);
    rep.measured.fork = rep.idler_fork.charge;

    rep.pump_interferogram = michelson_interferogram(pump, cfg.michelson);
    rep.pump_fork = detect_fork(rep.pump_interferogram, cfg.michelson);
    rep.pump_fork_charge = rep.pump_fork.charge;

    const auto& g = cfg.grid;
    const auto ci = static_cast<std::size_t>(std::lround(g.column_of(axis.x)));
    const auto cj = static_cast<std::size_t>(std::lround(g.row_of(axis.y)));
    const double peak = *std::max_element(rep.idler_intensity.values.begin(), rep.idler_intensity.values.end());
    rep.idler_on_axis_ratio = peak > 0.0 ? rep.idler_intensity.at(ci, cj) / peak : 0.0;

    auto noisy = [&](DetectorScan s, std::uint64_t offset) {
      if (cfg.noise_seed && cfg.mean_counts) s = add_shot_noise(s, *cfg.mean_counts, *cfg.noise_seed + offset);
      return s;
    };
    if (cfg.outputs.contains(Product::kIdlerIntensity)) {
      rep.idler_intensity_scan = noisy(make_scan(rep.idler_intensity, cfg.scan.idler_n, cfg.scan.idler_extent), 0);
    }
    if (cfg.outputs.contains(Product::kPumpInterferogram)) {
      rep.pump_interferogram_scan =
          noisy(make_scan(rep.pump_interferogram, cfg.scan.pump_n, cfg.scan.pump_extent), 1);
    }
    if (cfg.outputs.contains(Product::kIdlerInterferogram)) {
      rep.idler_interferogram_scan =
          noisy(make_scan(rep.idler_interferogram, cfg.scan.idler_n, cfg.scan.idler_extent), 2);
    }
    if (!rep.consistent()) {
      rep.warnings.push_back("measured idler charges disagree with m_p - m_s");
    }
    return rep;
  });
}

json report_to_json(const ScenarioReport& r) {
  json j;
  j["scenario"] = scenario_to_json(r.config);
  j["idler_wavelength"] = r.idler_wavelength;
  j["expected_idler_charge"] = r.expected_idler_charge;
  j["measured_idler_charge"] = {
      {"spectrum", r.measured.spectrum}, {"winding", r.measured.winding}, {"fork", r.measured.fork}};
  j["consistent"] = r.consistent();
  j["pump_fork_charge"] = r.pump_fork_charge;
  j["idler_on_axis_ratio"] = r.idler_on_axis_ratio;
  const auto& out = r.config.outputs;
  if (out.contains(Product::kOamSpectrum)) {
    json power = json::object();
    for (int m = -r.idler_spectrum.max_charge; m <= r.idler_spectrum.max_charge; ++m) {
      power[std::to_string(m)] = r.idler_spectrum.at(m);
    }
    j["oam_spectrum"] = {{"max_charge", r.idler_spectrum.max_charge},
                         {"power", power},
                         {"residual", r.idler_spectrum.residual}};
  }
  if (out.contains(Product::kForkReport)) {
    j["fork_report"] = {{"idler", fork_json(r.idler_fork)}, {"pump", fork_json(r.pump_fork)}};
  }
  json scans = json::object();
  if (r.idler_intensity_scan) scans["idler_intensity"] = scan_json(*r.idler_intensity_scan);
  if (r.pump_interferogram_scan) scans["pump_interferogram"] = scan_json(*r.pump_interferogram_scan);
  if (r.idler_interferogram_scan) scans["idler_interferogram"] = scan_json(*r.idler_interferogram_scan);
  j["scans"] = scans;
  j["images"] = r.images;
  j["warnings"] = r.warnings;
  return j;
}

void write_outputs(ScenarioReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto emit = [&](const std::optional<DetectorScan>& scan, Product p) {
    if (!scan) return;
    const Graymap img = to_grayscale_bitmap(*scan);
    if (img.degenerate) report.warnings.push_back(to_string(p) + ": degenerate scan, emitted all black");
    const fs::path path = fs::path(out_dir) / (report.config.name + "_" + to_string(p) + ".pgm");
    std::ofstream os(path, std::ios::binary);
    os.write(reinterpret_cast<const char*>(img.bytes.data()), static_cast<std::streamsize>(img.bytes.size()));
    if (!os) throw OamError("cannot write " + path.string());
    report.images.push_back(path.string());
  };
  emit(report.idler_intensity_scan, Product::kIdlerIntensity);
  emit(report.pump_interferogram_scan, Product::kPumpInterferogram);
  emit(report.idler_interferogram_scan, Product::kIdlerInterferogram);

  const fs::path path = fs::path(out_dir) / (report.config.name + ".json");
  std::ofstream os(path);
  os << report_to_json(report).dump(2) << "\n";
  if (!os) throw OamError("cannot write " + path.string());
}

std::vector<std::string> figure_names() { return {"fig2", "fig3a", "fig3b", "fig4a", "fig4b"}; }

ScenarioConfig figure_preset(const std::string& figure) {
  const bool aux_charged = figure.ends_with('b');
  ScenarioConfig cfg = aux_charged ? ScenarioConfig::for_charges(0, 1) : ScenarioConfig::for_charges(1, 0);
  cfg.name = figure;
  const double w0 = cfg.pump.waist_w0;
  cfg.scan.pump_extent = kScanPitchInWaists * w0 * static_cast<double>(cfg.scan.pump_n);
  cfg.scan.idler_extent = kScanPitchInWaists * w0 * static_cast<double>(cfg.scan.idler_n);
  // Coarser fringes: at least 4 detector cells per period.
  cfg.michelson = MichelsonConfig::defaults_for_waist(w0, 3.0);
  if (figure == "fig2") {
    cfg.outputs = {Product::kPumpInterferogram, Product::kForkReport};
  } else if (figure == "fig3a" || figure == "fig3b") {
    cfg.outputs = {Product::kIdlerIntensity, Product::kOamSpectrum};
  } else if (figure == "fig4a" || figure == "fig4b") {
    // Untilted vertically so that a and b are exact mirror images.
    cfg.michelson.tilt_y = 0.0;
    cfg.outputs = {Product::kIdlerInterferogram, Product::kForkReport};
  } else {
    throw ConfigError("unknown figure '" + figure + "' (expected fig2, fig3a, fig3b, fig4a, fig4b)");
  }
  return cfg;
}

}  // namespace oamlab
