#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oamlab/detector.hpp"
#include "oamlab/downconversion.hpp"
#include "oamlab/field_core.hpp"
#include "oamlab/interferometer.hpp"
#include "oamlab/oam_analysis.hpp"

namespace oamlab {

enum class Product {
  kIdlerIntensity,
  kPumpInterferogram,
  kIdlerInterferogram,
  kOamSpectrum,
  kForkReport,
};

std::string to_string(Product p);
Product product_from_string(const std::string& name);

struct ScanConfig {
  std::size_t pump_n = 30;   // pump interferogram scans
  std::size_t idler_n = 20;  // idler intensity / interferogram scans
  // Physical side of the scanned window; the whole grid when unset.
  std::optional<double> pump_extent;
  std::optional<double> idler_extent;
};

struct ScenarioConfig {
  std::string name = "scenario";
  LGModeSpec pump{1e-3, 0, 1, {}, 0.0, 442e-9};
  LGModeSpec aux{1e-3, 0, 0, {}, 0.0, 845e-9};
  CrystalConfig crystal;
  MichelsonConfig michelson = MichelsonConfig::defaults_for_waist(1e-3);
  GridSpec grid{256, 256, 8e-3, 8e-3};
  double propagation_distance = 0.0;  // idler, crystal -> interferometer
  ScanConfig scan;
  std::set<Product> outputs{Product::kIdlerIntensity, Product::kPumpInterferogram,
                            Product::kIdlerInterferogram, Product::kOamSpectrum,
                            Product::kForkReport};
  int charge_window = 8;
  std::optional<std::uint64_t> noise_seed;
  std::optional<double> mean_counts;

  // Throws ConfigError with the offending field named.
  void validate() const;

  /// Defaults for a pair of charges: equal 1 mm waists, 256 x 256 grid over
  /// 8 w0, default Michelson, whole-grid detector scans.
  static ScenarioConfig for_charges(int m_p, int m_s);
};

// JSON schema: see README. Missing keys keep for_charges(0, 0) defaults,
// except michelson/grid/scan which are rederived from the pump waist.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

struct MeasuredCharges {
  int spectrum = 0;
  int winding = 0;
  int fork = 0;
};

struct ScenarioReport {
  ScenarioConfig config;
  double idler_wavelength = 0.0;
  int expected_idler_charge = 0;
  MeasuredCharges measured;
  int pump_fork_charge = 0;
  OAMSpectrum idler_spectrum;
  ForkReport idler_fork;
  ForkReport pump_fork;
  double idler_on_axis_ratio = 0.0;  // on-axis intensity / peak intensity

  // Full-resolution maps, kept for figure rendering and tests.
  RealGrid idler_intensity;
  RealGrid pump_interferogram;
  RealGrid idler_interferogram;

  std::optional<DetectorScan> idler_intensity_scan;
  std::optional<DetectorScan> pump_interferogram_scan;
  std::optional<DetectorScan> idler_interferogram_scan;

  std::vector<std::string> warnings;
  std::vector<std::string> images;  // paths written by write_outputs()

  bool consistent() const {
    return measured.spectrum == expected_idler_charge && measured.winding == expected_idler_charge &&
           measured.fork == expected_idler_charge;
  }
};

/// Pump and aux synthesis, stimulated idler, optional propagation, Michelson
/// interferograms, the three charge measurements and detector scans.
/// Module errors are rethrown with the scenario name prepended, keeping
/// their type.
ScenarioReport run_scenario(const ScenarioConfig& cfg);

nlohmann::json report_to_json(const ScenarioReport& report);

// Writes requested scans as P5 graymaps plus <name>.json into out_dir and
// records the image paths in the report.
void write_outputs(ScenarioReport& report, const std::string& out_dir);

/// Named presets: fig2 (pump fork, 30 x 30), fig3a / fig3b (idler
/// intensity, 20 x 20), fig4a / fig4b (idler fork, 20 x 20). The "b"
/// variants put the charge on the aux beam. Scans use 0.07 w0 per cell.
ScenarioConfig figure_preset(const std::string& figure);
std::vector<std::string> figure_names();

}  // namespace oamlab
