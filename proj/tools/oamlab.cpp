#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oamlab/errors.hpp"
#include "oamlab/scenario.hpp"

using namespace oamlab;
using nlohmann::json;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUnknown = 1,
  kConfig = 2,
  kSampling = 3,
  kDemodulation = 4,
  kLibrary = 5,
  kSweepMismatch = 6,
};

struct Common {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  double mean_counts = 1000.0;
  std::optional<std::size_t> grid_n;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool outputs = true) {
  if (outputs) app->add_option("--out-dir", c.out_dir, "Directory for graymaps and JSON reports");
  app->add_option("--seed", c.seed, "Enable shot noise with this seed");
  app->add_option("--mean-counts", c.mean_counts, "Mean detector counts per cell when noisy")
      ->check(CLI::PositiveNumber);
  app->add_option("--grid-n", c.grid_n, "Override the simulation grid size (n x n)");
  app->add_flag("-q,--quiet", c.quiet, "Only report errors");
}

void apply_common(ScenarioConfig& cfg, const Common& c) {
  if (c.seed) {
    cfg.noise_seed = *c.seed;
    cfg.mean_counts = c.mean_counts;
  }
  if (c.grid_n) cfg.grid.n_x = cfg.grid.n_y = *c.grid_n;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  return {std::istreambuf_iterator<char>(is), {}};
}

ScenarioConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return scenario_from_json(j);
}

void print_summary(const ScenarioReport& r) {
  std::printf("%s: expected m_i=%+d  spectrum=%+d winding=%+d fork=%+d  pump fork=%+d  lambda_i=%.2f nm%s\n",
              r.config.name.c_str(), r.expected_idler_charge, r.measured.spectrum, r.measured.winding,
              r.measured.fork, r.pump_fork_charge, r.idler_wavelength * 1e9,
              r.consistent() ? "" : "  MISMATCH");
  for (const auto& w : r.warnings) std::printf("  warning: %s\n", w.c_str());
  for (const auto& img : r.images) std::printf("  wrote %s\n", img.c_str());
}

int run_one(ScenarioConfig cfg, const Common& c) {
  apply_common(cfg, c);
  auto report = run_scenario(cfg);
  write_outputs(report, c.out_dir);
  if (!c.quiet) print_summary(report);
  return kOk;
}

// "-2..2" or a single integer.
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    const int lo = std::stoi(s.substr(0, dots));
    const int hi = std::stoi(s.substr(dots + 2));
    if (lo > hi) throw ConfigError("empty charge range '" + s + "'");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw ConfigError("bad charge range '" + s + "' (expected e.g. -2..2)");
  }
}

int sweep(const std::string& range, unsigned jobs, const Common& c) {
  const auto [lo, hi] = parse_range(range);
  std::vector<ScenarioConfig> cfgs;
  for (int m_p = lo; m_p <= hi; ++m_p) {
    for (int m_s = lo; m_s <= hi; ++m_s) {
      auto cfg = ScenarioConfig::for_charges(m_p, m_s);
      apply_common(cfg, c);
      // Per-scenario seeds: parallel and serial runs draw identical noise.
      if (c.seed) cfg.noise_seed = *c.seed + 16 * cfgs.size();
      cfg.outputs = {Product::kOamSpectrum, Product::kForkReport};
      cfgs.push_back(cfg);
    }
  }

  std::vector<std::optional<ScenarioReport>> reports(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < cfgs.size();) {
      try {
        reports[k] = run_scenario(cfgs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json summary = json::array();
  std::size_t ok = 0;
  for (auto& r : reports) {
    ok += r->consistent();
    if (!c.quiet) print_summary(*r);
    summary.push_back({{"name", r->config.name},
                       {"pump_charge", r->config.pump.charge_m},
                       {"aux_charge", r->config.aux.charge_m},
                       {"expected_idler_charge", r->expected_idler_charge},
                       {"measured_idler_charge",
                        {{"spectrum", r->measured.spectrum},
                         {"winding", r->measured.winding},
                         {"fork", r->measured.fork}}},
                       {"pump_fork_charge", r->pump_fork_charge},
                       {"consistent", r->consistent()}});
  }
  std::filesystem::create_directories(c.out_dir);
  const auto path = std::filesystem::path(c.out_dir) / "sweep.json";
  std::ofstream(path) << json{{"range", {lo, hi}}, {"consistent", ok}, {"total", reports.size()},
                              {"scenarios", summary}}
                             .dump(2)
                      << "\n";
  if (!c.quiet) std::printf("%zu/%zu scenarios consistent; wrote %s\n", ok, reports.size(), path.c_str());
  return ok == reports.size() ? kOk : kSweepMismatch;
}

int analyze(const std::string& image, const std::optional<std::string>& config,
            const std::optional<std::string>& figure, double pitch, const Common& c) {
  MichelsonConfig michelson = MichelsonConfig::defaults_for_waist(1e-3, 3.0);
  if (config) michelson = load_config(*config).michelson;
  if (figure) michelson = figure_preset(*figure).michelson;

  const std::string raw = read_file(image);
  RealGrid map = read_graymap({raw.begin(), raw.end()}, 1.0, 1.0);
  map.grid.extent_x = pitch * static_cast<double>(map.grid.n_x);
  map.grid.extent_y = pitch * static_cast<double>(map.grid.n_y);

  const ForkReport r = detect_fork(map, michelson);
  json j = {{"image", image},
            {"n_x", map.grid.n_x},
            {"n_y", map.grid.n_y},
            {"pitch", pitch},
            {"charge", r.charge},
            {"axis_angle", r.axis_angle},
            {"confidence", r.confidence}};
  j["singularity_location"] =
      r.singularity_location ? json::array({r.singularity_location->x, r.singularity_location->y}) : json(nullptr);
  if (!c.quiet) std::cout << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stimulated down-conversion OAM simulator"};
  app.require_subcommand(1);

  Common run_c, sweep_c, fig_c, an_c;

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  std::string config_path;
  run->add_option("config", config_path, "Scenario JSON")->required();
  add_common(run, run_c);

  auto* sw = app.add_subcommand("sweep", "Run every (m_p, m_s) pair in a charge range");
  std::string range = "-2..2";
  unsigned jobs = 1;
  sw->add_option("--charges", range, "Charge range, e.g. -2..2");
  sw->add_option("-j,--jobs", jobs, "Worker threads");
  add_common(sw, sweep_c);

  auto* fig = app.add_subcommand("figure", "Reproduce one of the figure presets");
  std::string figure;
  fig->add_option("name", figure, "Preset")->required()->check(CLI::IsMember(figure_names()));
  add_common(fig, fig_c);

  auto* an = app.add_subcommand("analyze", "Read the fork charge from a graymap interferogram");
  std::string image;
  std::optional<std::string> an_config, an_figure;
  double pitch = 70e-6;
  an->add_option("image", image, "P5 or P2 graymap")->required();
  an->add_option("--config", an_config, "Scenario JSON supplying the Michelson settings");
  an->add_option("--figure", an_figure, "Preset supplying the Michelson settings")
      ->check(CLI::IsMember(figure_names()));
  an->add_option("--pitch", pitch, "Detector cell size in meters")->check(CLI::PositiveNumber);
  add_common(an, an_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return run_one(load_config(config_path), run_c);
    if (*sw) return sweep(range, jobs, sweep_c);
    if (*fig) return run_one(figure_preset(figure), fig_c);
    if (*an) return analyze(image, an_config, an_figure, pitch, an_c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const SamplingError& e) {
    std::cerr << "sampling error: " << e.what() << "\n";
    return kSampling;
  } catch (const DemodulationError& e) {
    std::cerr << "demodulation error: " << e.what() << "\n";
    return kDemodulation;
  } catch (const OamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kLibrary;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kUnknown;
  }
  return kUnknown;
}
