#include "molgrating/run.hpp"

#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "molgrating/io.hpp"

namespace molgrating {

namespace {

using Json = nlohmann::ordered_json;

Json phase_json(const ComplexPhase& phi) { return Json{{"re", phi.re}, {"im", phi.im}}; }

}  // namespace

RunSummary summarize(const SimulationConfig& config, const DiffractionPattern& pattern) {
  const ExperimentSetup& setup = config.setup;
  RunSummary s;
  s.config_digest = config_digest(config);
  s.v_peak = setup.velocity.shape == VelocityShape::histogram
                 ? velocity_quadrature(setup.velocity, 1).mean()
                 : setup.velocity.v_peak;
  s.phi = compute_phi(setup.species, setup.beam, s.v_peak);
  s.mean_photon_number = s.phi.mean_photon_number();

  const auto vertical = vertical_phi_scales(setup.vertical, setup.numerics.vertical_nodes);
  const int n_max = truncation_order(s.phi, setup.numerics.tail_eps);
  for (int n = 0; n <= n_max; ++n) {
    s.absorbed_fractions.push_back(absorbed_fraction(s.phi, n, vertical.scales, vertical.weights));
  }

  const double spacing =
      farfield_peak_positions(setup.species, s.v_peak, setup.beam, setup.geometry, 1)[2];
  if (spacing >= setup.detector.width) s.metrics = pattern_metrics(pattern, spacing);

  s.raman_nath = raman_nath_diagnostic(setup.species, setup.beam, s.v_peak, s.phi);
  s.orders = averaged_order_intensities(setup);
  s.total_probability = pattern.metadata.total_probability;
  if (setup.numerics.check_convergence) s.convergence = convergence_study(setup, pattern);
  return s;
}

SimulationResult simulate(const SimulationConfig& config) {
  SimulationResult r;
  r.pattern = ensemble_pattern(config.setup);
  r.pattern.metadata.config_digest = config_digest(config);
  r.summary = summarize(config, r.pattern);
  return r;
}

std::string summary_json(const RunSummary& s) {
  Json j;
  j["config_digest"] = s.config_digest;
  j["v_peak_m_per_s"] = s.v_peak;
  j["phi"] = phase_json(s.phi);
  j["mean_photon_number"] = s.mean_photon_number;
  Json fractions = Json::array();
  for (std::size_t n = 0; n < s.absorbed_fractions.size(); ++n) {
    fractions.push_back(Json{{"photons", n}, {"fraction", s.absorbed_fractions[n]}});
  }
  j["absorbed_fractions"] = fractions;
  if (s.metrics) {
    Json eff = Json::array();
    for (std::size_t i = 0; i < s.metrics->orders.size(); ++i) {
      eff.push_back(Json{{"order", s.metrics->orders[i]}, {"efficiency", s.metrics->efficiencies[i]}});
    }
    j["pattern_metrics"] = Json{{"spacing_um", s.metrics->spacing * 1e6},
                                {"visibility", s.metrics->visibility},
                                {"efficiencies", eff}};
  } else {
    j["pattern_metrics"] = nullptr;
  }
  j["raman_nath"] = Json{{"displacement_m", s.raman_nath.displacement},
                         {"ratio", s.raman_nath.ratio},
                         {"warning", s.raman_nath.warning}};
  if (s.convergence) {
    j["convergence"] = Json{{"velocity_rms", s.convergence->velocity_rms},
                            {"vertical_rms", s.convergence->vertical_rms},
                            {"source_rms", s.convergence->source_rms},
                            {"grid_rms", s.convergence->grid_rms},
                            {"converged", s.convergence->converged()}};
  } else {
    j["convergence"] = nullptr;
  }
  Json orders = Json::array();
  for (int m = -s.orders.m_max; m <= s.orders.m_max; ++m) {
    orders.push_back(Json{{"slot", m}, {"intensity", s.orders.at(m)}});
  }
  j["order_intensities_hbar_kL"] = orders;
  j["total_probability"] = s.total_probability;
  return j.dump(2) + "\n";
}

std::filesystem::path output_directory(const SimulationConfig& config) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return config.output.directory;
}

SimulationResult run_simulate(const SimulationConfig& config) {
  SimulationResult r = simulate(config);
  const auto dir = output_directory(config);
  write_file_atomic(dir / config.output.pattern_csv, format_pattern_csv(r.pattern));
  write_file_atomic(dir / config.output.summary_json, summary_json(r.summary));
  return r;
}

std::vector<ScanPoint> run_power_scan(const SimulationConfig& config, std::span<const double> powers) {
  if (powers.empty()) throw std::invalid_argument("power scan needs at least one power");
  for (double p : powers) {
    if (!(p >= 0.0)) throw std::invalid_argument("scan powers must be >= 0");
  }
  std::vector<ScanPoint> points;
  std::string csv = "power_W,position_um,intensity\n";
  Json summaries = Json::array();
  for (double p : powers) {
    SimulationConfig c = config;
    c.setup.beam.power_per_wave = p;
    ScanPoint point{p, simulate(c)};
    const auto& pat = point.result.pattern;
    const std::string power_text = format_fixed(p);
    for (std::size_t i = 0; i < pat.positions.size(); ++i) {
      csv += power_text + "," + format_fixed(pat.positions[i] * 1e6) + "," +
             format_fixed(pat.intensity[i]) + "\n";
    }
    Json entry = Json::parse(summary_json(point.result.summary));
    summaries.push_back(Json{{"power_W", p}, {"summary", entry}});
    points.push_back(std::move(point));
  }
  const auto dir = output_directory(config);
  write_file_atomic(dir / "scan.csv", csv);
  write_file_atomic(dir / "scan_summary.json", summaries.dump(2) + "\n");
  return points;
}

OrderSpectrum run_orders(const SimulationConfig& config) {
  OrderSpectrum spectrum = averaged_order_intensities(config.setup);
  std::string csv = "m,intensity\n";
  for (int m = -spectrum.m_max; m <= spectrum.m_max; ++m) {
    csv += std::to_string(m) + "," + format_fixed(spectrum.at(m)) + "\n";
  }
  write_file_atomic(output_directory(config) / "orders.csv", csv);
  return spectrum;
}

PatternComparison run_compare(const std::filesystem::path& a, const std::filesystem::path& b) {
  return compare_patterns(read_pattern_csv(a), read_pattern_csv(b));
}

}  // namespace molgrating
