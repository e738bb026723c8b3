#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "molgrating/config.hpp"
#include "molgrating/pattern.hpp"

namespace molgrating {

/// Environment variable that overrides output.directory.
inline constexpr const char* kOutputDirEnv = "MOLGRATING_OUTPUT_DIR";

struct RunSummary {
  std::string config_digest;
  double v_peak = 0.0;
  ComplexPhase phi;  ///< at v_peak and the beam centre
  double mean_photon_number = 0.0;
  /// Fraction absorbing exactly n photons, vertically averaged at v_peak.
  std::vector<double> absorbed_fractions;
  /// Window metrics at the diffraction-order spacing (2 hbar k_L) for v_peak.
  std::optional<PatternMetrics> metrics;
  RamanNathDiagnostic raman_nath;
  std::optional<ConvergenceReport> convergence;
  OrderSpectrum orders;  ///< velocity- and vertically averaged, hbar k_L slots
  double total_probability = 0.0;
};

struct SimulationResult {
  DiffractionPattern pattern;
  RunSummary summary;
};

/// Pure computation; nothing is written.
SimulationResult simulate(const SimulationConfig& config);

RunSummary summarize(const SimulationConfig& config, const DiffractionPattern& pattern);

/// Pretty-printed JSON, keys in a fixed order.
std::string summary_json(const RunSummary& summary);

/// output.directory, or the environment override when set.
std::filesystem::path output_directory(const SimulationConfig& config);

/// simulate() plus the pattern CSV and JSON summary in the output directory.
SimulationResult run_simulate(const SimulationConfig& config);

struct ScanPoint {
  double power = 0.0;
  SimulationResult result;
};

/// One simulation per power; writes scan.csv (power_W,position_um,intensity) and
/// scan_summary.json. Throws std::invalid_argument for an empty list or negative power.
std::vector<ScanPoint> run_power_scan(const SimulationConfig& config, std::span<const double> powers);

/// Averaged order spectrum only; writes orders.csv (m,intensity).
OrderSpectrum run_orders(const SimulationConfig& config);

PatternComparison run_compare(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace molgrating
