// Command-line front end: simulate, orders, scan, compare, constants.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "molgrating/fresnel.hpp"
#include "molgrating/run.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNumericalError = 3,
  kUsage = 64,
};

using namespace molgrating;

void print_summary(const RunSummary& s) {
  std::printf("config digest      %s\n", s.config_digest.c_str());
  std::printf("phi at %.1f m/s   %.6g + %.6gi\n", s.v_peak, s.phi.re, s.phi.im);
  std::printf("mean photons       %.6g\n", s.mean_photon_number);
  for (std::size_t n = 0; n < s.absorbed_fractions.size() && n < 4; ++n) {
    std::printf("  P(n=%zu)           %.6f\n", n, s.absorbed_fractions[n]);
  }
  if (s.metrics) {
    std::printf("order spacing      %.3f um\n", s.metrics->spacing * 1e6);
    for (int m = -2; m <= 2; ++m) {
      std::printf("  efficiency m=%+d  %.4f\n", m, s.metrics->efficiency(m));
    }
    std::printf("visibility         %.4f\n", s.metrics->visibility);
  }
  std::printf("Raman-Nath ratio   %.3g%s\n", s.raman_nath.ratio,
              s.raman_nath.warning ? "  (thin-grating assumption questionable)" : "");
  std::printf("total probability  %.6f\n", s.total_probability);
  if (s.convergence) {
    std::printf("convergence rms    v %.2e  y %.2e  src %.2e  grid %.2e\n",
                s.convergence->velocity_rms, s.convergence->vertical_rms,
                s.convergence->source_rms, s.convergence->grid_rms);
    if (!s.convergence->converged()) {
      std::fprintf(stderr, "warning: doubling a quadrature axis changes the pattern by %.2f%% RMS\n",
                   100.0 * s.convergence->worst());
    }
  }
}

int cmd_simulate(const std::string& path, bool quick) {
  SimulationConfig config = load_config(path);
  if (quick) config.setup.numerics.check_convergence = false;
  const auto result = run_simulate(config);
  print_summary(result.summary);
  std::printf("wrote %s\n", (output_directory(config) / config.output.pattern_csv).c_str());
  return kOk;
}

int cmd_orders(const std::string& path) {
  const SimulationConfig config = load_config(path);
  const auto spectrum = run_orders(config);
  std::printf("slot  intensity (hbar k_L units)\n");
  for (int m = -spectrum.m_max; m <= spectrum.m_max; ++m) {
    if (spectrum.at(m) < 1e-6) continue;
    std::printf("%+4d  %.6f\n", m, spectrum.at(m));
  }
  std::printf("total %.9f\n", spectrum.total());
  return kOk;
}

int cmd_scan(const std::string& path, const std::vector<double>& powers) {
  SimulationConfig config = load_config(path);
  config.setup.numerics.check_convergence = false;
  const auto points = run_power_scan(config, powers);
  std::printf("power_W   re_phi     im_phi     eff_m0    eff_m1\n");
  for (const auto& p : points) {
    const auto& s = p.result.summary;
    std::printf("%-9.4g %-10.5f %-10.5f %-9.4f %-9.4f\n", p.power, s.phi.re, s.phi.im,
                s.metrics ? s.metrics->efficiency(0) : 0.0,
                s.metrics ? s.metrics->efficiency(1) : 0.0);
  }
  return kOk;
}

int cmd_compare(const std::string& a, const std::string& b) {
  const auto cmp = run_compare(a, b);
  std::printf("shift_um %.6f\nnrmse    %.9f\n", cmp.shift * 1e6, cmp.nrmse);
  return kOk;
}

int cmd_constants() {
  std::printf("h      %.10e J s\nhbar   %.10e J s\nc      %.0f m/s\neps0   %.10e F/m\namu    %.11e kg\n",
              PhysicalConstants::h, PhysicalConstants::hbar, PhysicalConstants::c,
              PhysicalConstants::eps0, PhysicalConstants::amu);
  const GratingBeam beam;
  std::printf("\nspecies  mass_amu  alpha_re_A3  alpha_im_A3  sigma_cm2   lambda_dB@120m/s_pm\n");
  for (const auto& sp : builtin_species()) {
    std::printf("%-8s %-9.1f %-12.1f %-12.1f %-11.3e %.4f\n", sp.name.c_str(), sp.mass_amu,
                sp.polarizability.real_volume, sp.polarizability.imag_volume,
                absorption_cross_section(sp, beam.wavenumber()) * 1e4,
                de_broglie_wavelength(sp, 120.0) * 1e12);
  }
  std::printf("\nfirst zero of J0   %.15f\n", zero_order_null());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matter-wave diffraction at a standing light wave"};
  app.require_subcommand(1);

  std::string config_path;
  bool quick = false;
  auto* simulate = app.add_subcommand("simulate", "Ensemble pattern, CSV and JSON summary");
  simulate->add_option("config", config_path, "Config file")->required();
  simulate->add_flag("--no-convergence", quick, "Skip the quadrature doubling study");

  auto* orders = app.add_subcommand("orders", "Averaged order spectrum only");
  orders->add_option("config", config_path, "Config file")->required();

  std::vector<double> powers;
  auto* scan = app.add_subcommand("scan", "Repeat the simulation over laser powers");
  scan->add_option("config", config_path, "Config file")->required();
  scan->add_option("--powers", powers, "Powers per running wave in W")->required();

  std::string csv_a;
  std::string csv_b;
  auto* compare = app.add_subcommand("compare", "Align two pattern CSVs and report the RMS error");
  compare->add_option("a", csv_a, "First pattern CSV")->required();
  compare->add_option("b", csv_b, "Second pattern CSV")->required();

  auto* constants = app.add_subcommand("constants", "Physical constants and species catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, quick);
    if (*orders) return cmd_orders(config_path);
    if (*scan) return cmd_scan(config_path, powers);
    if (*compare) return cmd_compare(csv_a, csv_b);
    if (*constants) return cmd_constants();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const AliasingError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumericalError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kUsage;
}
