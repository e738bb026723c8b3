// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "molgrating/io.hpp"
#include "molgrating/run.hpp"

using namespace molgrating;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

MoleculeSpecies species(const char* name) { return *find_builtin_species(name); }

GratingBeam beam_at(double power) {
  GratingBeam b;
  b.power_per_wave = power;
  return b;
}

ExperimentSetup default_setup(const MoleculeSpecies& sp, double power) {
  ExperimentSetup s = SimulationConfig{}.setup;
  s.species = sp;
  s.beam.power_per_wave = power;
  s.numerics.check_convergence = false;
  return s;
}

// Phases used by the spectrum criteria: the Bessel grid plus both fullerenes at 1 and 9.5 W.
std::vector<ComplexPhase> tested_phases() {
  std::vector<ComplexPhase> out{{0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {2.40483, 0.0}};
  for (const char* name : {"C60", "C70"}) {
    for (double p : {1.0, 9.5, 13.0}) out.push_back(compute_phi(species(name), beam_at(p), 120.0));
  }
  return out;
}

Outcome bessel_equivalence() {
  double worst = 0.0;
  for (double phi : {0.5, 1.0, 2.0, 2.40483}) {
    const auto s = incoherent_order_intensities({phi, 0.0});
    for (int j = 0; j <= 5; ++j) {
      const double jj = std::cyl_bessel_j(static_cast<double>(j), phi);
      worst = std::max({worst, std::abs(s.at(2 * j) - jj * jj), std::abs(s.at(-2 * j) - jj * jj)});
    }
  }
  return {worst < 1e-6, fmt("max |I_2j - J_j^2| = %.2e (limit 1e-6)", worst)};
}

struct NullRun {
  double root = 0.0;
  double power = 0.0;
  PatternMetrics metrics;
  double order_zero = 0.0;
};

const NullRun& near_null_run() {
  static const NullRun run = [] {
    NullRun r;
    r.root = zero_order_null();
    const auto c60 = species("C60");
    r.power = power_for_phase(c60, GratingBeam{}, 120.0, r.root);
    const ExperimentSetup s = default_setup(c60, r.power);
    const auto pattern = ensemble_pattern(s);
    const double spacing = farfield_peak_positions(c60, 120.0, s.beam, s.geometry, 1)[2];
    r.metrics = pattern_metrics(pattern, spacing);
    r.order_zero = averaged_order_intensities(s).at(0);
    return r;
  }();
  return run;
}

Outcome zero_order_suppression() {
  const auto& r = near_null_run();
  const bool root_ok = std::abs(r.root - 2.40483) <= 1e-4;
  const double central = r.metrics.efficiency(0);
  return {root_ok && central < 0.05,
          fmt("Phi* = %.6f at P = %.3f W; central-order efficiency %.4f (limit 0.05); "
              "averaged order-0 intensity %.4f",
              r.root, r.power, central, r.order_zero)};
}

Outcome first_order_efficiency() {
  const auto& r = near_null_run();
  const double plus = r.metrics.efficiency(1);
  const double minus = r.metrics.efficiency(-1);
  const bool ok = plus >= 0.20 && plus <= 0.30 && minus >= 0.20 && minus <= 0.30;
  return {ok, fmt("efficiency m=+1 %.4f, m=-1 %.4f (range [0.20, 0.30])", plus, minus)};
}

Outcome absorption_fractions() {
  const auto vq = vertical_phi_scales(VerticalProfile{}, NumericsSettings{}.vertical_nodes);
  const double f60 = absorbed_fraction(compute_phi(species("C60"), beam_at(9.5), 120.0), 2,
                                       vq.scales, vq.weights);
  const double f70 = absorbed_fraction(compute_phi(species("C70"), beam_at(9.5), 120.0), 2,
                                       vq.scales, vq.weights);
  const bool ok = std::abs(f60 - 0.04) <= 0.02 && std::abs(f70 - 0.12) <= 0.03;
  return {ok, fmt("two-photon fraction C60 %.4f (0.04 +- 0.02), C70 %.4f (0.12 +- 0.03)", f60, f70)};
}

Outcome cross_sections() {
  const double k = GratingBeam{}.wavenumber();
  const double s60 = absorption_cross_section(species("C60"), k) * 1e4;
  const double s70 = absorption_cross_section(species("C70"), k) * 1e4;
  const double e60 = std::abs(s60 / 1.2e-17 - 1.0);
  const double e70 = std::abs(s70 / 3.1e-17 - 1.0);
  return {e60 <= 0.05 && e70 <= 0.05,
          fmt("sigma C60 %.3e cm^2 (%.1f%%), C70 %.3e cm^2 (%.1f%%), limit 5%%", s60, 100 * e60, s70,
              100 * e70)};
}

Outcome conservation() {
  double worst = 0.0;
  for (const auto& phi : tested_phases()) {
    const auto s = incoherent_order_intensities(phi, 40, 1e-12, 2048);
    worst = std::max(worst, std::abs(s.total() - 1.0));
  }
  return {worst <= 1e-6, fmt("max |sum I - 1| = %.2e over %zu phases (limit 1e-6)", worst,
                             tested_phases().size())};
}

Outcome selection_rule() {
  double worst = 0.0;
  for (const auto& phi : tested_phases()) {
    const auto s = incoherent_order_intensities(phi, 30, 1e-12, 2048, true);
    for (std::size_t n = 0; n < s.per_channel.size(); ++n) {
      for (int m = -30; m <= 30; ++m) {
        if (std::abs(m) % 2 != static_cast<int>(n % 2)) {
          worst = std::max(worst, s.per_channel[n][static_cast<std::size_t>(m + 30)]);
        }
      }
    }
  }
  return {worst < 1e-10, fmt("max forbidden-parity intensity %.2e (limit 1e-10)", worst)};
}

struct CrossCheck {
  double worst_centre = 0.0;      // deblended peak centres
  double worst_raw_centre = 0.0;  // plain local maxima, for information
  double worst_weight = 0.0;      // diffraction orders (even hbar k_L slots)
  double worst_odd_weight = 0.0;  // absorption shoulders, for information
  int weights_checked = 0;
};

/// Wave-mode pattern at 9.5 W against single-slot reference shapes and the order spectrum.
CrossCheck cross_validate(const MoleculeSpecies& sp) {
  CrossCheck out;
  const ExperimentSetup s = default_setup(sp, 9.5);
  const auto pattern = ensemble_pattern(s);
  const auto spectrum = averaged_order_intensities(s);
  const double spacing = farfield_peak_positions(sp, 120.0, s.beam, s.geometry, 1)[2];

  // One reference pattern per hbar k_L slot: the same ensemble with a pure momentum kick.
  const double k = s.beam.wavenumber();
  const int slots = static_cast<int>(std::ceil(0.5 * s.geometry.detector_span / (0.5 * spacing))) + 1;
  auto slot = [slots](int m) { return static_cast<std::size_t>(m + slots); };
  std::vector<DiffractionPattern> basis(static_cast<std::size_t>(2 * slots + 1));
  for (int m = 0; m <= slots; ++m) {
    auto b = ensemble_pattern_with_transmission(s, [k, m](double x) { return std::polar(1.0, m * k * x); });
    basis[slot(m)] = b;
    std::reverse(b.intensity.begin(), b.intensity.end());  // the setup is mirror symmetric
    basis[slot(-m)] = b;
  }
  const auto fit = fit_peak_weights(pattern, basis);

  // Neighbouring absorption shoulders sit half an order away and drag the raw maximum, so
  // each order's centre is read after subtracting every other fitted component.
  for (int m : {-2, -1, 1, 2}) {
    if (spectrum.at(2 * m) < 0.05) continue;
    const double expected = m * spacing;
    DiffractionPattern own = pattern;
    for (int j = -slots; j <= slots; ++j) {
      if (j == 2 * m) continue;
      for (std::size_t i = 0; i < own.intensity.size(); ++i) {
        own.intensity[i] -= fit.weights[slot(j)] * basis[slot(j)].intensity[i];
      }
    }
    out.worst_centre = std::max(out.worst_centre, std::abs(locate_peak(own, expected, 0.25 * spacing) - expected));
    out.worst_raw_centre =
        std::max(out.worst_raw_centre, std::abs(locate_peak(pattern, expected, 0.25 * spacing) - expected));
  }

  double fit_total = 0.0;
  double ref_total = 0.0;
  for (int m = -slots; m <= slots; ++m) {
    fit_total += fit.weights[slot(m)];
    ref_total += spectrum.at(m);
  }
  for (int m = -slots; m <= slots; ++m) {
    const double ref = spectrum.at(m) / ref_total;
    if (ref < 0.02) continue;
    const double error = std::abs(fit.weights[slot(m)] / fit_total / ref - 1.0);
    if (m % 2 == 0) {
      out.worst_weight = std::max(out.worst_weight, error);
      ++out.weights_checked;
    } else {
      out.worst_odd_weight = std::max(out.worst_odd_weight, error);
    }
  }
  return out;
}

Outcome mode_cross_validation() {
  const auto c60 = cross_validate(species("C60"));
  const auto c70 = cross_validate(species("C70"));
  const double centre = std::max(c60.worst_centre, c70.worst_centre);
  const double raw = std::max(c60.worst_raw_centre, c70.worst_raw_centre);
  const double weight = std::max(c60.worst_weight, c70.worst_weight);
  const double odd = std::max(c60.worst_odd_weight, c70.worst_odd_weight);
  return {centre <= 2e-6 && weight <= 0.05,
          fmt("peak centre error %.2f um (limit 2 um, raw maxima %.2f um); order weight error "
              "%.2f%% over %d orders (limit 5%%, absorption shoulders %.1f%%)",
              centre * 1e6, raw * 1e6, 100 * weight, c60.weights_checked + c70.weights_checked,
              100 * odd)};
}

Outcome photon_number_identity() {
  double worst = 0.0;
  const double k = GratingBeam{}.wavenumber();
  const double lambda = GratingBeam{}.wavelength;
  for (const auto& phi : tested_phases()) {
    const int n = 1000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += mean_photon_number(phi, lambda * (i + 0.5) / n, k);
    worst = std::max(worst, std::abs(sum / n - phi.mean_photon_number()));
  }
  return {worst <= 1e-9, fmt("max |<nbar> - 2 Im Phi| = %.2e (limit 1e-9)", worst)};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "molgrating_acceptance";
  SimulationConfig c;
  c.setup.numerics.check_convergence = false;
  c.output.directory = dir.string();
  std::vector<std::string> files;
  for (unsigned threads : {0u, 0u, 1u, 4u}) {
    c.setup.numerics.threads = threads;
    run_simulate(c);
    files.push_back(read_text_file(dir / c.output.pattern_csv));
  }
  std::filesystem::remove_all(dir);
  const bool same = std::all_of(files.begin(), files.end(), [&](const auto& f) { return f == files[0]; });
  return {same, fmt("%zu runs (repeated, 1 and 4 workers) %s", files.size(),
                    same ? "bit-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Bessel-oracle equivalence", bessel_equivalence},
      {"Zero-order suppression", zero_order_suppression},
      {"First-order efficiency", first_order_efficiency},
      {"Absorption fractions", absorption_fractions},
      {"Cross-section consistency", cross_sections},
      {"Conservation", conservation},
      {"Selection rule", selection_rule},
      {"Mode cross-validation", mode_cross_validation},
      {"Mean photon number identity", photon_number_identity},
      {"Determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
