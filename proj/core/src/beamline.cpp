#include "molgrating/beamline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "molgrating/pattern.hpp"
#include "parallel.hpp"

namespace molgrating {

namespace {

constexpr double kPi = std::numbers::pi;

/// Paraxial cylindrical wave from source_x at distance l12, clipped by slit 2,
/// normalised to unit probability on the grating-plane grid.
std::vector<std::complex<double>> illumination(const GridSpec& grid, const BeamlineGeometry& geom,
                                               double source_x, double de_broglie) {
  const double half = 0.5 * geom.slit2_width;
  const double dx = grid.step();
  const double a = 1.0 / (de_broglie * geom.l12);
  std::vector<std::complex<double>> field(grid.samples);
  double power = 0.0;
  for (std::size_t k = 0; k < grid.samples; ++k) {
    const double x = grid.position(k);
    const double covered = std::max(0.0, std::min(x + 0.5 * dx, half) - std::max(x - 0.5 * dx, -half));
    if (covered <= 0.0) continue;
    const double r = x - source_x;
    field[k] = std::polar(covered / dx, kPi * std::fmod(a * r * r, 2.0));
    // Each sample carries the cell integral, so the probability is the covered length.
    power += covered;
  }
  if (!(power > 0.0)) throw std::invalid_argument("slit 2 does not overlap the grating-plane grid");
  const double scale = 1.0 / std::sqrt(power);
  for (auto& v : field) v *= scale;
  return field;
}

std::vector<double> source_nodes(const BeamlineGeometry& geom, std::size_t n) {
  if (n < 1) throw std::invalid_argument("need at least one source node");
  std::vector<double> nodes(n);
  const double h = geom.slit1_width / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = -0.5 * geom.slit1_width + (static_cast<double>(i) + 0.5) * h;
  }
  return nodes;
}

struct InternalGrid {
  DetectorGrid fine;
  std::size_t centre = 0;
  std::size_t oversample = 1;
  std::size_t half_scan = 0;
};

InternalGrid internal_grid(const ExperimentSetup& setup) {
  InternalGrid g;
  g.oversample = setup.numerics.oversample;
  const double fine_step = setup.detector.step / static_cast<double>(g.oversample);
  g.half_scan = static_cast<std::size_t>(
      std::floor(0.5 * setup.geometry.detector_span / setup.detector.step + 1e-9));
  const std::size_t half_fine = g.half_scan * g.oversample;
  g.fine = {-static_cast<double>(half_fine) * fine_step, fine_step, 2 * half_fine + 1};
  g.centre = half_fine;
  return g;
}

/// Detector blur, decimation onto the scan grid and normalisation.
DiffractionPattern finish_pattern(const ExperimentSetup& setup, const InternalGrid& grid,
                                  const std::vector<double>& fine, PatternMetadata metadata) {
  metadata.total_probability = std::accumulate(fine.begin(), fine.end(), 0.0) * grid.fine.step;
  metadata.detector_width = setup.detector.width;
  metadata.mode = setup.mode;
  metadata.normalization = setup.normalization;

  const auto kernel = detector_kernel(setup.detector, grid.fine.step);
  const auto blurred = convolve_same(fine, kernel);

  DiffractionPattern pattern;
  pattern.metadata = std::move(metadata);
  const auto half = static_cast<long>(grid.half_scan);
  for (long i = -half; i <= half; ++i) {
    const auto idx = static_cast<std::size_t>(static_cast<long>(grid.centre) +
                                              i * static_cast<long>(grid.oversample));
    pattern.positions.push_back(static_cast<double>(i) * setup.detector.step);
    pattern.intensity.push_back(std::max(0.0, blurred[idx]));
  }
  normalize_pattern(pattern, setup.normalization);
  return pattern;
}

ComplexPhase max_phase(const ExperimentSetup& setup, const Quadrature& velocities) {
  const double v_min = *std::min_element(velocities.nodes.begin(), velocities.nodes.end());
  return compute_phi(setup.species, setup.beam, v_min);
}

PatternMetadata base_metadata(const ExperimentSetup& setup, const Quadrature& velocities) {
  PatternMetadata meta;
  meta.velocity_nodes = velocities.nodes;
  meta.velocity_weights = velocities.weights;
  for (double v : velocities.nodes) {
    meta.phi_per_velocity.push_back(compute_phi(setup.species, setup.beam, v));
  }
  return meta;
}

using Transmission = std::function<std::complex<double>(double)>;

DiffractionPattern wave_ensemble(const ExperimentSetup& setup, const Transmission* override_t) {
  const auto& num = setup.numerics;
  const Quadrature velocities = velocity_quadrature(setup.velocity, num.velocity_nodes);
  VerticalQuadrature vertical = vertical_phi_scales(setup.vertical, num.vertical_nodes);
  if (override_t != nullptr) vertical = {{0.0}, {1.0}, {1.0}};
  const auto sources = source_nodes(setup.geometry, num.source_nodes);
  const InternalGrid grid = internal_grid(setup);
  const GridSpec plane = grating_plane_grid(setup.geometry, setup.beam,
                                            num.grating_samples_per_period);
  const int n_max = override_t != nullptr ? 0 : truncation_order(max_phase(setup, velocities),
                                                                  num.tail_eps);
  const std::size_t channels = static_cast<std::size_t>(n_max) + 1;
  const double k_l = setup.beam.wavenumber();

  // One propagator per velocity node; apply() is read-only and shared by tasks.
  std::vector<std::optional<FresnelPropagator>> propagators(velocities.size());
  detail::parallel_for(velocities.size(), num.threads, [&](std::size_t iv) {
    const double lambda = de_broglie_wavelength(setup.species, velocities.nodes[iv]);
    propagators[iv].emplace(plane, lambda, setup.geometry.l2d, grid.fine);
  });

  const std::size_t tasks = velocities.size() * sources.size();
  std::vector<std::vector<double>> partial(tasks);
  detail::parallel_for(tasks, num.threads, [&](std::size_t t) {
    const std::size_t iv = t / sources.size();
    const std::size_t is = t % sources.size();
    const double v = velocities.nodes[iv];
    const double lambda = de_broglie_wavelength(setup.species, v);
    const auto incident = illumination(plane, setup.geometry, sources[is], lambda);
    const FresnelPropagator& prop = *propagators[iv];

    std::vector<double> intensity(grid.fine.count, 0.0);
    if (override_t != nullptr) {
      std::vector<std::complex<double>> field(plane.samples);
      for (std::size_t k = 0; k < plane.samples; ++k) {
        field[k] = incident[k] * (*override_t)(plane.position(k));
      }
      prop.accumulate_intensity(field, 1.0, intensity);
    } else {
      const ComplexPhase phi = compute_phi(setup.species, setup.beam, v);
      std::vector<std::vector<std::complex<double>>> fields(
          channels, std::vector<std::complex<double>>(plane.samples));
      std::vector<std::complex<double>> amps(channels);
      for (std::size_t iy = 0; iy < vertical.scales.size(); ++iy) {
        const ComplexPhase local = phi.scaled(vertical.scales[iy]);
        for (std::size_t k = 0; k < plane.samples; ++k) {
          if (incident[k] == 0.0) {
            for (auto& f : fields) f[k] = 0.0;
            continue;
          }
          channel_amplitudes(local, plane.position(k), k_l, amps);
          for (std::size_t n = 0; n < channels; ++n) fields[n][k] = incident[k] * amps[n];
        }
        for (std::size_t n = 0; n < channels; ++n) {
          prop.accumulate_intensity(fields[n], vertical.weights[iy], intensity);
        }
      }
    }
    partial[t] = std::move(intensity);
  });

  // Fixed-order reduction keeps the result independent of the worker count.
  std::vector<double> fine(grid.fine.count, 0.0);
  const double source_weight = 1.0 / static_cast<double>(sources.size());
  for (std::size_t t = 0; t < tasks; ++t) {
    const double w = velocities.weights[t / sources.size()] * source_weight;
    for (std::size_t j = 0; j < fine.size(); ++j) fine[j] += w * partial[t][j];
  }

  PatternMetadata meta = base_metadata(setup, velocities);
  meta.photon_channels = static_cast<int>(channels);
  return finish_pattern(setup, grid, fine, std::move(meta));
}

std::vector<OrderSpectrum> per_velocity_orders(const ExperimentSetup& setup,
                                               const Quadrature& velocities) {
  const auto& num = setup.numerics;
  const VerticalQuadrature vertical = vertical_phi_scales(setup.vertical, num.vertical_nodes);
  std::vector<OrderSpectrum> out(velocities.size());
  detail::parallel_for(velocities.size(), num.threads, [&](std::size_t iv) {
    const ComplexPhase phi = compute_phi(setup.species, setup.beam, velocities.nodes[iv]);
    OrderSpectrum avg(num.m_max);
    for (std::size_t iy = 0; iy < vertical.scales.size(); ++iy) {
      const auto s = incoherent_order_intensities(phi.scaled(vertical.scales[iy]), num.m_max,
                                                  num.tail_eps, num.spectrum_samples_per_period,
                                                  false);
      for (std::size_t j = 0; j < avg.intensities.size(); ++j) {
        avg.intensities[j] += vertical.weights[iy] * s.intensities[j];
      }
    }
    out[iv] = std::move(avg);
  });
  return out;
}

DiffractionPattern orders_ensemble(const ExperimentSetup& setup) {
  const auto& num = setup.numerics;
  const Quadrature velocities = velocity_quadrature(setup.velocity, num.velocity_nodes);
  const InternalGrid grid = internal_grid(setup);
  const TrapezoidProfile envelope = geometric_envelope(setup.geometry);
  const auto spectra = per_velocity_orders(setup, velocities);

  std::vector<std::vector<double>> partial(velocities.size());
  detail::parallel_for(velocities.size(), num.threads, [&](std::size_t iv) {
    const double v = velocities.nodes[iv];
    // Slot spacing is hbar k_L, half the diffraction-order spacing.
    const double slot = 0.5 * farfield_peak_positions(setup.species, v, setup.beam,
                                                      setup.geometry, 1)[2];
    std::vector<double> intensity(grid.fine.count, 0.0);
    for (int m = -num.m_max; m <= num.m_max; ++m) {
      const double weight = spectra[iv].at(m);
      if (weight == 0.0) continue;
      const auto shape = sample_envelope(envelope, grid.fine, m * slot);
      for (std::size_t j = 0; j < intensity.size(); ++j) intensity[j] += weight * shape[j];
    }
    partial[iv] = std::move(intensity);
  });

  std::vector<double> fine(grid.fine.count, 0.0);
  for (std::size_t iv = 0; iv < velocities.size(); ++iv) {
    for (std::size_t j = 0; j < fine.size(); ++j) {
      fine[j] += velocities.weights[iv] * partial[iv][j];
    }
  }
  PatternMetadata meta = base_metadata(setup, velocities);
  meta.photon_channels = truncation_order(max_phase(setup, velocities), num.tail_eps) + 1;
  return finish_pattern(setup, grid, fine, std::move(meta));
}

}  // namespace

void BeamlineGeometry::validate() const {
  if (!(slit1_width > 0.0)) throw std::invalid_argument("slit1_width must be > 0");
  if (!(slit2_width > 0.0)) throw std::invalid_argument("slit2_width must be > 0");
  if (!(l12 > 0.0)) throw std::invalid_argument("l12 must be > 0");
  if (!(l2d > 0.0)) throw std::invalid_argument("l2d must be > 0");
  if (!(detector_span > 0.0)) throw std::invalid_argument("detector_span must be > 0");
}

void NumericsSettings::validate() const {
  if (velocity_nodes < 1) throw std::invalid_argument("velocity_nodes must be >= 1");
  if (vertical_nodes < 1) throw std::invalid_argument("vertical_nodes must be >= 1");
  if (source_nodes < 1) throw std::invalid_argument("source_nodes must be >= 1");
  if (grating_samples_per_period <= 8) {
    throw std::invalid_argument("grating_samples_per_period must exceed 8 (spacing < lambda_L/8)");
  }
  if (spectrum_samples_per_period < static_cast<std::size_t>(2 * m_max + 2)) {
    throw std::invalid_argument("spectrum_samples_per_period must exceed 2 m_max + 1");
  }
  if (oversample < 1) throw std::invalid_argument("oversample must be >= 1");
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw std::invalid_argument("tail_eps must lie in (0, 1)");
}

void ExperimentSetup::validate() const {
  species.validate();
  beam.validate();
  geometry.validate();
  velocity.validate();
  vertical.validate();
  detector.validate();
  numerics.validate();
  if (geometry.detector_span < 2.0 * detector.step) {
    throw std::invalid_argument("detector_span must cover at least two scan steps");
  }
}

double TrapezoidProfile::density(double x) const {
  const double height = 2.0 / (penumbra + umbra);
  const double ax = std::abs(x);
  if (ax <= 0.5 * umbra) return height;
  if (ax >= 0.5 * penumbra) return 0.0;
  return height * (0.5 * penumbra - ax) / (0.5 * (penumbra - umbra));
}

double TrapezoidProfile::integral(double lo, double hi) const {
  const double height = 2.0 / (penumbra + umbra);
  const double u = 0.5 * umbra;
  const double p = 0.5 * penumbra;
  // Mass between 0 and t >= 0.
  auto half_mass = [&](double t) {
    if (t <= u) return height * t;
    if (t >= p) return 0.5;
    const double slope_len = p - u;
    const double s = t - u;
    return height * u + height * (s - 0.5 * s * s / slope_len);
  };
  auto cdf = [&](double x) { return x >= 0.0 ? 0.5 + half_mass(x) : 0.5 - half_mass(-x); };
  return cdf(hi) - cdf(lo);
}

std::vector<double> farfield_peak_positions(const MoleculeSpecies& species, double velocity,
                                            const GratingBeam& beam, const BeamlineGeometry& geom,
                                            int m_max) {
  if (!(velocity > 0.0)) throw std::domain_error("velocity must be > 0");
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  const double spacing = 2.0 * PhysicalConstants::hbar * beam.wavenumber() /
                         (species.mass_kg() * velocity) * geom.l2d;
  std::vector<double> out;
  for (int m = -m_max; m <= m_max; ++m) out.push_back(m * spacing);
  return out;
}

TrapezoidProfile geometric_envelope(const BeamlineGeometry& geom) {
  const double ratio = geom.l2d / geom.l12;
  const double slit2_image = geom.slit2_width * (1.0 + ratio);
  const double slit1_image = geom.slit1_width * ratio;
  return {std::abs(slit2_image - slit1_image), slit2_image + slit1_image};
}

std::vector<double> sample_envelope(const TrapezoidProfile& envelope, const DetectorGrid& grid,
                                    double shift) {
  std::vector<double> out(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double x = grid.position(i) - shift;
    out[i] = envelope.integral(x - 0.5 * grid.step, x + 0.5 * grid.step) / grid.step;
  }
  return out;
}

GridSpec grating_plane_grid(const BeamlineGeometry& geom, const GratingBeam& beam,
                            std::size_t samples_per_period) {
  if (samples_per_period <= 8) {
    throw std::invalid_argument("grating-plane spacing must be finer than lambda_L / 8");
  }
  auto periods = static_cast<std::size_t>(std::ceil(geom.slit2_width / beam.wavelength)) + 4;
  periods += periods % 2;
  return GridSpec::centered(beam.wavelength, periods, samples_per_period);
}

std::vector<double> point_source_pattern(double source_x,
                                         std::span<const TransmissionChannel> channels,
                                         const BeamlineGeometry& geom, double de_broglie,
                                         const DetectorGrid& detector) {
  if (std::abs(source_x) > 0.5 * geom.slit1_width * (1.0 + 1e-12)) {
    throw std::invalid_argument("source point lies outside slit 1");
  }
  if (channels.empty()) throw std::invalid_argument("need at least one transmission channel");
  const GridSpec& plane = channels.front().grid;
  const auto incident = illumination(plane, geom, source_x, de_broglie);
  const FresnelPropagator prop(plane, de_broglie, geom.l2d, detector);
  std::vector<double> intensity(detector.count, 0.0);
  std::vector<std::complex<double>> field(plane.samples);
  for (const auto& channel : channels) {
    if (channel.samples.size() != plane.samples || channel.grid.step() != plane.step() ||
        channel.grid.start != plane.start) {
      throw std::invalid_argument("transmission channels do not share a grid");
    }
    for (std::size_t k = 0; k < plane.samples; ++k) field[k] = incident[k] * channel.samples[k];
    prop.accumulate_intensity(field, 1.0, intensity);
  }
  return intensity;
}

DiffractionPattern ensemble_pattern(const ExperimentSetup& setup) {
  setup.validate();
  return setup.mode == SimulationMode::wave ? wave_ensemble(setup, nullptr)
                                            : orders_ensemble(setup);
}

DiffractionPattern ensemble_pattern_with_transmission(
    const ExperimentSetup& setup, const std::function<std::complex<double>(double)>& transmission) {
  setup.validate();
  return wave_ensemble(setup, &transmission);
}

OrderSpectrum averaged_order_intensities(const ExperimentSetup& setup) {
  setup.validate();
  const Quadrature velocities = velocity_quadrature(setup.velocity, setup.numerics.velocity_nodes);
  const auto spectra = per_velocity_orders(setup, velocities);
  OrderSpectrum avg(setup.numerics.m_max);
  for (std::size_t iv = 0; iv < spectra.size(); ++iv) {
    for (std::size_t j = 0; j < avg.intensities.size(); ++j) {
      avg.intensities[j] += velocities.weights[iv] * spectra[iv].intensities[j];
    }
  }
  return avg;
}

double ConvergenceReport::worst() const {
  return std::max({velocity_rms, vertical_rms, source_rms, grid_rms});
}

ConvergenceReport convergence_study(const ExperimentSetup& setup, const DiffractionPattern& base) {
  auto rerun = [&](auto&& tweak) {
    ExperimentSetup s = setup;
    s.numerics.check_convergence = false;
    tweak(s.numerics);
    return pattern_nrmse(base, ensemble_pattern(s));
  };
  ConvergenceReport r;
  r.velocity_rms = rerun([](NumericsSettings& n) { n.velocity_nodes *= 2; });
  r.vertical_rms = rerun([](NumericsSettings& n) { n.vertical_nodes *= 2; });
  r.source_rms = setup.mode == SimulationMode::wave
                     ? rerun([](NumericsSettings& n) { n.source_nodes *= 2; })
                     : 0.0;
  r.grid_rms = rerun([&](NumericsSettings& n) {
    if (setup.mode == SimulationMode::wave) {
      n.grating_samples_per_period *= 2;
    } else {
      n.spectrum_samples_per_period *= 2;
    }
    n.oversample *= 2;
  });
  return r;
}

}  // namespace molgrating
