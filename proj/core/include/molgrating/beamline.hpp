#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "molgrating/distributions.hpp"
#include "molgrating/fresnel.hpp"
#include "molgrating/grating.hpp"
#include "molgrating/spectrum.hpp"
#include "molgrating/units.hpp"

namespace molgrating {

/// Collimation slits and flight distances. Slit 2 sits in the grating plane.
struct BeamlineGeometry {
  double slit1_width = 7e-6;
  double slit2_width = 5e-6;
  double l12 = 1.13;
  double l2d = 1.2;
  double detector_span = 300e-6;  ///< full width of the scanned region

  void validate() const;
  friend bool operator==(const BeamlineGeometry&, const BeamlineGeometry&) = default;
};

enum class SimulationMode { wave, orders };
enum class Normalization { unit_sum, peak };

struct NumericsSettings {
  std::size_t velocity_nodes = 16;
  std::size_t vertical_nodes = 16;
  std::size_t source_nodes = 16;
  /// Grating-plane samples per laser wavelength in wave mode.
  std::size_t grating_samples_per_period = 64;
  /// Samples per laser wavelength for Fourier order decomposition.
  std::size_t spectrum_samples_per_period = kDefaultSamplesPerPeriod;
  /// Internal detector samples per scan step.
  std::size_t oversample = 8;
  int m_max = kDefaultMaxOrder;
  double tail_eps = kDefaultTailEps;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  bool check_convergence = true;

  void validate() const;
  friend bool operator==(const NumericsSettings&, const NumericsSettings&) = default;
};

/// Everything the forward model needs; no free parameters beyond these.
struct ExperimentSetup {
  MoleculeSpecies species = {"C60", 720.0, {101.0, 8.0}};
  GratingBeam beam;
  BeamlineGeometry geometry;
  VelocityDistribution velocity;
  VerticalProfile vertical;
  DetectorModel detector;
  NumericsSettings numerics;
  SimulationMode mode = SimulationMode::wave;
  Normalization normalization = Normalization::unit_sum;

  void validate() const;
  friend bool operator==(const ExperimentSetup&, const ExperimentSetup&) = default;
};

struct PatternMetadata {
  std::string config_digest;
  SimulationMode mode = SimulationMode::wave;
  Normalization normalization = Normalization::unit_sum;
  std::vector<double> velocity_nodes;
  std::vector<double> velocity_weights;
  std::vector<ComplexPhase> phi_per_velocity;
  double detector_width = 0.0;
  /// Detected probability before normalisation.
  double total_probability = 0.0;
  int photon_channels = 1;
};

struct DiffractionPattern {
  std::vector<double> positions;  ///< m
  std::vector<double> intensity;
  PatternMetadata metadata;

  [[nodiscard]] double step() const {
    return positions.size() > 1 ? positions[1] - positions[0] : 0.0;
  }
};

/// Projected two-slit shadow: unit-area trapezoid with flat top `umbra` and base `penumbra`.
struct TrapezoidProfile {
  double umbra = 0.0;
  double penumbra = 0.0;

  [[nodiscard]] double density(double x) const;
  /// Integral of the density over [lo, hi].
  [[nodiscard]] double integral(double lo, double hi) const;
};

/// Detector positions of diffraction orders m = -m_max..m_max (units of 2 hbar k_L).
std::vector<double> farfield_peak_positions(const MoleculeSpecies& species, double velocity,
                                            const GratingBeam& beam, const BeamlineGeometry& geom,
                                            int m_max);

/// Incoherent ray shadow of the two collimation slits at the detector.
TrapezoidProfile geometric_envelope(const BeamlineGeometry& geom);

/// Cell-averaged samples of the envelope on a detector grid (unit area).
std::vector<double> sample_envelope(const TrapezoidProfile& envelope, const DetectorGrid& grid,
                                    double shift = 0.0);

/// Grating-plane grid used in wave mode: slit 2 plus a four-wavelength margin,
/// rounded up to an even number of laser wavelengths.
GridSpec grating_plane_grid(const BeamlineGeometry& geom, const GratingBeam& beam,
                            std::size_t samples_per_period);

/// Detected intensity for one point of the first slit: cylindrical wave clipped by
/// slit 2, multiplied by each channel transmission and propagated to the detector.
/// Channels must share one grating-plane grid. The incident wave carries unit probability.
std::vector<double> point_source_pattern(double source_x,
                                         std::span<const TransmissionChannel> channels,
                                         const BeamlineGeometry& geom, double de_broglie,
                                         const DetectorGrid& detector);

/// Full ensemble average (source x velocity x vertical phase scale), detector blur and
/// resampling onto the scan grid.
DiffractionPattern ensemble_pattern(const ExperimentSetup& setup);

/// Wave-mode ensemble with a user transmission t(xi) in place of the grating channels.
/// Used to build single-order reference shapes.
DiffractionPattern ensemble_pattern_with_transmission(
    const ExperimentSetup& setup, const std::function<std::complex<double>(double)>& transmission);

/// Velocity- and vertically averaged order intensities for the setup.
OrderSpectrum averaged_order_intensities(const ExperimentSetup& setup);

struct ConvergenceReport {
  double velocity_rms = 0.0;
  double vertical_rms = 0.0;
  double source_rms = 0.0;
  double grid_rms = 0.0;
  [[nodiscard]] double worst() const;
  [[nodiscard]] bool converged(double tolerance = 0.01) const { return worst() <= tolerance; }
};

/// Re-runs the ensemble with each quadrature axis and the grid resolution doubled.
ConvergenceReport convergence_study(const ExperimentSetup& setup, const DiffractionPattern& base);

}  // namespace molgrating
