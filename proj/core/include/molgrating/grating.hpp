#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "molgrating/units.hpp"

namespace molgrating {

/// Retro-reflected laser forming the standing light wave.
/// Waists are 1/e^2 intensity radii.
struct GratingBeam {
  double wavelength = 514.5e-9;
  double power_per_wave = 0.0;
  double waist_y = 1.3e-3;
  double waist_z = 50e-6;

  [[nodiscard]] double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }
  /// Intensity period of the standing wave, lambda_L / 2.
  [[nodiscard]] double period() const { return wavelength / 2.0; }
  [[nodiscard]] double angular_frequency() const { return PhysicalConstants::c * wavenumber(); }

  void validate() const;

  friend bool operator==(const GratingBeam&, const GratingBeam&) = default;
};

/// Complex grating phase. The real part drives the dipole phase imprint and
/// twice the imaginary part is the period-averaged absorbed photon number.
struct ComplexPhase {
  double re = 0.0;
  double im = 0.0;

  [[nodiscard]] double mean_photon_number() const { return 2.0 * im; }
  [[nodiscard]] double antinode_photon_number() const { return 4.0 * im; }
  [[nodiscard]] double magnitude() const { return std::hypot(re, im); }
  [[nodiscard]] ComplexPhase scaled(double s) const { return {re * s, im * s}; }
};

/// Uniform sampling of a window along the grating vector.
/// Sample k sits at start + (k + offset) * step, offset 0.5 for cell-centred grids.
struct GridSpec {
  double start = 0.0;
  double extent = 0.0;
  std::size_t samples = 0;
  bool cell_centered = false;

  [[nodiscard]] double step() const { return extent / static_cast<double>(samples); }
  [[nodiscard]] double position(std::size_t k) const {
    return start + (static_cast<double>(k) + (cell_centered ? 0.5 : 0.0)) * step();
  }

  /// One laser wavelength starting at the antinode x = 0.
  static GridSpec one_period(double laser_wavelength, std::size_t samples);
  /// `periods` laser wavelengths centred on x = 0, cell-centred samples.
  static GridSpec centered(double laser_wavelength, std::size_t periods,
                           std::size_t samples_per_period);
};

/// Throws std::invalid_argument unless the grid spans a whole number of laser wavelengths.
void require_commensurate(const GridSpec& grid, double laser_wavelength);

struct TransmissionChannel {
  int photon_count = 0;
  GridSpec grid;
  std::vector<std::complex<double>> samples;
};

struct RamanNathDiagnostic {
  double displacement = 0.0;  ///< transverse walk inside the light field, m
  double ratio = 0.0;         ///< displacement / grating period
  bool warning = false;       ///< ratio above the thin-grating threshold
};

inline constexpr double kRamanNathWarnRatio = 0.1;
inline constexpr int kMaxPhotonChannels = 12;

/// Phase at the beam centre for velocity v; both parts of alpha enter linearly.
ComplexPhase compute_phi(const MoleculeSpecies& species, const GratingBeam& beam, double velocity);

/// nbar(x) = 4 Im(Phi) cos^2(k_L x)
double mean_photon_number(const ComplexPhase& phi, double x, double laser_wavenumber);

/// Poisson probability e^-nbar nbar^n / n!
double poisson_weight(double nbar, int n);

/// Transmission amplitude of the n-photon channel at position x.
std::complex<double> channel_amplitude(const ComplexPhase& phi, int n, double x,
                                       double laser_wavenumber);

/// Amplitudes of channels 0..out.size()-1 at x, filled by the Poisson recurrence.
void channel_amplitudes(const ComplexPhase& phi, double x, double laser_wavenumber,
                        std::span<std::complex<double>> out);

TransmissionChannel channel_transmission(const ComplexPhase& phi, int n, const GridSpec& grid,
                                         double laser_wavelength);

/// Smallest N whose Poisson tail P(n > N) at the antinode is below tail_eps, capped at 12.
int truncation_order(const ComplexPhase& phi, double tail_eps);

RamanNathDiagnostic raman_nath_diagnostic(const MoleculeSpecies& species, const GratingBeam& beam,
                                          double velocity, const ComplexPhase& phi);

}  // namespace molgrating
