#pragma once

#include <complex>
#include <span>
#include <vector>

#include "molgrating/grating.hpp"

namespace molgrating {

/// Probabilities of transverse momentum transfer m hbar k_L, m in [-m_max, m_max].
/// Coherent dipole diffraction only fills even slots; odd photon numbers fill odd slots.
struct OrderSpectrum {
  int m_max = 0;
  std::vector<double> intensities;
  /// per_channel[n][m + m_max], empty when not requested.
  std::vector<std::vector<double>> per_channel;

  OrderSpectrum() = default;
  explicit OrderSpectrum(int max_order)
      : m_max(max_order), intensities(static_cast<std::size_t>(2 * max_order + 1), 0.0) {}

  [[nodiscard]] double at(int m) const {
    return intensities[static_cast<std::size_t>(m + m_max)];
  }
  double& at(int m) { return intensities[static_cast<std::size_t>(m + m_max)]; }
  [[nodiscard]] double total() const;
  [[nodiscard]] double odd_weight() const;
};

inline constexpr int kDefaultMaxOrder = 20;
inline constexpr std::size_t kDefaultSamplesPerPeriod = 1024;
inline constexpr double kDefaultTailEps = 1e-10;

/// J_j(phi)^2 placed in slot 2j, odd slots zero.
OrderSpectrum pure_phase_orders(double phi_re, int m_max);

/// c_m = (1/L) integral of t(x) exp(-i m k_L x) over the channel window, |m| <= m_max.
/// Returned vector is indexed m + m_max.
std::vector<std::complex<double>> fourier_order_amplitudes(const TransmissionChannel& channel,
                                                           int m_max, double laser_wavelength);

/// Incoherent sum over photon channels of the squared Fourier amplitudes.
OrderSpectrum incoherent_order_intensities(const ComplexPhase& phi, int m_max = kDefaultMaxOrder,
                                           double tail_eps = kDefaultTailEps,
                                           std::size_t samples_per_period = kDefaultSamplesPerPeriod,
                                           bool keep_channels = true);

/// Root of J_0 inside [2, 3], located by bisection.
double zero_order_null();

/// Laser power per running wave that gives Re(Phi) = target_phase at the beam centre.
double power_for_phase(const MoleculeSpecies& species, const GratingBeam& beam, double velocity,
                       double target_phase);

/// Fraction of molecules absorbing exactly n photons, averaged uniformly over one
/// grating period and over vertical phase scales (empty spans mean scale 1).
double absorbed_fraction(const ComplexPhase& phi, int n, std::span<const double> vertical_scales = {},
                         std::span<const double> vertical_weights = {});

}  // namespace molgrating
