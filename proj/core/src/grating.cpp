#include "molgrating/grating.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace molgrating {

void GratingBeam::validate() const {
  if (!(wavelength > 0.0)) throw std::invalid_argument("grating wavelength must be > 0");
  if (!(power_per_wave >= 0.0)) throw std::invalid_argument("grating power must be >= 0");
  if (!(waist_y > 0.0)) throw std::invalid_argument("grating waist_y must be > 0");
  if (!(waist_z > 0.0)) throw std::invalid_argument("grating waist_z must be > 0");
}

GridSpec GridSpec::one_period(double laser_wavelength, std::size_t samples) {
  return {0.0, laser_wavelength, samples, false};
}

GridSpec GridSpec::centered(double laser_wavelength, std::size_t periods,
                            std::size_t samples_per_period) {
  const double extent = laser_wavelength * static_cast<double>(periods);
  return {-0.5 * extent, extent, periods * samples_per_period, true};
}

void require_commensurate(const GridSpec& grid, double laser_wavelength) {
  if (grid.samples == 0 || !(grid.extent > 0.0)) {
    throw std::invalid_argument("grid must have samples and a positive extent");
  }
  const double periods = grid.extent / laser_wavelength;
  const double whole = std::round(periods);
  if (whole < 1.0 || std::abs(periods - whole) > 1e-9 * whole) {
    throw std::invalid_argument("grid extent is not a whole number of laser wavelengths");
  }
  // Samples must land identically in each period for exact periodicity.
  const double per_period = static_cast<double>(grid.samples) / whole;
  if (std::abs(per_period - std::round(per_period)) > 1e-9) {
    throw std::invalid_argument("grid samples are not commensurate with the laser wavelength");
  }
}

ComplexPhase compute_phi(const MoleculeSpecies& species, const GratingBeam& beam, double velocity) {
  if (!(velocity > 0.0)) throw std::domain_error("velocity must be > 0");
  if (!(beam.waist_y > 0.0)) throw std::domain_error("waist_y must be > 0");
  using K = PhysicalConstants;
  const std::complex<double> alpha = polarizability_si(species.polarizability);
  const double prefactor = std::sqrt(2.0 / std::numbers::pi) * beam.power_per_wave /
                           (beam.waist_y * velocity * K::hbar * K::c * K::eps0);
  return {prefactor * alpha.real(), prefactor * alpha.imag()};
}

double mean_photon_number(const ComplexPhase& phi, double x, double laser_wavenumber) {
  const double c = std::cos(laser_wavenumber * x);
  return phi.im * 4.0 * c * c;
}

double poisson_weight(double nbar, int n) {
  if (n < 0) return 0.0;
  if (nbar <= 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(nbar) - nbar - std::lgamma(n + 1.0));
}

void channel_amplitudes(const ComplexPhase& phi, double x, double laser_wavenumber,
                        std::span<std::complex<double>> out) {
  if (out.empty()) return;
  const double c = std::cos(laser_wavenumber * x);
  const double c2 = c * c;
  const double nbar = 4.0 * phi.im * c2;
  const double sign = c < 0.0 ? -1.0 : (c > 0.0 ? 1.0 : 0.0);
  const std::complex<double> dipole = std::polar(1.0, 2.0 * phi.re * c2);

  // sqrt(p_n) s^n = sqrt(p_{n-1}) s^{n-1} * s sqrt(nbar / n)
  double amp = std::exp(-0.5 * nbar);
  out[0] = dipole * amp;
  for (std::size_t n = 1; n < out.size(); ++n) {
    amp *= sign * std::sqrt(nbar / static_cast<double>(n));
    out[n] = dipole * amp;
  }
}

std::complex<double> channel_amplitude(const ComplexPhase& phi, int n, double x,
                                       double laser_wavenumber) {
  if (n < 0) throw std::invalid_argument("photon count must be >= 0");
  const double c = std::cos(laser_wavenumber * x);
  const double c2 = c * c;
  const double nbar = 4.0 * phi.im * c2;
  const double weight = std::sqrt(poisson_weight(nbar, n));
  const double sign = (n % 2 == 1 && c < 0.0) ? -1.0 : 1.0;
  return std::polar(weight * sign, 2.0 * phi.re * c2);
}

TransmissionChannel channel_transmission(const ComplexPhase& phi, int n, const GridSpec& grid,
                                         double laser_wavelength) {
  if (n < 0) throw std::invalid_argument("photon count must be >= 0");
  require_commensurate(grid, laser_wavelength);
  const double k = 2.0 * std::numbers::pi / laser_wavelength;
  TransmissionChannel channel{n, grid, {}};
  channel.samples.resize(grid.samples);
  for (std::size_t i = 0; i < grid.samples; ++i) {
    channel.samples[i] = channel_amplitude(phi, n, grid.position(i), k);
  }
  return channel;
}

int truncation_order(const ComplexPhase& phi, double tail_eps) {
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
    throw std::invalid_argument("tail_eps must lie in (0, 1)");
  }
  const double nbar = phi.antinode_photon_number();
  double cumulative = 0.0;
  for (int n = 0; n < kMaxPhotonChannels; ++n) {
    cumulative += poisson_weight(nbar, n);
    if (1.0 - cumulative < tail_eps) return n;
  }
  return kMaxPhotonChannels;
}

RamanNathDiagnostic raman_nath_diagnostic(const MoleculeSpecies& species, const GratingBeam& beam,
                                          double velocity, const ComplexPhase& phi) {
  if (!(velocity > 0.0)) throw std::domain_error("velocity must be > 0");
  const double momentum_kick =
      2.0 * PhysicalConstants::hbar * beam.wavenumber() * std::max(1.0, phi.magnitude());
  const double transit_time = 2.0 * beam.waist_z / velocity;
  RamanNathDiagnostic d;
  d.displacement = momentum_kick * transit_time / (2.0 * species.mass_kg());
  d.ratio = d.displacement / beam.period();
  d.warning = d.ratio > kRamanNathWarnRatio;
  return d;
}

}  // namespace molgrating
