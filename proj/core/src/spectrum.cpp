#include "molgrating/spectrum.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fft.hpp"
#include "molgrating/bessel.hpp"

namespace molgrating {

double OrderSpectrum::total() const {
  return std::accumulate(intensities.begin(), intensities.end(), 0.0);
}

double OrderSpectrum::odd_weight() const {
  double sum = 0.0;
  for (int m = -m_max; m <= m_max; ++m) {
    if (m % 2 != 0) sum += at(m);
  }
  return sum;
}

OrderSpectrum pure_phase_orders(double phi_re, int m_max) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  OrderSpectrum spectrum(m_max);
  for (int slot = -m_max; slot <= m_max; ++slot) {
    if (slot % 2 != 0) continue;
    const double j = bessel_j(std::abs(slot / 2), phi_re);
    spectrum.at(slot) = j * j;
  }
  return spectrum;
}

std::vector<std::complex<double>> fourier_order_amplitudes(const TransmissionChannel& channel,
                                                           int m_max, double laser_wavelength) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  const GridSpec& grid = channel.grid;
  require_commensurate(grid, laser_wavelength);
  if (channel.samples.size() != grid.samples) {
    throw std::invalid_argument("channel sample count does not match its grid");
  }
  const std::size_t n = grid.samples;
  const auto periods = static_cast<std::size_t>(std::llround(grid.extent / laser_wavelength));

  std::vector<std::complex<double>> spectrum(channel.samples);
  detail::fft_inplace(spectrum, -1);

  // x_k = x_0 + k dx with k_L dx = 2 pi P / N, so c_m sits at DFT bin m P times a phase.
  const double k_l = 2.0 * std::numbers::pi / laser_wavelength;
  const double x0 = grid.position(0);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(2 * m_max + 1));
  for (int m = -m_max; m <= m_max; ++m) {
    const long long raw = static_cast<long long>(m) * static_cast<long long>(periods);
    const auto bin = static_cast<std::size_t>(((raw % static_cast<long long>(n)) +
                                               static_cast<long long>(n)) %
                                              static_cast<long long>(n));
    const std::complex<double> shift = std::polar(1.0, -m * k_l * x0);
    out[static_cast<std::size_t>(m + m_max)] = spectrum[bin] * shift / static_cast<double>(n);
  }
  return out;
}

OrderSpectrum incoherent_order_intensities(const ComplexPhase& phi, int m_max, double tail_eps,
                                           std::size_t samples_per_period, bool keep_channels) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  if (samples_per_period < static_cast<std::size_t>(2 * m_max + 2)) {
    throw std::invalid_argument("samples_per_period too small to resolve m_max");
  }
  const int n_max = truncation_order(phi, tail_eps);
  // Unit wavelength: the decomposition depends only on x / lambda_L.
  const GridSpec grid = GridSpec::one_period(1.0, samples_per_period);
  const double k_l = 2.0 * std::numbers::pi;

  std::vector<std::vector<std::complex<double>>> channels(
      static_cast<std::size_t>(n_max + 1),
      std::vector<std::complex<double>>(samples_per_period));
  std::vector<std::complex<double>> amps(static_cast<std::size_t>(n_max + 1));
  for (std::size_t i = 0; i < samples_per_period; ++i) {
    channel_amplitudes(phi, grid.position(i), k_l, amps);
    for (std::size_t n = 0; n < amps.size(); ++n) channels[n][i] = amps[n];
  }

  OrderSpectrum spectrum(m_max);
  if (keep_channels) spectrum.per_channel.resize(channels.size());
  for (std::size_t n = 0; n < channels.size(); ++n) {
    TransmissionChannel channel{static_cast<int>(n), grid, std::move(channels[n])};
    const auto c = fourier_order_amplitudes(channel, m_max, 1.0);
    if (keep_channels) spectrum.per_channel[n].resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double intensity = std::norm(c[j]);
      spectrum.intensities[j] += intensity;
      if (keep_channels) spectrum.per_channel[n][j] = intensity;
    }
  }
  return spectrum;
}

double zero_order_null() {
  double lo = 2.0;
  double hi = 3.0;
  double f_lo = bessel_j(0, lo);
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = bessel_j(0, mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double power_for_phase(const MoleculeSpecies& species, const GratingBeam& beam, double velocity,
                       double target_phase) {
  GratingBeam unit = beam;
  unit.power_per_wave = 1.0;
  const ComplexPhase per_watt = compute_phi(species, unit, velocity);
  if (per_watt.re <= 0.0) {
    throw std::domain_error("species has no real polarizability; phase cannot be reached");
  }
  return target_phase / per_watt.re;
}

double absorbed_fraction(const ComplexPhase& phi, int n, std::span<const double> vertical_scales,
                         std::span<const double> vertical_weights) {
  if (n < 0) throw std::invalid_argument("photon count must be >= 0");
  if (vertical_scales.size() != vertical_weights.size()) {
    throw std::invalid_argument("vertical scales and weights differ in length");
  }
  // cos^2 is smooth and periodic, so the uniform rule converges spectrally.
  constexpr int kSamples = 1024;
  auto period_average = [&](double scale) {
    const double nbar_max = phi.antinode_photon_number() * scale;
    double sum = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double c = std::cos(std::numbers::pi * i / kSamples);
      sum += poisson_weight(nbar_max * c * c, n);
    }
    return sum / kSamples;
  };
  if (vertical_scales.empty()) return period_average(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < vertical_scales.size(); ++i) {
    total += vertical_weights[i] * period_average(vertical_scales[i]);
  }
  return total;
}

}  // namespace molgrating
