#include "molgrating/fresnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace molgrating {

namespace {

constexpr double kPi = std::numbers::pi;

double sinc(double u) { return std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u; }

/// exp(i pi q) with q reduced modulo 2 first to keep large chirp phases accurate.
std::complex<double> unit_phase_pi(double q) {
  return std::polar(1.0, kPi * std::fmod(q, 2.0));
}

}  // namespace

DetectorGrid DetectorGrid::symmetric(double half_span, double step) {
  if (!(step > 0.0) || !(half_span >= 0.0)) {
    throw std::invalid_argument("detector grid needs step > 0 and half_span >= 0");
  }
  const auto half = static_cast<std::size_t>(std::floor(half_span / step + 1e-9));
  return {-static_cast<double>(half) * step, step, 2 * half + 1};
}

double SampledField::power() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * grid.step();
}

double fresnel_max_spacing(const GridSpec& input, double wavelength, double distance,
                           const DetectorGrid& output) {
  const double xi_lo = input.position(0);
  const double xi_hi = input.position(input.samples - 1);
  const double reach = std::max({std::abs(output.end() - xi_lo), std::abs(output.start - xi_hi),
                                 std::abs(output.end() - xi_hi), std::abs(output.start - xi_lo)});
  if (reach == 0.0) return std::numeric_limits<double>::infinity();
  return wavelength * distance / (2.0 * reach);
}

FresnelPropagator::FresnelPropagator(const GridSpec& input, double wavelength, double distance,
                                     const DetectorGrid& output)
    : input_(input), output_(output) {
  if (input.samples == 0 || !(input.extent > 0.0)) {
    throw std::invalid_argument("Fresnel input grid is empty");
  }
  if (output.count == 0 || !(output.step > 0.0)) {
    throw std::invalid_argument("Fresnel output grid is empty");
  }
  if (!(wavelength > 0.0) || !(distance > 0.0)) {
    throw std::invalid_argument("Fresnel propagation needs wavelength > 0 and distance > 0");
  }
  const double d = input.step();
  const double limit = fresnel_max_spacing(input, wavelength, distance, output);
  if (d > limit * (1.0 + 1e-12)) {
    throw AliasingError("input spacing " + std::to_string(d) + " m exceeds the chirp sampling limit " +
                        std::to_string(limit) + " m");
  }

  const std::size_t n = input.samples;
  const std::size_t m = output.count;
  const double a = 1.0 / (wavelength * distance);
  const double xi0 = input.position(0);
  const double x0 = output.start;
  const double dx_out = output.step;
  const double beta = a * dx_out * d;

  pre_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double xi = input.position(k);
    const double q = a * xi * xi - 2.0 * a * x0 * kd * d - std::fmod(beta * kd * kd, 2.0);
    pre_[k] = unit_phase_pi(q);
  }

  const std::complex<double> norm = std::polar(1.0 / std::sqrt(wavelength * distance), -kPi / 4.0) * d;
  post_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double jd = static_cast<double>(j);
    const double x = output.position(j);
    const double q = a * x * x - 2.0 * a * (x0 * xi0 + jd * dx_out * xi0) - std::fmod(beta * jd * jd, 2.0);
    post_[j] = norm * sinc(kPi * a * x * d) * unit_phase_pi(q);
  }

  fft_size_ = detail::fast_fft_size(n + m - 1);
  kernel_fft_.assign(fft_size_, {0.0, 0.0});
  for (std::size_t j = 0; j < m; ++j) {
    const double jd = static_cast<double>(j);
    kernel_fft_[j] = unit_phase_pi(std::fmod(beta * jd * jd, 2.0));
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    kernel_fft_[fft_size_ - k] = unit_phase_pi(std::fmod(beta * kd * kd, 2.0));
  }
  detail::fft_inplace(kernel_fft_, -1);
  const double inv = 1.0 / static_cast<double>(fft_size_);
  for (auto& v : kernel_fft_) v *= inv;
}

void FresnelPropagator::transform(std::span<const std::complex<double>> field,
                                  std::vector<std::complex<double>>& work) const {
  if (field.size() != input_.samples) {
    throw std::invalid_argument("field length does not match the propagator input grid");
  }
  work.assign(fft_size_, {0.0, 0.0});
  for (std::size_t k = 0; k < field.size(); ++k) work[k] = field[k] * pre_[k];
  detail::fft_inplace(work, -1);
  for (std::size_t i = 0; i < fft_size_; ++i) work[i] *= kernel_fft_[i];
  detail::fft_inplace(work, +1);
  for (std::size_t j = 0; j < output_.count; ++j) work[j] *= post_[j];
}

std::vector<std::complex<double>> FresnelPropagator::apply(
    std::span<const std::complex<double>> field) const {
  std::vector<std::complex<double>> work;
  transform(field, work);
  work.resize(output_.count);
  return work;
}

void FresnelPropagator::accumulate_intensity(std::span<const std::complex<double>> field,
                                             double weight, std::span<double> intensity) const {
  if (intensity.size() != output_.count) {
    throw std::invalid_argument("intensity buffer does not match the propagator output grid");
  }
  thread_local std::vector<std::complex<double>> work;
  transform(field, work);
  for (std::size_t j = 0; j < output_.count; ++j) intensity[j] += weight * std::norm(work[j]);
}

std::vector<std::complex<double>> fresnel_propagate(const SampledField& field, double wavelength,
                                                    double distance, const DetectorGrid& output) {
  if (field.values.size() != field.grid.samples) {
    throw std::invalid_argument("field values do not match the grid sample count");
  }
  return FresnelPropagator(field.grid, wavelength, distance, output).apply(field.values);
}

}  // namespace molgrating
