#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "molgrating/grating.hpp"

namespace molgrating {

/// Uniform output grid, sample i at start + i * step.
struct DetectorGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t count = 0;

  [[nodiscard]] double position(std::size_t i) const {
    return start + static_cast<double>(i) * step;
  }
  [[nodiscard]] double end() const { return position(count == 0 ? 0 : count - 1); }

  /// Grid symmetric about zero with a sample at 0, covering [-half_span, half_span].
  static DetectorGrid symmetric(double half_span, double step);
};

/// Complex field sampled on cell centres; each sample stands for its whole cell.
struct SampledField {
  GridSpec grid;
  std::vector<std::complex<double>> values;

  [[nodiscard]] double power() const;
};

class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Paraxial 1D Fresnel transform
///   psi(X) = (i lambda L)^-1/2  integral f(xi) exp(i pi (X - xi)^2 / (lambda L)) dxi
/// evaluated on an arbitrary uniform output grid with a chirp-z transform.
/// Setup cost is paid once; apply() can be called for many fields on the same input grid.
class FresnelPropagator {
 public:
  /// Throws AliasingError when the input spacing undersamples the kernel chirp
  /// anywhere on the output grid, std::invalid_argument for bad geometry.
  FresnelPropagator(const GridSpec& input, double wavelength, double distance,
                    const DetectorGrid& output);

  [[nodiscard]] std::vector<std::complex<double>> apply(
      std::span<const std::complex<double>> field) const;

  /// Accumulates weight * |psi|^2 into intensity, reusing internal scratch.
  void accumulate_intensity(std::span<const std::complex<double>> field, double weight,
                            std::span<double> intensity) const;

  [[nodiscard]] const GridSpec& input() const { return input_; }
  [[nodiscard]] const DetectorGrid& output() const { return output_; }

 private:
  void transform(std::span<const std::complex<double>> field,
                 std::vector<std::complex<double>>& work) const;

  GridSpec input_;
  DetectorGrid output_;
  std::size_t fft_size_ = 0;
  std::vector<std::complex<double>> pre_;    // per input sample
  std::vector<std::complex<double>> post_;   // per output sample
  std::vector<std::complex<double>> kernel_fft_;
};

/// Maximum input spacing that resolves the Fresnel chirp over the given geometry.
double fresnel_max_spacing(const GridSpec& input, double wavelength, double distance,
                           const DetectorGrid& output);

std::vector<std::complex<double>> fresnel_propagate(const SampledField& field, double wavelength,
                                                    double distance, const DetectorGrid& output);

}  // namespace molgrating
