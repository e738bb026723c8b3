#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace molgrating {

inline constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
/// Quadrature nodes cover this many FWHM on either side of the centre.
inline constexpr double kQuadratureHalfSpanFwhm = 2.5;

enum class VelocityShape { gaussian, histogram };

struct VelocityDistribution {
  double v_peak = 120.0;
  double fwhm_ratio = 0.17;
  VelocityShape shape = VelocityShape::gaussian;
  /// (velocity m/s, relative weight) pairs, used when shape == histogram.
  std::vector<std::pair<double, double>> histogram;

  void validate() const;
  friend bool operator==(const VelocityDistribution&, const VelocityDistribution&) = default;
};

struct VerticalProfile {
  double beam_fwhm = 625e-6;
  double laser_waist = 1.3e-3;

  void validate() const;
  friend bool operator==(const VerticalProfile&, const VerticalProfile&) = default;
};

enum class KernelShape { gaussian, tophat };

struct DetectorModel {
  double width = 6e-6;
  double step = 2e-6;
  KernelShape kernel = KernelShape::gaussian;

  void validate() const;
  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  [[nodiscard]] double mean() const;
  [[nodiscard]] double variance() const;
};

/// Deterministic midpoint nodes over +-2.5 FWHM of the Gaussian (v > 0 only),
/// or the tabulated histogram as given. Weights sum to one.
Quadrature velocity_quadrature(const VelocityDistribution& dist, std::size_t n_nodes);

/// Vertical positions across the molecular beam; nodes hold the local phase
/// scale exp(-2 y^2 / w_y^2), positions are returned separately.
struct VerticalQuadrature {
  std::vector<double> positions;
  std::vector<double> scales;
  std::vector<double> weights;
};
VerticalQuadrature vertical_phi_scales(const VerticalProfile& profile, std::size_t n_nodes);

/// Symmetric convolution taps sampled at grid_step, unit sum. Widths below
/// one grid step collapse to a single tap.
std::vector<double> detector_kernel(const DetectorModel& model, double grid_step);

/// Same-length convolution with a centred odd-length kernel, zero padding outside.
std::vector<double> convolve_same(std::span<const double> signal, std::span<const double> kernel);

/// Two columns: velocity in m/s and relative weight. '#' starts a comment.
std::vector<std::pair<double, double>> parse_velocity_histogram(std::string_view text);
std::vector<std::pair<double, double>> load_velocity_histogram(const std::filesystem::path& path);

}  // namespace molgrating
