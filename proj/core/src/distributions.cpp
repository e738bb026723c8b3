#include "molgrating/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace molgrating {

namespace {

void normalize(std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("quadrature weights sum to zero");
  for (double& w : weights) w /= total;
}

/// Midpoint nodes on [lo, hi] weighted by a centred Gaussian.
Quadrature gaussian_midpoints(double centre, double sigma, double lo, double hi, std::size_t n) {
  Quadrature q;
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * h;
    const double u = (x - centre) / sigma;
    q.nodes.push_back(x);
    q.weights.push_back(std::exp(-0.5 * u * u));
  }
  normalize(q.weights);
  return q;
}

}  // namespace

void VelocityDistribution::validate() const {
  if (shape == VelocityShape::histogram) {
    if (histogram.empty()) throw std::invalid_argument("velocity histogram is empty");
    double total = 0.0;
    for (const auto& [v, w] : histogram) {
      if (!(v > 0.0)) throw std::invalid_argument("histogram velocities must be > 0");
      if (!(w >= 0.0)) throw std::invalid_argument("histogram weights must be >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("histogram weights sum to zero");
    return;
  }
  if (!(v_peak > 0.0)) throw std::invalid_argument("velocity peak must be > 0");
  if (!(fwhm_ratio > 0.0 && fwhm_ratio < 1.0)) {
    throw std::invalid_argument("velocity fwhm_ratio must lie in (0, 1)");
  }
}

void VerticalProfile::validate() const {
  if (!(beam_fwhm > 0.0)) throw std::invalid_argument("vertical beam_fwhm must be > 0");
  if (!(laser_waist > 0.0)) throw std::invalid_argument("vertical laser_waist must be > 0");
}

void DetectorModel::validate() const {
  if (!(width >= 0.0)) throw std::invalid_argument("detector width must be >= 0");
  if (!(step > 0.0)) throw std::invalid_argument("detector step must be > 0");
}

double Quadrature::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) m += weights[i] * nodes[i];
  return m;
}

double Quadrature::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) v += weights[i] * (nodes[i] - m) * (nodes[i] - m);
  return v;
}

Quadrature velocity_quadrature(const VelocityDistribution& dist, std::size_t n_nodes) {
  dist.validate();
  if (dist.shape == VelocityShape::histogram) {
    Quadrature q;
    for (const auto& [v, w] : dist.histogram) {
      q.nodes.push_back(v);
      q.weights.push_back(w);
    }
    normalize(q.weights);
    return q;
  }
  if (n_nodes < 1) throw std::invalid_argument("velocity quadrature needs at least one node");
  if (n_nodes == 1) return {{dist.v_peak}, {1.0}};
  const double fwhm = dist.fwhm_ratio * dist.v_peak;
  const double lo = std::max(0.0, dist.v_peak - kQuadratureHalfSpanFwhm * fwhm);
  const double hi = dist.v_peak + kQuadratureHalfSpanFwhm * fwhm;
  return gaussian_midpoints(dist.v_peak, fwhm / kFwhmPerSigma, lo, hi, n_nodes);
}

VerticalQuadrature vertical_phi_scales(const VerticalProfile& profile, std::size_t n_nodes) {
  profile.validate();
  if (n_nodes < 1) throw std::invalid_argument("vertical quadrature needs at least one node");
  VerticalQuadrature out;
  if (n_nodes == 1) {
    out = {{0.0}, {1.0}, {1.0}};
    return out;
  }
  const double half = kQuadratureHalfSpanFwhm * profile.beam_fwhm;
  Quadrature q = gaussian_midpoints(0.0, profile.beam_fwhm / kFwhmPerSigma, -half, half, n_nodes);
  out.positions = q.nodes;
  out.weights = q.weights;
  for (double y : q.nodes) {
    const double r = y / profile.laser_waist;
    out.scales.push_back(std::exp(-2.0 * r * r));
  }
  return out;
}

std::vector<double> detector_kernel(const DetectorModel& model, double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("kernel grid step must be > 0");
  if (model.width < grid_step) return {1.0};

  std::vector<double> taps;
  if (model.kernel == KernelShape::gaussian) {
    const double sigma = model.width / kFwhmPerSigma;
    const auto half = static_cast<long>(std::ceil(5.0 * sigma / grid_step));
    for (long i = -half; i <= half; ++i) {
      const double u = static_cast<double>(i) * grid_step / sigma;
      taps.push_back(std::exp(-0.5 * u * u));
    }
  } else {
    // Overlap of each sample cell with [-width/2, width/2].
    const double half_width = 0.5 * model.width;
    const auto half = static_cast<long>(std::ceil(half_width / grid_step + 0.5));
    for (long i = -half; i <= half; ++i) {
      const double centre = static_cast<double>(i) * grid_step;
      const double lo = std::max(centre - 0.5 * grid_step, -half_width);
      const double hi = std::min(centre + 0.5 * grid_step, half_width);
      taps.push_back(std::max(0.0, hi - lo));
    }
  }
  normalize(taps);
  return taps;
}

std::vector<double> convolve_same(std::span<const double> signal, std::span<const double> kernel) {
  if (kernel.size() % 2 == 0) throw std::invalid_argument("kernel length must be odd");
  const auto n = static_cast<long>(signal.size());
  const auto half = static_cast<long>(kernel.size() / 2);
  std::vector<double> out(signal.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long j = -half; j <= half; ++j) {
      const long src = i - j;
      if (src < 0 || src >= n) continue;
      acc += kernel[static_cast<std::size_t>(j + half)] * signal[static_cast<std::size_t>(src)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::vector<std::pair<double, double>> parse_velocity_histogram(std::string_view text) {
  std::vector<std::pair<double, double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(line);
    double v = 0.0;
    double w = 0.0;
    if (!(fields >> v)) continue;
    std::string rest;
    if (!(fields >> w) || (fields >> rest)) {
      throw std::invalid_argument("velocity histogram line " + std::to_string(line_no) +
                                  ": expected two numeric columns");
    }
    rows.emplace_back(v, w);
  }
  if (rows.empty()) throw std::invalid_argument("velocity histogram has no rows");
  return rows;
}

std::vector<std::pair<double, double>> load_velocity_histogram(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open velocity histogram: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_velocity_histogram(buffer.str());
}

}  // namespace molgrating
