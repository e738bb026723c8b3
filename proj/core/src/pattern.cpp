#include "molgrating/pattern.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace molgrating {

namespace {

double max_value(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

void require_same_grid(const DiffractionPattern& a, const DiffractionPattern& b) {
  if (a.positions.size() != b.positions.size()) {
    throw std::invalid_argument("patterns have different lengths");
  }
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    if (std::abs(a.positions[i] - b.positions[i]) > 1e-12) {
      throw std::invalid_argument("patterns are sampled on different grids");
    }
  }
}

}  // namespace

void normalize_pattern(DiffractionPattern& pattern, Normalization mode) {
  const double denom = mode == Normalization::peak
                           ? max_value(pattern.intensity)
                           : std::accumulate(pattern.intensity.begin(), pattern.intensity.end(), 0.0);
  pattern.metadata.normalization = mode;
  if (!(denom > 0.0)) return;
  for (double& v : pattern.intensity) v /= denom;
}

double pattern_nrmse(const DiffractionPattern& a, const DiffractionPattern& b) {
  require_same_grid(a, b);
  const double ma = max_value(a.intensity);
  const double mb = max_value(b.intensity);
  if (!(ma > 0.0) || !(mb > 0.0)) throw std::invalid_argument("pattern has no signal");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.intensity.size(); ++i) {
    const double d = a.intensity[i] / ma - b.intensity[i] / mb;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(a.intensity.size()));
}

double PatternMetrics::efficiency(int m) const {
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] == m) return efficiencies[i];
  }
  return 0.0;
}

PatternMetrics pattern_metrics(const DiffractionPattern& pattern, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("window spacing must be > 0");
  if (spacing < pattern.metadata.detector_width) {
    throw std::invalid_argument("window spacing is below the detector width; windows overlap");
  }
  if (pattern.positions.empty()) throw std::invalid_argument("pattern is empty");

  PatternMetrics metrics;
  metrics.spacing = spacing;
  const double total = std::accumulate(pattern.intensity.begin(), pattern.intensity.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("pattern has no signal");

  const double lo = pattern.positions.front();
  const double hi = pattern.positions.back();
  const int m_hi = static_cast<int>(std::floor((hi - 0.5 * spacing) / spacing + 1e-9));
  const int m_lo = static_cast<int>(std::ceil((lo + 0.5 * spacing) / spacing - 1e-9));
  for (int m = m_lo; m <= m_hi; ++m) {
    const double centre = m * spacing;
    double sum = 0.0;
    for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
      const double d = std::abs(pattern.positions[i] - centre);
      const double edge = 0.5 * spacing;
      if (d < edge - 1e-12) {
        sum += pattern.intensity[i];
      } else if (d <= edge + 1e-12) {
        sum += 0.5 * pattern.intensity[i];  // sample on the shared boundary
      }
    }
    metrics.orders.push_back(m);
    metrics.efficiencies.push_back(sum / total);
  }

  double vmax = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
    if (std::abs(pattern.positions[i]) > spacing) continue;
    vmax = std::max(vmax, pattern.intensity[i]);
    vmin = std::min(vmin, pattern.intensity[i]);
  }
  metrics.visibility = (vmax + vmin) > 0.0 ? (vmax - vmin) / (vmax + vmin) : 0.0;
  return metrics;
}

PatternComparison compare_patterns(const DiffractionPattern& a, const DiffractionPattern& b) {
  if (a.intensity.empty() || b.intensity.empty()) {
    throw std::invalid_argument("cannot compare empty patterns");
  }
  const double step_a = a.step();
  const double step_b = b.step();
  if (a.positions.size() > 1 && b.positions.size() > 1 &&
      std::abs(step_a - step_b) > 1e-9 * std::max(std::abs(step_a), std::abs(step_b))) {
    throw std::invalid_argument("patterns use different grid steps");
  }
  const double step = a.positions.size() > 1 ? step_a : step_b;
  const double ma = max_value(a.intensity);
  const double mb = max_value(b.intensity);
  if (!(ma > 0.0) || !(mb > 0.0)) throw std::invalid_argument("pattern has no signal");

  // Offset between the grids' first samples in whole steps.
  const long origin = step > 0.0 ? std::lround((b.positions.front() - a.positions.front()) / step) : 0;
  const auto na = static_cast<long>(a.intensity.size());
  const auto nb = static_cast<long>(b.intensity.size());

  // b index j sits at a index j + origin; a shift s compares a[i] with b[i - origin + s].
  auto overlap = [&](long s, auto&& visit) {
    for (long i = 0; i < na; ++i) {
      const long j = i - origin + s;
      if (j < 0 || j >= nb) continue;
      visit(a.intensity[static_cast<std::size_t>(i)] / ma,
            b.intensity[static_cast<std::size_t>(j)] / mb);
    }
  };

  const long reach = std::max(na, nb) / 2;
  long best_shift = 0;
  double best_corr = -std::numeric_limits<double>::infinity();
  for (long s = -reach; s <= reach; ++s) {
    double corr = 0.0;
    overlap(s, [&](double x, double y) { corr += x * y; });
    // Strict comparison with ties resolved toward the smallest |s|.
    if (corr > best_corr * (1.0 + 1e-12) ||
        (std::abs(corr - best_corr) <= 1e-12 * std::abs(best_corr) &&
         std::abs(s) < std::abs(best_shift))) {
      best_corr = corr;
      best_shift = s;
    }
  }

  double sum = 0.0;
  std::size_t count = 0;
  overlap(best_shift, [&](double x, double y) {
    sum += (x - y) * (x - y);
    ++count;
  });
  PatternComparison result;
  result.shift = static_cast<double>(best_shift) * step;
  result.nrmse = count > 0 ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
  return result;
}

double locate_peak(const DiffractionPattern& pattern, double expected, double half_window) {
  const auto& x = pattern.positions;
  const auto& y = pattern.intensity;
  std::size_t best = x.size();
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (std::abs(x[i] - expected) > half_window) continue;
    if (y[i] >= y[i - 1] && y[i] >= y[i + 1]) {
      if (best == x.size() || std::abs(x[i] - expected) < std::abs(x[best] - expected)) best = i;
    }
  }
  if (best == x.size()) throw std::runtime_error("no local maximum near the expected position");
  const double denom = y[best - 1] - 2.0 * y[best] + y[best + 1];
  if (denom == 0.0) return x[best];
  const double offset = 0.5 * (y[best - 1] - y[best + 1]) / denom;
  return x[best] + offset * (x[best + 1] - x[best]);
}

PeakFit fit_peak_weights(const DiffractionPattern& pattern,
                         std::span<const DiffractionPattern> basis) {
  if (basis.empty()) throw std::invalid_argument("need at least one basis pattern");
  const auto rows = static_cast<Eigen::Index>(pattern.intensity.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd design(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    require_same_grid(pattern, basis[static_cast<std::size_t>(c)]);
    for (Eigen::Index r = 0; r < rows; ++r) {
      design(r, c) = basis[static_cast<std::size_t>(c)].intensity[static_cast<std::size_t>(r)];
    }
  }
  const Eigen::VectorXd target =
      Eigen::Map<const Eigen::VectorXd>(pattern.intensity.data(), rows);
  const Eigen::VectorXd w = design.colPivHouseholderQr().solve(target);
  PeakFit fit;
  fit.weights.assign(w.data(), w.data() + w.size());
  fit.residual_rms = std::sqrt((design * w - target).squaredNorm() / static_cast<double>(rows));
  return fit;
}

}  // namespace molgrating
