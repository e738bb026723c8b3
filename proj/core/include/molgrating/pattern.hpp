#pragma once

#include <span>
#include <vector>

#include "molgrating/beamline.hpp"

namespace molgrating {

void normalize_pattern(DiffractionPattern& pattern, Normalization mode);

/// RMS difference of two peak-normalised patterns on the same grid.
double pattern_nrmse(const DiffractionPattern& a, const DiffractionPattern& b);

struct PatternMetrics {
  double spacing = 0.0;
  std::vector<int> orders;
  std::vector<double> efficiencies;
  double visibility = 0.0;

  /// Efficiency of order m, 0 when the window fell outside the detector span.
  [[nodiscard]] double efficiency(int m) const;
};

/// Window integrals of width `spacing` centred on m * spacing, divided by the total,
/// plus the visibility (max - min) / (max + min) inside |x| <= spacing.
/// Throws std::invalid_argument for spacing <= 0 or spacing below the detector width.
PatternMetrics pattern_metrics(const DiffractionPattern& pattern, double spacing);

struct PatternComparison {
  double shift = 0.0;  ///< b(x) ~ a(x - shift), m
  double nrmse = 0.0;
};

/// Integer-step shift maximising the cross-correlation, then peak-normalised RMS
/// error over the overlap. Throws for empty input or mismatched steps.
PatternComparison compare_patterns(const DiffractionPattern& a, const DiffractionPattern& b);

/// Local maximum nearest to `expected` within +-half_window, refined by a parabola.
double locate_peak(const DiffractionPattern& pattern, double expected, double half_window);

struct PeakFit {
  std::vector<double> weights;
  double residual_rms = 0.0;
};

/// Least-squares weights w minimising |pattern - sum_i w_i basis_i|. All patterns must
/// share the same grid; each basis is used as given (callers normalise consistently).
PeakFit fit_peak_weights(const DiffractionPattern& pattern,
                         std::span<const DiffractionPattern> basis);

}  // namespace molgrating
