#pragma once

namespace molgrating {

inline constexpr double kBesselMaxArgument = 50.0;

/// Bessel function of the first kind J_m(x) for m >= 0 and |x| <= 50.
/// Miller downward recurrence normalised with J_0 + 2 sum J_2k = 1.
/// Throws std::domain_error outside that range.
double bessel_j(int m, double x);

/// Ascending power series, accurate for small |x|. Used as a cross-check.
double bessel_j_series(int m, double x);

}  // namespace molgrating
