#include "molgrating/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace molgrating {

double bessel_j(int m, double x) {
  if (m < 0) throw std::domain_error("bessel_j: order must be >= 0");
  if (!(std::abs(x) <= kBesselMaxArgument)) {
    throw std::domain_error("bessel_j: |x| must be <= 50");
  }
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;

  const double ax = std::abs(x);
  const int top = std::max(m, static_cast<int>(ax));
  int start = top + 20 + static_cast<int>(std::sqrt(60.0 * (top + 1)));
  start += start % 2;

  constexpr double kRescale = 1e250;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k, arbitrary seed
  double sum = 0.0;
  double wanted = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    const double prev = k * two_over_x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == m) wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) sum += 2.0 * cur;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      sum /= kRescale;
      wanted /= kRescale;
    }
  }
  sum += cur;  // J_0
  return wanted / sum;
}

double bessel_j_series(int m, double x) {
  if (m < 0) throw std::domain_error("bessel_j_series: order must be >= 0");
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= m; ++i) term *= half / i;
  double sum = term;
  const double q = -half * half;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace molgrating
