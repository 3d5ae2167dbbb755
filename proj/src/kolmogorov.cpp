#include "survscore/kolmogorov.hpp"

#include <cmath>
#include <numbers>

#include "survscore/errors.hpp"

namespace survscore {

double kolmogorov_cdf(double a) {
  if (!(a > 0.0)) return 0.0;
  if (a < 1.0) {
    // Theta-function form; the alternating series converges slowly here.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi2 / (8.0 * a * a));
      sum += term;
      if (term < 1e-17) break;
    }
    return std::sqrt(2.0 * std::numbers::pi) / a * sum;
  }
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = std::exp(-2.0 * k * k * a * a);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return 1.0 - 2.0 * sum;
}

double kolmogorov_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("kolmogorov_quantile: alpha must lie in (0, 1)");
  const double target = 1.0 - alpha;
  double lo = 0.3;
  double hi = 3.5;
  while (kolmogorov_cdf(lo) > target) lo *= 0.5;
  while (kolmogorov_cdf(hi) < target) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace survscore
