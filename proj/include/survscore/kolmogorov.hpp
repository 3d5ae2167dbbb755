#pragma once

namespace survscore {

/// P(sup_{t in [0,1]} |B(t)| <= a) for a Brownian bridge B.
double kolmogorov_cdf(double a);

/// a(alpha): the point with kolmogorov_cdf(a) = 1 - alpha. Throws
/// DomainError unless 0 < alpha < 1.
double kolmogorov_quantile(double alpha);

}  // namespace survscore
