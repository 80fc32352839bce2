#pragma once

namespace mvboot {

double normal_cdf(double x);

// Inverse of the standard normal CDF for p in (0, 1). Acklam's rational
// approximation followed by one Halley step against erfc; absolute error is
// below 1e-12 over (1e-300, 1 - 1e-16).
double normal_quantile(double p);

}  // namespace mvboot
