#pragma once

namespace ordtest {

/// Standard normal CDF via the complementary error function; absolute and
/// (in the lower tail) relative accuracy follow erfc, ~1e-16.
double norm_cdf(double z);

/// Upper tail 1 - Phi(z), accurate in relative terms for large z.
double norm_sf(double z);

double norm_pdf(double z);

/// Inverse standard normal CDF: rational approximation polished by one
/// Newton step against norm_cdf. Throws std::invalid_argument outside
/// [0, 1]; the exact endpoints map to -inf / +inf.
double norm_quantile(double u);

}  // namespace ordtest
