#pragma once

namespace nvadjust {

/// Standard normal CDF, accurate to ~1e-15 (erfc based).
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

/**
 * Standard normal quantile (inverse CDF).
 *
 * Rational approximation refined by one Halley step against the erfc-based
 * CDF; absolute error below 1e-12 for p in (1e-300, 1 - 1e-16).
 * Throws std::domain_error for p outside (0, 1).
 */
double normal_quantile(double p);

/// Laplace CDF with location mu and scale b > 0.
double laplace_cdf(double x, double mu, double b);

/// Laplace quantile: mu + b*ln(2p) for p <= 1/2, mu - b*ln(2(1-p)) otherwise.
double laplace_quantile(double p, double mu, double b);

} // namespace nvadjust
