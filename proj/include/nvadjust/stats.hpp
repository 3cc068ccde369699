#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace nvadjust {

inline double sample_mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

/// Sample standard deviation with n-1 denominator; 0 for fewer than 2 points.
inline double sample_sd(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = sample_mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Lag-k sample autocorrelation (biased, denominator n).
inline double sample_autocorr(std::span<const double> xs, std::size_t lag) {
    if (xs.size() <= lag) return 0.0;
    const double m = sample_mean(xs);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        den += (xs[t] - m) * (xs[t] - m);
        if (t + lag < xs.size()) {
            num += (xs[t] - m) * (xs[t + lag] - m);
        }
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace nvadjust
