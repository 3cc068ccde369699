#pragma once

#include <string>

namespace nvadjust {

enum class DistFamily { normal, laplace };

DistFamily parse_family(const std::string& name);
std::string family_name(DistFamily family);

/**
 * Per-unit economics of a single-period order decision.
 *
 * price (p): selling price, cost (v): purchase price, holding (c_h): cost of
 * a leftover unit, shortage (c_s): cost of an unmet unit of demand.
 */
struct CostParams {
    double price = 0.0;
    double cost = 0.0;
    double holding = 0.0;
    double shortage = 0.0;

    double overage() const { return cost + holding; }
    double underage() const { return price - cost + shortage; }

    /// Throws std::invalid_argument if any field is negative or either the
    /// overage or underage cost is non-positive.
    void validate() const;
};

/// Critical quantile c_u / (c_o + c_u); always strictly inside (0, 1).
double critical_quantile(const CostParams& costs);

/**
 * Realised single-period profit of ordering `order` against demand `demand`:
 * p*d - v*x - c_h*(x-d) when x >= d, and (p-v)*x - c_s*(d-x) otherwise.
 * Throws std::domain_error for negative order or demand.
 */
double profit(const CostParams& costs, double order, double demand);

/// A demand distribution assumed when converting a forecast into an order.
struct DemandDistribution {
    DistFamily family = DistFamily::normal;
    double location = 0.0;   // mu
    double dispersion = 0.0; // standard deviation (normal) or scale b (laplace)

    /// Match a (mean, sd) forecast: for laplace the scale is sd / sqrt(2).
    static DemandDistribution from_moments(DistFamily family, double mean, double sd);

    void validate() const;
};

/// Inverse CDF of the distribution at tau in (0, 1).
double quantile(const DemandDistribution& dist, double tau);

/// CDF of the distribution, the inverse of quantile().
double cdf(const DemandDistribution& dist, double x);

/// An order quantity plus a flag for negative values clamped to zero.
struct OrderDecision {
    double quantity = 0.0;
    bool clamped = false;
};

/**
 * Profit-maximising order under the assumed family: the tau-quantile of the
 * distribution matched to the forecast moments, tau = critical_quantile(costs).
 * Negative quantities (tiny mean with extreme tau) are clamped to zero and
 * flagged.
 */
OrderDecision textbook_order(double mu_hat, double sigma_hat, const CostParams& costs,
                             DistFamily family);

} // namespace nvadjust
