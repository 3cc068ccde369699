#include "nvadjust/newsvendor.hpp"

#include "nvadjust/distributions.hpp"
#include "nvadjust/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace nvadjust {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

DistFamily parse_family(const std::string& name) {
    if (name == "normal") return DistFamily::normal;
    if (name == "laplace") return DistFamily::laplace;
    throw ConfigError("unknown distribution family: '" + name + "'");
}

std::string family_name(DistFamily family) {
    return family == DistFamily::normal ? "normal" : "laplace";
}

void CostParams::validate() const {
    if (!(price >= 0.0) || !(cost >= 0.0) || !(holding >= 0.0) || !(shortage >= 0.0)) {
        throw std::invalid_argument("CostParams: all cost fields must be non-negative");
    }
    if (!(underage() > 0.0)) {
        throw std::invalid_argument("CostParams: underage cost p - v + c_s must be positive");
    }
    if (!(overage() > 0.0)) {
        throw std::invalid_argument("CostParams: overage cost v + c_h must be positive");
    }
}

double critical_quantile(const CostParams& costs) {
    costs.validate();
    return costs.underage() / (costs.overage() + costs.underage());
}

double profit(const CostParams& costs, double order, double demand) {
    if (!(order >= 0.0)) {
        throw std::domain_error("profit: order quantity must be non-negative");
    }
    if (!(demand >= 0.0)) {
        throw std::domain_error("profit: demand must be non-negative");
    }
    if (order >= demand) {
        return costs.price * demand - costs.cost * order - costs.holding * (order - demand);
    }
    return (costs.price - costs.cost) * order - costs.shortage * (demand - order);
}

DemandDistribution DemandDistribution::from_moments(DistFamily family, double mean, double sd) {
    DemandDistribution dist;
    dist.family = family;
    dist.location = mean;
    dist.dispersion = family == DistFamily::laplace ? sd / kSqrt2 : sd;
    dist.validate();
    return dist;
}

void DemandDistribution::validate() const {
    if (!(dispersion > 0.0)) {
        throw std::invalid_argument("DemandDistribution: dispersion must be positive");
    }
}

double quantile(const DemandDistribution& dist, double tau) {
    dist.validate();
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::domain_error("quantile: tau must lie in (0, 1)");
    }
    if (dist.family == DistFamily::laplace) {
        return laplace_quantile(tau, dist.location, dist.dispersion);
    }
    return dist.location + dist.dispersion * normal_quantile(tau);
}

double cdf(const DemandDistribution& dist, double x) {
    dist.validate();
    if (dist.family == DistFamily::laplace) {
        return laplace_cdf(x, dist.location, dist.dispersion);
    }
    return normal_cdf((x - dist.location) / dist.dispersion);
}

OrderDecision textbook_order(double mu_hat, double sigma_hat, const CostParams& costs,
                             DistFamily family) {
    if (!(sigma_hat > 0.0)) {
        throw std::invalid_argument("textbook_order: sigma estimate must be positive");
    }
    const double tau = critical_quantile(costs);
    const auto dist = DemandDistribution::from_moments(family, mu_hat, sigma_hat);
    const double q = quantile(dist, tau);
    if (q < 0.0) {
        return {0.0, true};
    }
    return {q, false};
}

} // namespace nvadjust
