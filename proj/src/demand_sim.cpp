#include "nvadjust/demand_sim.hpp"

#include "nvadjust/rng.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nvadjust {

bool is_stationary(const std::vector<double>& coeffs) {
    // Inverse Levinson-Durbin: peel off partial autocorrelations one order at
    // a time; the polynomial has all roots outside the unit circle iff every
    // extracted coefficient lies strictly inside (-1, 1).
    std::vector<double> work = coeffs;
    for (std::size_t k = work.size(); k > 0; --k) {
        const double r = work[k - 1];
        if (!(std::fabs(r) < 1.0)) {
            return false;
        }
        std::vector<double> prev(k - 1);
        const double denom = 1.0 - r * r;
        for (std::size_t j = 0; j + 1 < k; ++j) {
            prev[j] = (work[j] + r * work[k - 2 - j]) / denom;
        }
        work = std::move(prev);
    }
    return true;
}

void ArmaSpec::validate() const {
    if (!(innovation_sd > 0.0)) {
        throw std::invalid_argument("ArmaSpec: innovation sd must be positive");
    }
    for (double c : ar) {
        if (!std::isfinite(c)) throw std::invalid_argument("ArmaSpec: non-finite AR coefficient");
    }
    for (double c : ma) {
        if (!std::isfinite(c)) throw std::invalid_argument("ArmaSpec: non-finite MA coefficient");
    }
    if (!is_stationary(ar)) {
        throw std::invalid_argument("ArmaSpec: AR polynomial is not stationary");
    }
    std::vector<double> neg_ma(ma.size());
    for (std::size_t j = 0; j < ma.size(); ++j) neg_ma[j] = -ma[j];
    if (!is_stationary(neg_ma)) {
        throw std::invalid_argument("ArmaSpec: MA polynomial is not invertible");
    }
}

DemandSeries simulate(const ArmaSpec& spec, std::size_t length, std::uint64_t seed) {
    spec.validate();
    if (length == 0) {
        throw std::invalid_argument("simulate: length must be at least 1");
    }

    const std::size_t p = spec.ar.size();
    const std::size_t q = spec.ma.size();
    const std::size_t total = kBurnIn + length;
    const double laplace_scale = spec.innovation_sd / std::sqrt(2.0);

    Rng rng(seed);
    std::vector<double> dev(total, 0.0); // d_t - mean
    std::vector<double> eps(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        const double e = spec.innovation_family == DistFamily::laplace
                             ? rng.laplace(0.0, laplace_scale)
                             : rng.normal(0.0, spec.innovation_sd);
        eps[t] = e;
        double z = e;
        for (std::size_t i = 0; i < p && i < t; ++i) {
            z += spec.ar[i] * dev[t - 1 - i];
        }
        for (std::size_t j = 0; j < q && j < t; ++j) {
            z += spec.ma[j] * eps[t - 1 - j];
        }
        dev[t] = z;
    }

    DemandSeries series;
    series.seed = seed;
    series.values.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
        series.values[t] = spec.mean + dev[kBurnIn + t];
    }
    return series;
}

std::vector<DemandSeries> simulate_batch(const ArmaSpec& spec, std::size_t count,
                                         std::size_t length, std::uint64_t master_seed) {
    if (count == 0) {
        throw std::invalid_argument("simulate_batch: count must be at least 1");
    }
    std::vector<DemandSeries> batch;
    batch.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        DemandSeries s = simulate(spec, length, child_seed(master_seed, i));
        s.series_id = static_cast<int>(i);
        batch.push_back(std::move(s));
    }
    return batch;
}

void write_demand_csv(std::ostream& out, const std::vector<DemandSeries>& batch) {
    out << "series_id,t,demand\n";
    char buf[64];
    for (const auto& series : batch) {
        for (std::size_t t = 0; t < series.values.size(); ++t) {
            std::snprintf(buf, sizeof(buf), "%d,%zu,%.12g", series.series_id, t + 1,
                          series.values[t]);
            out << buf << '\n';
        }
    }
}

} // namespace nvadjust
