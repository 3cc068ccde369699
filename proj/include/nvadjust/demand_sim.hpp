#pragma once

#include "nvadjust/newsvendor.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nvadjust {

/**
 * Stationary ARMA(p,q) demand process around a constant mean:
 *   (d_t - mean) = sum_i ar[i] (d_{t-i} - mean) + e_t + sum_j ma[j] e_{t-j}
 * with i.i.d. innovations of the given family and standard deviation.
 */
struct ArmaSpec {
    double mean = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    DistFamily innovation_family = DistFamily::normal;
    double innovation_sd = 1.0;

    /// Throws std::invalid_argument unless the AR polynomial is stationary,
    /// the MA polynomial invertible and the innovation sd positive.
    void validate() const;
};

/// One simulated demand path together with the seed that produced it.
struct DemandSeries {
    std::vector<double> values;
    int series_id = 0;
    std::uint64_t seed = 0;
};

/// Transient observations generated and discarded before the retained sample.
inline constexpr std::size_t kBurnIn = 200;

/**
 * Simulate `length` demand realisations. The recursion starts from zero
 * deviations/innovations and runs kBurnIn extra steps that are discarded.
 * Identical (spec, length, seed) inputs give bit-identical output.
 */
DemandSeries simulate(const ArmaSpec& spec, std::size_t length, std::uint64_t seed);

/**
 * Simulate `count` independent series. Series i is seeded with
 * child_seed(master_seed, i), so the batch is reproducible and independent
 * of evaluation order.
 */
std::vector<DemandSeries> simulate_batch(const ArmaSpec& spec, std::size_t count,
                                         std::size_t length, std::uint64_t master_seed);

/// Audit dump, columns: series_id,t,demand (t starts at 1).
void write_demand_csv(std::ostream& out, const std::vector<DemandSeries>& batch);

/// True whether all AR partial autocorrelations implied by `coeffs` lie in
/// (-1, 1), i.e. the polynomial 1 - c_1 z - ... - c_p z^p has all roots
/// outside the unit circle.
bool is_stationary(const std::vector<double>& coeffs);

} // namespace nvadjust
