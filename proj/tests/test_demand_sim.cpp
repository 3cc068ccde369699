#include "nvadjust/demand_sim.hpp"

#include "nvadjust/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace nvadjust;

namespace {

ArmaSpec paper_dgp() {
    ArmaSpec spec;
    spec.mean = 10000.0;
    spec.ar = {0.5};
    spec.ma = {0.3};
    spec.innovation_sd = 100.0;
    return spec;
}

} // namespace

TEST_CASE("stationarity and invertibility are enforced at construction") {
    ArmaSpec spec = paper_dgp();
    spec.validate();

    spec.ar = {1.01};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.ar = {0.5, 0.6}; // phi1 + phi2 > 1
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.ar = {0.5, 0.3};
    CHECK_NOTHROW(spec.validate());

    spec.ma = {-1.2};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.ma = {0.4, 0.2};
    CHECK_NOTHROW(spec.validate());

    spec.innovation_sd = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("white-noise sample mean obeys the CLT bound across seeds") {
    ArmaSpec spec = paper_dgp();
    spec.ar = {};
    spec.ma = {};
    // mean 10000, sd 100, n = 10000: sample mean within 10000 +- 3 for >= 19/20 seeds
    int pass = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DemandSeries s = simulate(spec, 10000, seed);
        const double m = sample_mean(s.values);
        if (std::fabs(m - 10000.0) <= 3.0) ++pass;
    }
    CHECK(pass >= 19);
}

TEST_CASE("degenerate noise collapses to the mean") {
    ArmaSpec spec = paper_dgp();
    spec.ar = {};
    spec.ma = {};
    spec.innovation_sd = 1e-9;
    const DemandSeries s = simulate(spec, 500, 42);
    for (double v : s.values) {
        CHECK(std::fabs(v - 10000.0) < 1e-6);
    }
}

TEST_CASE("lag-1 autocorrelation matches the closed-form value") {
    // rho_1 = (1 + phi*theta)(phi + theta) / (1 + 2*phi*theta + theta^2)
    const double phi = 0.5;
    const double theta = 0.3;
    const double rho1 =
        (1.0 + phi * theta) * (phi + theta) / (1.0 + 2.0 * phi * theta + theta * theta);
    CHECK(rho1 == doctest::Approx(0.6619).epsilon(1e-3));

    int pass = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const DemandSeries s = simulate(paper_dgp(), 5000, seed);
        if (std::fabs(sample_autocorr(s.values, 1) - rho1) <= 0.05) ++pass;
    }
    CHECK(pass >= 18);
}

TEST_CASE("white-noise sample sd is consistent") {
    ArmaSpec spec = paper_dgp();
    spec.ar = {};
    spec.ma = {};
    const DemandSeries s = simulate(spec, 100000, 7);
    CHECK(sample_sd(s.values) == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("laplace innovations show laplace excess kurtosis") {
    ArmaSpec spec = paper_dgp();
    spec.ar = {};
    spec.ma = {};
    spec.innovation_family = DistFamily::laplace;
    const DemandSeries s = simulate(spec, 100000, 3);

    const double m = sample_mean(s.values);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : s.values) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(s.values.size());
    m4 /= static_cast<double>(s.values.size());
    const double excess_kurtosis = m4 / (m2 * m2) - 3.0;
    CHECK(excess_kurtosis == doctest::Approx(3.0).epsilon(0.1));
    CHECK(sample_sd(s.values) == doctest::Approx(100.0).epsilon(0.05));
}

TEST_CASE("simulation is deterministic in (spec, n, seed)") {
    const DemandSeries a = simulate(paper_dgp(), 200, 12345);
    const DemandSeries b = simulate(paper_dgp(), 200, 12345);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(a.values[i] == b.values[i]); // bit-identical
    }
    const DemandSeries c = simulate(paper_dgp(), 200, 12346);
    CHECK(a.values != c.values);
}

TEST_CASE("batches use independent reproducible child streams") {
    const auto batch1 = simulate_batch(paper_dgp(), 2, 50, 99);
    const auto batch2 = simulate_batch(paper_dgp(), 2, 50, 99);
    CHECK(batch1[0].values == batch2[0].values);
    CHECK(batch1[1].values == batch2[1].values);
    CHECK(batch1[0].values != batch1[1].values);
    CHECK(batch1[0].series_id == 0);
    CHECK(batch1[1].series_id == 1);

    // Prefix stability: the first series of a bigger batch is unchanged.
    const auto batch3 = simulate_batch(paper_dgp(), 5, 50, 99);
    CHECK(batch3[0].values == batch1[0].values);
    CHECK(batch3[1].values == batch1[1].values);
}

TEST_CASE("paper-scale batch is well formed") {
    const auto batch = simulate_batch(paper_dgp(), 500, 200, 1);
    CHECK(batch.size() == 500);
    for (const auto& s : batch) {
        CHECK(s.values.size() == 200);
        for (double v : s.values) {
            CHECK(v > 0.0); // mean 10000, sd ~136: negative demand is a ~70-sigma event
        }
    }
}

TEST_CASE("demand csv dump is stable") {
    ArmaSpec spec = paper_dgp();
    spec.innovation_sd = 1e-9;
    spec.ar = {};
    spec.ma = {};
    const auto batch = simulate_batch(spec, 2, 2, 5);
    std::ostringstream out;
    write_demand_csv(out, batch);
    CHECK(out.str() == "series_id,t,demand\n"
                       "0,1,10000\n"
                       "0,2,10000\n"
                       "1,1,10000\n"
                       "1,2,10000\n");
}
