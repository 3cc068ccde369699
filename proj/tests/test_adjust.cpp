#include "nvadjust/adjust.hpp"

#include "nvadjust/demand_sim.hpp"
#include "nvadjust/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace nvadjust;

namespace {

DemandSeries arma11_series(std::size_t n, std::uint64_t seed) {
    ArmaSpec spec;
    spec.mean = 10000.0;
    spec.ar = {0.5};
    spec.ma = {0.3};
    spec.innovation_sd = 100.0;
    return simulate(spec, n, seed);
}

DemandSeries constant_series(double value, std::size_t n) {
    DemandSeries s;
    s.values.assign(n, value);
    return s;
}

} // namespace

TEST_CASE("demand chasing moves towards the previous demand") {
    CHECK(dc_adjust(100.0, 90.0, 1.0) == doctest::Approx(90.0));
    CHECK(dc_adjust(100.0, 90.0, 0.0) == doctest::Approx(100.0));
    CHECK(dc_adjust(100.0, 90.0, 0.5) == doctest::Approx(95.0));
}

TEST_CASE("pull-to-centre blends order and mean") {
    CHECK(ptc_adjust(105.0, 100.0, 0.0) == doctest::Approx(105.0));
    CHECK(ptc_adjust(105.0, 100.0, 1.0) == doctest::Approx(100.0));
    CHECK(ptc_adjust(105.0, 100.0, 0.2) == doctest::Approx(104.0));
}

TEST_CASE("unified adjustment hand cases") {
    CHECK(unified_adjust(105.0, 100.0, 123.0, 456.0, {0.0, 0.0}).quantity ==
          doctest::Approx(105.0));
    CHECK(unified_adjust(105.0, 100.0, 102.0, 110.0, {0.1, 0.2}).quantity ==
          doctest::Approx(104.8));
    CHECK(unified_adjust(105.0, 100.0, 110.0, 110.0, {0.7, 0.0}).quantity ==
          doctest::Approx(105.0)); // DC term vanishes when x_prev = d_prev
}

TEST_CASE("unified adjustment equals the two-stage composition exactly") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> qty(0.0, 200.0);
    std::uniform_real_distribution<double> weight(0.0, 0.5);
    for (int i = 0; i < 500; ++i) {
        const double x_star = qty(gen);
        const double mu = qty(gen);
        const double x_prev = qty(gen);
        const double d_prev = qty(gen);
        const AdjustmentParams params{weight(gen), weight(gen)};

        const double staged =
            ptc_adjust(x_star, mu, params.gamma) + params.beta * (d_prev - x_prev);
        const OrderDecision unified = unified_adjust(x_star, mu, x_prev, d_prev, params);
        if (staged >= 0.0) {
            CHECK(unified.quantity == staged); // bitwise
            CHECK_FALSE(unified.clamped);
        } else {
            CHECK(unified.quantity == 0.0);
            CHECK(unified.clamped);
        }
    }
}

TEST_CASE("unified adjustment is affine before clamping") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> qty(50.0, 150.0);
    const AdjustmentParams params{0.3, 0.2};
    auto f = [&](double a, double b, double c, double d) {
        return unified_adjust(a, b, c, d, params).quantity;
    };
    for (int i = 0; i < 200; ++i) {
        const double a1 = qty(gen), b1 = qty(gen), c1 = qty(gen), d1 = qty(gen);
        const double a2 = qty(gen), b2 = qty(gen), c2 = qty(gen), d2 = qty(gen);
        const double lambda = 0.37;
        const double lhs = f(lambda * a1 + (1 - lambda) * a2, lambda * b1 + (1 - lambda) * b2,
                             lambda * c1 + (1 - lambda) * c2, lambda * d1 + (1 - lambda) * d2);
        const double rhs = lambda * f(a1, b1, c1, d1) + (1 - lambda) * f(a2, b2, c2, d2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("negative adjusted orders clamp to zero with a flag") {
    const OrderDecision d = unified_adjust(1.0, 0.0, 1000.0, 0.0, {0.5, 0.5});
    CHECK(d.quantity == 0.0);
    CHECK(d.clamped);
}

TEST_CASE("zero parameters reproduce the textbook trajectory") {
    const DemandSeries s = arma11_series(60, 8);
    const CostParams costs = costs_from_tau(0.7);
    const OrderTrajectory traj = simulate_orders(
        s, ForecastModelSpec::arma_spec(1, 1), costs, {0.0, 0.0}, DistFamily::normal, 20);
    CHECK(traj.records.size() == 40);
    for (const auto& rec : traj.records) {
        CHECK(rec.x == rec.x_star);
        CHECK(rec.x_prime == rec.x_star);
    }
}

TEST_CASE("constant series with mean forecaster is a fixed point at tau 0.5") {
    const DemandSeries s = constant_series(500.0, 40);
    const CostParams symmetric{2.0, 1.0, 1.0, 1.0};
    const OrderTrajectory traj =
        simulate_orders(s, ForecastModelSpec::simple(ForecastKind::mean), symmetric,
                        {0.4, 0.3}, DistFamily::normal, 10);
    for (const auto& rec : traj.records) {
        CHECK(rec.x == doctest::Approx(500.0).epsilon(1e-9));
    }
}

TEST_CASE("trajectory equals an independent scripted replay") {
    const DemandSeries s = arma11_series(50, 99);
    const CostParams costs = costs_from_tau(0.7);
    const AdjustmentParams params{0.2, 0.1};
    const ForecastModelSpec forecaster = ForecastModelSpec::arma_spec(1, 1);
    const std::size_t warmup = 20;

    const OrderTrajectory traj =
        simulate_orders(s, forecaster, costs, params, DistFamily::normal, warmup);

    // Scripted replay of the order recursion, using the library only for the
    // per-period forecasts and the quantile.
    double x_prev = s.values[warmup - 1];
    double d_prev = s.values[warmup - 1];
    for (std::size_t t = warmup; t < s.values.size(); ++t) {
        const std::span<const double> hist(s.values.data(), t);
        const ForecastResult f = forecast_one(forecaster, hist);
        const double x_star =
            quantile(DemandDistribution::from_moments(DistFamily::normal, f.mu_hat, f.sigma_hat),
                     critical_quantile(costs));
        double x = (1.0 - params.gamma) * x_star + params.gamma * f.mu_hat +
                   params.beta * (d_prev - x_prev);
        if (x < 0.0) x = 0.0;

        const OrderRecord& rec = traj.records[t - warmup];
        CHECK(rec.t == t + 1);
        CHECK(rec.x_star == doctest::Approx(x_star).epsilon(1e-12));
        CHECK(rec.x == doctest::Approx(x).epsilon(1e-12));

        x_prev = rec.x;
        d_prev = s.values[t];
    }
}

TEST_CASE("pure pull-to-centre never references past demands or orders") {
    const DemandSeries s = arma11_series(45, 4);
    const CostParams costs = costs_from_tau(0.7);
    const ForecastProfile profile =
        forecast_profile(s.values, ForecastModelSpec::arma_spec(1, 1), 20);

    const OrderTrajectory a =
        apply_adjustments(profile, s, costs, {0.0, 0.3}, DistFamily::normal);

    // Perturb a demand inside the trajectory while holding the forecasts
    // fixed: with beta = 0 the orders must not change at all.
    DemandSeries perturbed = s;
    perturbed.values[25] += 500.0;
    const OrderTrajectory b =
        apply_adjustments(profile, perturbed, costs, {0.0, 0.3}, DistFamily::normal);

    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].x == b.records[i].x);
    }

    // The same perturbation with beta > 0 must propagate one period later.
    const OrderTrajectory c =
        apply_adjustments(profile, s, costs, {0.2, 0.3}, DistFamily::normal);
    const OrderTrajectory d =
        apply_adjustments(profile, perturbed, costs, {0.2, 0.3}, DistFamily::normal);
    CHECK(c.records[6].x != d.records[6].x); // t = 27 uses d_26 as d_prev
}

TEST_CASE("shifting the demand series shifts every order by the same amount") {
    const DemandSeries s = arma11_series(50, 15);
    const double k = 300.0;
    DemandSeries shifted = s;
    for (double& v : shifted.values) v += k;

    const CostParams costs = costs_from_tau(0.7);
    for (const auto& forecaster : {ForecastModelSpec::simple(ForecastKind::mean),
                                   ForecastModelSpec::arma_spec(1, 1)}) {
        // The mean path is exact arithmetic; the arma path re-solves a
        // simplex search whose trajectory is not bit-shift-invariant, so it
        // gets a small absolute allowance (0.01 innovation sd).
        const double tol = forecaster.kind == ForecastKind::mean ? 1e-6 : 1.0;
        const OrderTrajectory base =
            simulate_orders(s, forecaster, costs, {0.2, 0.1}, DistFamily::normal, 20);
        const OrderTrajectory moved =
            simulate_orders(shifted, forecaster, costs, {0.2, 0.1}, DistFamily::normal, 20);
        for (std::size_t i = 0; i < base.records.size(); ++i) {
            CHECK(std::fabs(moved.records[i].x - base.records[i].x - k) <= tol);
        }
    }
}

TEST_CASE("simulate_orders validates the warm-up") {
    const DemandSeries s = arma11_series(30, 2);
    CHECK_THROWS_AS(simulate_orders(s, ForecastModelSpec::arma_spec(1, 1), costs_from_tau(0.7),
                                    {0.0, 0.0}, DistFamily::normal, 30),
                    std::invalid_argument); // series not longer than warm-up
    CHECK_THROWS_AS(simulate_orders(s, ForecastModelSpec::arma_spec(1, 1), costs_from_tau(0.7),
                                    {0.0, 0.0}, DistFamily::normal, 5),
                    std::invalid_argument); // warm-up below identifiability floor
}
