#include "nvadjust/nelder_mead.hpp"

#include "nvadjust/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace nvadjust;

TEST_CASE("interior quadratic maximum is found to 1e-5") {
    OptimizeProblem p;
    p.objective = [](std::span<const double> u) {
        return -(u[0] - 0.2) * (u[0] - 0.2) - (u[1] - 0.1) * (u[1] - 0.1);
    };
    p.lower = {0.0, 0.0};
    p.upper = {0.5, 0.5};
    p.init = {0.25, 0.25};
    p.tolerance = 1e-14;

    const OptimizeResult r = maximize(p);
    CHECK(std::fabs(r.argmax[0] - 0.2) < 1e-5);
    CHECK(std::fabs(r.argmax[1] - 0.1) < 1e-5);
    CHECK(r.converged);
}

TEST_CASE("monotone objective pins the boundary") {
    OptimizeProblem p;
    p.objective = [](std::span<const double> u) { return -(u[0] - 0.9) * (u[0] - 0.9); };
    p.lower = {0.0};
    p.upper = {0.5};
    p.init = {0.1};
    p.tolerance = 1e-14;

    const OptimizeResult r = maximize(p);
    CHECK(r.argmax[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("piecewise-linear tent matches an exhaustive grid search") {
    auto tent = [](std::span<const double> u) {
        return -2.0 * std::fabs(u[0] - 0.3) - std::fabs(u[1] - 0.2);
    };

    // Independent oracle: exhaustive grid search at step 1e-3.
    double best = -1e300;
    double best_x = 0.0;
    double best_y = 0.0;
    for (int i = 0; i <= 500; ++i) {
        for (int j = 0; j <= 500; ++j) {
            const double xy[2] = {i * 1e-3, j * 1e-3};
            const double f = tent(xy);
            if (f > best) {
                best = f;
                best_x = xy[0];
                best_y = xy[1];
            }
        }
    }
    CHECK(best_x == doctest::Approx(0.3));
    CHECK(best_y == doctest::Approx(0.2));

    OptimizeProblem p;
    p.objective = tent;
    p.lower = {0.0, 0.0};
    p.upper = {0.5, 0.5};
    p.init = {0.05, 0.45};
    p.tolerance = 1e-14;
    const OptimizeResult r = maximize(p);
    CHECK(std::fabs(r.argmax[0] - best_x) < 1e-3);
    CHECK(std::fabs(r.argmax[1] - best_y) < 1e-3);
}

TEST_CASE("result respects the box, never degrades init, and is deterministic") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = coef(gen);
        const double b = coef(gen);
        const double c = coef(gen);
        OptimizeProblem p;
        p.objective = [a, b, c](std::span<const double> u) {
            return a * u[0] + b * u[1] + c * std::sin(3.0 * u[0]) * std::cos(2.0 * u[1]);
        };
        p.lower = {-1.0, 0.0};
        p.upper = {2.0, 0.7};
        p.init = {0.4, 0.3};

        const OptimizeResult r1 = maximize(p);
        const OptimizeResult r2 = maximize(p);
        CHECK(r1.argmax == r2.argmax);
        CHECK(r1.value == r2.value);
        CHECK(r1.argmax[0] >= p.lower[0]);
        CHECK(r1.argmax[0] <= p.upper[0]);
        CHECK(r1.argmax[1] >= p.lower[1]);
        CHECK(r1.argmax[1] <= p.upper[1]);

        const double u0[2] = {0.4, 0.3};
        CHECK(r1.value >= p.objective(u0));
    }
}

TEST_CASE("explicit starting simplex is honoured") {
    OptimizeProblem p;
    p.objective = [](std::span<const double> u) { return -(u[0] * u[0] + u[1] * u[1]); };
    p.lower = {-1.0, -1.0};
    p.upper = {1.0, 1.0};
    p.init = {0.9, 0.9};
    p.tolerance = 1e-14;
    p.initial_simplex = {{0.0, 0.0}, {0.5, 0.1}, {0.1, 0.5}};

    const OptimizeResult r = maximize(p);
    // The origin is a vertex of the simplex, so the result cannot be worse.
    CHECK(r.value >= -1e-12);
}

TEST_CASE("non-finite objective raises NumericError naming the point") {
    OptimizeProblem p;
    p.objective = [](std::span<const double> u) {
        return u[0] > 0.25 ? std::numeric_limits<double>::quiet_NaN() : u[0];
    };
    p.lower = {0.0};
    p.upper = {1.0};
    p.init = {0.2};
    CHECK_THROWS_AS(maximize(p), NumericError);
}

TEST_CASE("invalid problems are rejected") {
    OptimizeProblem p;
    p.objective = [](std::span<const double> u) { return u[0]; };
    p.lower = {0.0};
    p.upper = {1.0};
    p.init = {2.0}; // outside the box
    CHECK_THROWS_AS(maximize(p), std::invalid_argument);
    p.init = {0.5};
    p.tolerance = 0.0;
    CHECK_THROWS_AS(maximize(p), std::invalid_argument);
}
