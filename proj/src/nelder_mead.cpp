#include "nvadjust/nelder_mead.hpp"

#include "nvadjust/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nvadjust {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kOffsetFraction = 0.05; // of box width, for the default simplex

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

void clamp_to_box(std::vector<double>& x, const OptimizeProblem& p) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], p.lower[i], p.upper[i]);
    }
}

class Evaluator {
public:
    Evaluator(const OptimizeProblem& p, std::size_t budget) : problem_(p), budget_(budget) {}

    double operator()(const std::vector<double>& x) {
        ++count_;
        const double f = problem_.objective(x);
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "objective returned a non-finite value at (";
            for (std::size_t i = 0; i < x.size(); ++i) {
                msg << (i ? ", " : "") << x[i];
            }
            msg << ")";
            throw NumericError(msg.str());
        }
        return f;
    }

    std::size_t count() const { return count_; }
    bool exhausted() const { return count_ >= budget_; }

private:
    const OptimizeProblem& problem_;
    std::size_t budget_;
    std::size_t count_ = 0;
};

std::vector<Vertex> default_simplex(const OptimizeProblem& p, const std::vector<double>& centre,
                                    Evaluator& eval) {
    const std::size_t dim = centre.size();
    std::vector<Vertex> simplex(dim + 1);
    simplex[0].x = centre;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> x = centre;
        double step = kOffsetFraction * (p.upper[i] - p.lower[i]);
        if (step <= 0.0) {
            step = kOffsetFraction * std::max(1.0, std::fabs(centre[i]));
        }
        if (x[i] + step > p.upper[i]) {
            step = -step; // reflect inward at the boundary
        }
        x[i] += step;
        clamp_to_box(x, p);
        simplex[i + 1].x = std::move(x);
    }
    for (auto& v : simplex) {
        v.f = eval(v.x);
    }
    return simplex;
}

void sort_simplex(std::vector<Vertex>& simplex) {
    std::stable_sort(simplex.begin(), simplex.end(),
                     [](const Vertex& a, const Vertex& b) { return a.f > b.f; });
}

// Runs the simplex loop until the objective spread is below tolerance or the
// evaluation budget runs out. The simplex is left sorted best-first.
bool run_simplex(std::vector<Vertex>& simplex, const OptimizeProblem& p, Evaluator& eval) {
    const std::size_t dim = p.init.size();
    sort_simplex(simplex);
    while (true) {
        if (simplex.front().f - simplex.back().f < p.tolerance) {
            return true;
        }
        if (eval.exhausted()) {
            return false;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                centroid[j] += simplex[i].x[j];
            }
        }
        for (double& c : centroid) {
            c /= static_cast<double>(dim);
        }
        const Vertex& worst = simplex.back();

        auto make_point = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                x[j] = centroid[j] + coef * (centroid[j] - worst.x[j]);
            }
            clamp_to_box(x, p);
            return x;
        };

        Vertex reflected{make_point(kReflect), 0.0};
        reflected.f = eval(reflected.x);

        if (reflected.f > simplex.front().f) {
            Vertex expanded{make_point(kExpand), 0.0};
            expanded.f = eval(expanded.x);
            simplex.back() = expanded.f > reflected.f ? std::move(expanded) : std::move(reflected);
        } else if (reflected.f > simplex[dim - 1].f) {
            simplex.back() = std::move(reflected);
        } else {
            const bool outside = reflected.f > worst.f;
            Vertex contracted{std::vector<double>(dim), 0.0};
            const Vertex& towards = outside ? reflected : worst;
            for (std::size_t j = 0; j < dim; ++j) {
                contracted.x[j] = centroid[j] + kContract * (towards.x[j] - centroid[j]);
            }
            clamp_to_box(contracted.x, p);
            contracted.f = eval(contracted.x);
            if (contracted.f > towards.f) {
                simplex.back() = std::move(contracted);
            } else {
                // Shrink towards the best vertex.
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        simplex[i].x[j] =
                            simplex[0].x[j] + kShrink * (simplex[i].x[j] - simplex[0].x[j]);
                    }
                    clamp_to_box(simplex[i].x, p);
                    simplex[i].f = eval(simplex[i].x);
                    if (eval.exhausted()) break;
                }
            }
        }
        sort_simplex(simplex);
    }
}

void validate_problem(const OptimizeProblem& p) {
    const std::size_t dim = p.init.size();
    if (dim == 0 || p.lower.size() != dim || p.upper.size() != dim) {
        throw std::invalid_argument("maximize: inconsistent problem dimensions");
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (!(p.lower[i] <= p.init[i] && p.init[i] <= p.upper[i])) {
            throw std::invalid_argument("maximize: init must lie inside the box");
        }
        if (!(p.lower[i] <= p.upper[i])) {
            throw std::invalid_argument("maximize: box has lower > upper");
        }
    }
    if (!(p.tolerance > 0.0)) {
        throw std::invalid_argument("maximize: tolerance must be positive");
    }
    if (!p.initial_simplex.empty() && p.initial_simplex.size() != dim + 1) {
        throw std::invalid_argument("maximize: initial simplex needs dimension+1 points");
    }
}

} // namespace

OptimizeResult maximize(const OptimizeProblem& problem) {
    validate_problem(problem);
    const std::size_t dim = problem.init.size();
    const std::size_t budget =
        problem.max_evals > 0 ? problem.max_evals : 500 * dim;
    if (budget < dim + 1) {
        throw std::invalid_argument("maximize: evaluation budget below dimension+1");
    }
    Evaluator eval(problem, budget);

    std::vector<Vertex> simplex;
    if (problem.initial_simplex.empty()) {
        simplex = default_simplex(problem, problem.init, eval);
    } else {
        simplex.resize(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (problem.initial_simplex[i].size() != dim) {
                throw std::invalid_argument("maximize: initial simplex point has wrong dimension");
            }
            simplex[i].x = problem.initial_simplex[i];
            clamp_to_box(simplex[i].x, problem);
            simplex[i].f = eval(simplex[i].x);
        }
    }

    bool converged = run_simplex(simplex, problem, eval);
    for (int r = 0; r < problem.restarts && !eval.exhausted(); ++r) {
        Vertex best = simplex.front();
        simplex = default_simplex(problem, best.x, eval);
        // Keep the incumbent: the re-inflated simplex replaces its own centre
        // copy, so the best value cannot regress.
        simplex[0] = std::move(best);
        converged = run_simplex(simplex, problem, eval);
    }

    // Guard against a caller-supplied simplex that excludes init.
    std::vector<double> init = problem.init;
    clamp_to_box(init, problem);
    const double f_init = problem.objective(init);
    OptimizeResult result;
    if (f_init > simplex.front().f) {
        result.argmax = init;
        result.value = f_init;
    } else {
        result.argmax = simplex.front().x;
        result.value = simplex.front().f;
    }
    result.evaluations = eval.count() + 1;
    result.converged = converged;
    return result;
}

} // namespace nvadjust
