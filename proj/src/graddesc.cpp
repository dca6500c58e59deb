#include "dtsp/graddesc.hpp"

#include <cmath>
#include <random>
#include <string>

#include "dtsp/error.hpp"
#include "dtsp/rng.hpp"

namespace dtsp {

namespace {

constexpr double kDivergenceLimit = 1e12;

bool finite(const Point& p) {
    for (double v : p) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double checked_eval(const ScalarField& field, const Point& x) {
    const double f = field.eval(x);
    if (!std::isfinite(f)) {
        throw NumericalError("objective is not finite", x);
    }
    return f;
}

Point checked_grad(const ScalarField& field, const Point& x) {
    Point g = field.grad(x);
    if (static_cast<int>(g.size()) != field.dim) {
        throw InvalidArgumentError("gradient has dimension " + std::to_string(g.size()) +
                                   ", field has " + std::to_string(field.dim));
    }
    if (!finite(g)) {
        throw NumericalError("gradient is not finite", x);
    }
    return g;
}

struct RestartOutcome {
    Point x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

RestartOutcome run_descent(const ScalarField& field, const DescentConfig& cfg,
                           std::mt19937_64& rng) {
    Point x(field.dim);
    for (int d = 0; d < field.dim; ++d) {
        const auto& box = cfg.init_box[d];
        std::uniform_real_distribution<double> u(box[0], box[1]);
        x[d] = (box[0] == box[1]) ? box[0] : u(rng);
    }

    RestartOutcome out;
    double f = checked_eval(field, x);
    double prev_f = 0.0;
    bool have_prev = false;
    int steps = 0;
    while (steps < cfg.max_iters) {
        Point g = checked_grad(field, x);
        if (have_prev && std::abs(f - prev_f) <= cfg.epsilon &&
            stop_by_gradient(g, cfg.epsilon)) {
            out.converged = true;
            break;
        }
        const double step =
            cfg.step_mode == StepMode::Fixed ? cfg.t : 1.0 / static_cast<double>(steps + 1);
        x = descend_step(x, g, step);
        ++steps;
        prev_f = f;
        have_prev = true;
        f = checked_eval(field, x);
        if (std::abs(f) > kDivergenceLimit) {
            break; // diverged; report the last point, non-converged
        }
    }
    out.x = std::move(x);
    out.f = f;
    out.iterations = steps;
    return out;
}

} // namespace

Point descend_step(const Point& x, const Point& g, double step) {
    if (x.size() != g.size()) {
        throw InvalidArgumentError("point has dimension " + std::to_string(x.size()) +
                                   ", gradient has " + std::to_string(g.size()));
    }
    if (step < 0.0) {
        throw InvalidArgumentError("step must be non-negative");
    }
    Point next(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        next[i] = x[i] - step * g[i];
    }
    return next;
}

bool stop_by_gradient(const Point& g, double epsilon) {
    for (double v : g) {
        if (std::abs(v) > epsilon) return false;
    }
    return true;
}

Point finite_difference_gradient(const ScalarField& field, const Point& x, double h) {
    if (!(h > 0.0)) {
        throw InvalidArgumentError("finite-difference step must be positive");
    }
    Point g(field.dim);
    Point probe = x;
    for (int d = 0; d < field.dim; ++d) {
        probe[d] = x[d] + h;
        const double fp = checked_eval(field, probe);
        probe[d] = x[d] - h;
        const double fm = checked_eval(field, probe);
        probe[d] = x[d];
        g[d] = (fp - fm) / (2.0 * h);
    }
    return g;
}

DescentResult minimize(const ScalarField& field, const DescentConfig& cfg,
                       std::uint64_t seed) {
    if (field.dim < 1 || !field.eval || !field.grad) {
        throw InvalidArgumentError("field needs dim >= 1 plus eval and grad");
    }
    if (!(cfg.epsilon > 0.0)) throw InvalidArgumentError("epsilon must be positive");
    if (cfg.t < 0.0) throw InvalidArgumentError("step scalar t must be non-negative");
    if (cfg.max_iters < 1) throw InvalidArgumentError("max_iters must be at least 1");
    if (cfg.restarts < 0) throw InvalidArgumentError("restarts must be non-negative");
    if (static_cast<int>(cfg.init_box.size()) != field.dim) {
        throw InvalidArgumentError("init_box must list one [lo, hi] pair per dimension");
    }

    DescentResult result;
    bool have_result = false;
    for (int r = 0; r <= cfg.restarts; ++r) {
        auto rng = make_stream(seed, StreamTag::DescentInit, static_cast<std::uint64_t>(r));
        RestartOutcome out = run_descent(field, cfg, rng);
        // Lowest final f wins; ties keep the earliest restart.
        if (!have_result || out.f < result.best_f) {
            result.best_x = std::move(out.x);
            result.best_f = out.f;
            result.iterations_used = out.iterations;
            result.converged = out.converged;
            have_result = true;
        }
    }
    return result;
}

} // namespace dtsp
