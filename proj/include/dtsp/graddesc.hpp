#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace dtsp {

using Point = std::vector<double>;

// A differentiable objective. eval and grad must be safe to call from
// multiple threads at once; the minimizer treats them as pure.
struct ScalarField {
    int dim = 0;
    std::function<double(const Point&)> eval;
    std::function<Point(const Point&)> grad;
};

enum class StepMode {
    Fixed,      // step = t every iteration
    Decreasing, // step = 1/n at iteration n
};

struct DescentConfig {
    StepMode step_mode = StepMode::Fixed;
    double t = 0.4;
    double epsilon = 1e-6;
    int max_iters = 1000;
    int restarts = 3;
    // Per-dimension [lo, hi] sampling box for the starting point. A
    // degenerate box ([c, c] per dimension) pins x0.
    std::vector<std::array<double, 2>> init_box;
};

struct DescentResult {
    Point best_x;
    double best_f = 0.0;
    int iterations_used = 0; // steps taken by the winning restart
    bool converged = false;  // stopping rule fired before max_iters
};

// One update x - step * g.
Point descend_step(const Point& x, const Point& g, double step);

// True iff every component satisfies |g_i| <= epsilon.
bool stop_by_gradient(const Point& g, double epsilon);

// Central differences (f(x + h e_i) - f(x - h e_i)) / (2h); the verification
// oracle for hand-written gradients.
Point finite_difference_gradient(const ScalarField& field, const Point& x, double h);

// Runs 1 + restarts descents from seeded random starting points and returns
// the lowest final (x, f(x)) pair. A descent stops when both the
// value-change and the gradient-magnitude criteria hold (within epsilon), at
// max_iters, or when |f| exceeds 1e12 (divergence; that restart simply does
// not converge). Pure function of (field, cfg, seed).
DescentResult minimize(const ScalarField& field, const DescentConfig& cfg,
                       std::uint64_t seed);

} // namespace dtsp
