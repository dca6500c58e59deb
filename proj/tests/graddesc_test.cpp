#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dtsp/error.hpp"
#include "dtsp/graddesc.hpp"

using namespace dtsp;

namespace {

// f(x) = (x - 3)^2. Under fixed step 0.4 the iteration is affine with
// contraction factor 1 - 2 * 0.4 = 0.2, so x_n = 3 - 3 * 0.2^n from x0 = 0.
ScalarField shifted_quadratic() {
    ScalarField f;
    f.dim = 1;
    f.eval = [](const Point& x) { return (x[0] - 3.0) * (x[0] - 3.0); };
    f.grad = [](const Point& x) { return Point{2.0 * (x[0] - 3.0)}; };
    return f;
}

ScalarField plane() {
    ScalarField f;
    f.dim = 2;
    f.eval = [](const Point& x) { return x[0] + 2.0 * x[1]; };
    f.grad = [](const Point&) { return Point{1.0, 2.0}; };
    return f;
}

ScalarField cubic() {
    ScalarField f;
    f.dim = 1;
    f.eval = [](const Point& x) { return x[0] * x[0] * x[0]; };
    f.grad = [](const Point& x) { return Point{3.0 * x[0] * x[0]}; };
    return f;
}

ScalarField rosenbrock() {
    ScalarField f;
    f.dim = 2;
    f.eval = [](const Point& p) {
        const double x = p[0], y = p[1];
        return (1.0 - x) * (1.0 - x) + 100.0 * (y - x * x) * (y - x * x);
    };
    f.grad = [](const Point& p) {
        const double x = p[0], y = p[1];
        return Point{-2.0 * (1.0 - x) - 400.0 * x * (y - x * x), 200.0 * (y - x * x)};
    };
    return f;
}

DescentConfig pinned_1d(double x0, double t, int max_iters) {
    DescentConfig cfg;
    cfg.step_mode = StepMode::Fixed;
    cfg.t = t;
    cfg.max_iters = max_iters;
    cfg.restarts = 0;
    cfg.init_box = {{x0, x0}};
    return cfg;
}

} // namespace

TEST_CASE("descend_step arithmetic") {
    CHECK(descend_step({0.0}, {-6.0}, 0.4)[0] == doctest::Approx(2.4).epsilon(1e-15));
    CHECK(descend_step({1.5, -2.0}, {0.0, 0.0}, 0.7) == Point{1.5, -2.0});
    CHECK(descend_step({1.5, -2.0}, {3.0, 4.0}, 0.0) == Point{1.5, -2.0});
    CHECK_THROWS_AS(descend_step({1.0}, {1.0, 2.0}, 0.1), InvalidArgumentError);
    CHECK_THROWS_AS(descend_step({1.0}, {1.0}, -0.1), InvalidArgumentError);
}

TEST_CASE("stop_by_gradient is componentwise") {
    CHECK(stop_by_gradient({1e-7, -1e-7}, 1e-6));
    CHECK_FALSE(stop_by_gradient({1e-7, 2e-6}, 1e-6));
    CHECK(stop_by_gradient({0.0, 0.0}, 1e-300));
}

TEST_CASE("finite_difference_gradient reference values") {
    CHECK(finite_difference_gradient(shifted_quadratic(), {0.0}, 1e-5)[0] ==
          doctest::Approx(-6.0).epsilon(1e-6));
    const Point g = finite_difference_gradient(plane(), {17.0, -4.0}, 1e-5);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(2.0).epsilon(1e-8));
    // Central differences are second order: error ~ h^2 * f''' = 1e-8 * 6.
    CHECK(finite_difference_gradient(cubic(), {2.0}, 1e-4)[0] ==
          doctest::Approx(12.0).epsilon(1e-5));
    CHECK_THROWS_AS(finite_difference_gradient(cubic(), {2.0}, 0.0), InvalidArgumentError);
}

TEST_CASE("every shipped gradient matches finite differences on random points") {
    const ScalarField fields[] = {shifted_quadratic(), plane(), cubic(), rosenbrock()};
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const ScalarField& field : fields) {
        for (int trial = 0; trial < 100; ++trial) {
            Point x(field.dim);
            for (double& v : x) v = u(rng);
            const Point g = field.grad(x);
            const Point fd = finite_difference_gradient(field, x, 1e-5);
            for (int d = 0; d < field.dim; ++d) {
                CHECK(std::abs(g[d] - fd[d]) <= 1e-4);
            }
        }
    }
}

TEST_CASE("minimize follows the closed-form fixed-step recurrence") {
    const DescentConfig cfg = pinned_1d(0.0, 0.4, 8);
    const DescentResult res = minimize(shifted_quadratic(), cfg, 1);
    CHECK(std::abs(res.best_x[0] - 3.0) < 1e-4);
    CHECK(res.best_f < 1e-9);
    CHECK(res.iterations_used <= 8);
    // After n steps the error is exactly 3 * 0.2^n.
    const DescentResult early = minimize(shifted_quadratic(), pinned_1d(0.0, 0.4, 3), 1);
    CHECK(early.best_x[0] == doctest::Approx(3.0 - 3.0 * 0.008).epsilon(1e-12));
}

TEST_CASE("minimize starting at the minimum converges immediately") {
    ScalarField f;
    f.dim = 1;
    f.eval = [](const Point& x) { return x[0] * x[0]; };
    f.grad = [](const Point& x) { return Point{2.0 * x[0]}; };
    const DescentResult res = minimize(f, pinned_1d(0.0, 0.4, 100), 9);
    CHECK(res.converged);
    CHECK(res.best_f == 0.0);
    CHECK(res.iterations_used <= 1);
}

TEST_CASE("random restarts never hurt") {
    DescentConfig cfg;
    cfg.step_mode = StepMode::Decreasing;
    cfg.max_iters = 50000;
    cfg.init_box = {{-2.0, 2.0}, {-2.0, 2.0}};
    cfg.restarts = 0;
    const DescentResult single = minimize(rosenbrock(), cfg, 5);
    cfg.restarts = 5;
    const DescentResult multi = minimize(rosenbrock(), cfg, 5);
    // Restart 0 draws the same stream in both configurations.
    CHECK(multi.best_f <= single.best_f);
}

TEST_CASE("minimize is a pure function of field, config and seed") {
    DescentConfig cfg;
    cfg.max_iters = 500;
    cfg.restarts = 3;
    cfg.init_box = {{-2.0, 2.0}, {-2.0, 2.0}};
    const DescentResult a = minimize(rosenbrock(), cfg, 77);
    const DescentResult b = minimize(rosenbrock(), cfg, 77);
    CHECK(a.best_f == b.best_f);
    CHECK(a.best_x == b.best_x);
    CHECK(a.iterations_used == b.iterations_used);
    CHECK(a.converged == b.converged);
}

TEST_CASE("fixed-step error contracts strictly on a convex quadratic") {
    // f(x) = c (x - a)^2 with 0 < t < 1/c contracts |x - a| by |1 - 2tc| < 1.
    const double c = 1.7, a = -2.5, t = 0.31;
    ScalarField f;
    f.dim = 1;
    f.eval = [=](const Point& x) { return c * (x[0] - a) * (x[0] - a); };
    f.grad = [=](const Point& x) { return Point{2.0 * c * (x[0] - a)}; };
    Point x{4.0};
    double err = std::abs(x[0] - a);
    for (int n = 0; n < 40 && err > 0.0; ++n) {
        x = descend_step(x, f.grad(x), t);
        const double next_err = std::abs(x[0] - a);
        CHECK(next_err < err);
        err = next_err;
    }
    CHECK(err < 1e-9); // contraction actually reached the minimum
}

TEST_CASE("divergent fixed steps abort the restart instead of throwing") {
    // t = 1.5 on x^2 doubles the iterate each step.
    ScalarField f;
    f.dim = 1;
    f.eval = [](const Point& x) { return x[0] * x[0]; };
    f.grad = [](const Point& x) { return Point{2.0 * x[0]}; };
    const DescentResult res = minimize(f, pinned_1d(1.0, 1.5, 10000), 3);
    CHECK_FALSE(res.converged);
    CHECK(res.best_f > 1e12);
    CHECK(res.iterations_used < 10000);
}

TEST_CASE("non-finite evaluations raise a numerical failure with the point") {
    ScalarField f;
    f.dim = 1;
    f.eval = [](const Point& x) { return x[0] > 0.5 ? std::nan("") : x[0]; };
    f.grad = [](const Point&) { return Point{1.0}; };
    // Descending on a linear slope walks left; start right of the NaN cliff.
    DescentConfig cfg = pinned_1d(2.0, 0.4, 10);
    try {
        minimize(f, cfg, 1);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        REQUIRE(e.point.size() == 1);
        CHECK(e.point[0] == 2.0);
    }
}

TEST_CASE("minimize validates its configuration") {
    const ScalarField f = shifted_quadratic();
    DescentConfig cfg = pinned_1d(0.0, 0.4, 10);
    cfg.epsilon = 0.0;
    CHECK_THROWS_AS(minimize(f, cfg, 1), InvalidArgumentError);
    cfg = pinned_1d(0.0, 0.4, 10);
    cfg.init_box = {};
    CHECK_THROWS_AS(minimize(f, cfg, 1), InvalidArgumentError);
    cfg = pinned_1d(0.0, -0.1, 10);
    CHECK_THROWS_AS(minimize(f, cfg, 1), InvalidArgumentError);
}
