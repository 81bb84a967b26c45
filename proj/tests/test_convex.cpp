#include "rsmec/convex.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rsmec::convex;

namespace {

ScalarFn quadratic_1d() {
    ScalarFn f;
    f.value = [](const Vec& x) { return x[0] * x[0]; };
    f.grad = [](const Vec& x, Vec& g) { g = {2.0 * x[0]}; };
    f.hess = [](const Vec&, Mat& h) {
        h.set_zero();
        h(0, 0) = 2.0;
    };
    return f;
}

// min 2 exp(-ta) + exp(-tb) st ta + tb <= 2, reduced to one dimension and
// resolved by golden section.
double golden_two_exp_optimum() {
    auto f = [](double ta) { return 2.0 * std::exp(-ta) + std::exp(-(2.0 - ta)); };
    double lo = 0.0, hi = 2.0;
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 90; ++i) {
        if (f1 > f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return f(0.5 * (lo + hi));
}

ConvexProgram two_exp_program(double scale) {
    ConvexProgram p;
    p.n = 2;
    ScalarFn obj;
    obj.value = [scale](const Vec& x) {
        return 2.0 * std::exp(-scale * x[0]) + std::exp(-scale * x[1]);
    };
    obj.grad = [scale](const Vec& x, Vec& g) {
        g = {-2.0 * scale * std::exp(-scale * x[0]), -scale * std::exp(-scale * x[1])};
    };
    obj.hess = [scale](const Vec& x, Mat& h) {
        h.set_zero();
        h(0, 0) = 2.0 * scale * scale * std::exp(-scale * x[0]);
        h(1, 1) = scale * scale * std::exp(-scale * x[1]);
    };
    p.objective = obj;
    ScalarFn sum;
    sum.name = "sum budget";
    sum.value = [scale](const Vec& x) { return scale * (x[0] + x[1]) - 2.0; };
    sum.grad = [scale](const Vec&, Vec& g) { g = {scale, scale}; };
    p.inequalities.push_back(sum);
    p.lower = {0.0, 0.0};
    p.upper = {1e30, 1e30};
    return p;
}

}  // namespace

TEST_SUITE("convex") {

TEST_CASE("box-constrained quadratic") {
    ConvexProgram p;
    p.n = 1;
    p.objective = quadratic_1d();
    p.lower = {-1.0};
    p.upper = {1.0};
    const SolveReport rep = solve(p, {0.5}, 1e-9);
    CHECK(rep.status == SolveStatus::optimal);
    CHECK(std::fabs(rep.x[0]) < 1e-6);
    CHECK(rep.objective <= 0.25);
    CHECK(rep.kkt_residual <= 1e-9 * 10);
}

TEST_CASE("monotone objective rides to its bound") {
    ConvexProgram p;
    p.n = 1;
    ScalarFn obj;
    obj.value = [](const Vec& x) { return std::exp(-x[0]); };
    obj.grad = [](const Vec& x, Vec& g) { g = {-std::exp(-x[0])}; };
    obj.hess = [](const Vec& x, Mat& h) {
        h.set_zero();
        h(0, 0) = std::exp(-x[0]);
    };
    p.objective = obj;
    ScalarFn cap;
    cap.name = "t cap";
    cap.value = [](const Vec& x) { return x[0] - 3.0; };
    cap.grad = [](const Vec&, Vec& g) { g = {1.0}; };
    p.inequalities.push_back(cap);
    const SolveReport rep = solve(p, {1.0}, 1e-10);
    CHECK(rep.status == SolveStatus::optimal);
    CHECK(rep.x[0] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(rep.objective == doctest::Approx(std::exp(-3.0)).epsilon(1e-6));
}

TEST_CASE("weighted exponentials against the golden-section oracle") {
    ConvexProgram p = two_exp_program(1.0);
    const SolveReport rep = solve(p, {0.5, 0.5}, 1e-10);
    CHECK(rep.status == SolveStatus::optimal);
    CHECK(rep.x[0] + rep.x[1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(rep.x[0] == doctest::Approx(1.0 + 0.5 * std::log(2.0)).epsilon(1e-5));
    CHECK(rep.objective == doctest::Approx(golden_two_exp_optimum()).epsilon(1e-8));
}

TEST_CASE("solution invariant under power-of-two rescaling") {
    const SolveReport a = solve(two_exp_program(1.0), {0.5, 0.5}, 1e-10);
    ConvexProgram scaled = two_exp_program(4.0);  // x = 4 y
    const SolveReport b = solve(scaled, {0.125, 0.125}, 1e-10);
    CHECK(4.0 * b.x[0] == doctest::Approx(a.x[0]).epsilon(1e-6));
    CHECK(4.0 * b.x[1] == doctest::Approx(a.x[1]).epsilon(1e-6));
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-8));
}

TEST_CASE("objective never rises above the start and stages descend") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
        ConvexProgram p = two_exp_program(u(rng));
        const Vec x0 = {u(rng) * 0.4, u(rng) * 0.4};
        const double f0 = p.objective.value(x0);
        const SolveReport rep = solve(p, x0, 1e-9);
        CHECK(rep.objective <= f0 + 1e-8);
        for (size_t i = 2; i < rep.stage_objectives.size(); ++i)
            CHECK(rep.stage_objectives[i] <= rep.stage_objectives[i - 1] + 1e-7);
    }
}

TEST_CASE("infeasible start is reported, not solved") {
    ConvexProgram p = two_exp_program(1.0);
    const SolveReport rep = solve(p, {1.5, 1.5}, 1e-9);
    CHECK(rep.status == SolveStatus::infeasible_start);
    CHECK(rep.message.find("sum budget") != std::string::npos);
}

TEST_CASE("unreachable tolerance ends in max_iter, not a fake optimal") {
    ConvexProgram p = two_exp_program(1.0);
    const SolveReport rep = solve(p, {0.5, 0.5}, 1e-30);
    CHECK(rep.status == SolveStatus::max_iter);
    // the point itself is still the right one
    CHECK(rep.x[0] + rep.x[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("linear equality constraints hold through the solve") {
    ConvexProgram p;
    p.n = 2;
    ScalarFn obj;
    obj.value = [](const Vec& x) {
        return (x[0] - 2.0) * (x[0] - 2.0) + (x[1] + 1.0) * (x[1] + 1.0);
    };
    obj.grad = [](const Vec& x, Vec& g) {
        g = {2.0 * (x[0] - 2.0), 2.0 * (x[1] + 1.0)};
    };
    obj.hess = [](const Vec&, Mat& h) {
        h.set_zero();
        h(0, 0) = 2.0;
        h(1, 1) = 2.0;
    };
    p.objective = obj;
    p.lower = {-10.0, -10.0};
    p.upper = {10.0, 10.0};
    p.eq_a = Mat(1, 2);
    p.eq_a(0, 0) = 1.0;
    p.eq_a(0, 1) = 1.0;
    p.eq_b = {0.0};
    const SolveReport rep = solve(p, {0.0, 0.0}, 1e-10);
    CHECK(rep.status == SolveStatus::optimal);
    CHECK(rep.x[0] == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(rep.x[1] == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(rep.x[0] + rep.x[1] == doctest::Approx(0.0).epsilon(1e-9));
}

}  // TEST_SUITE
