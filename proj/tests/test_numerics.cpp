// Foundations: root finding, linear solves, quadrature, RK4, extrapolation.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lensflow/numerics.hpp"
#include "lensflow/ode.hpp"
#include "lensflow/quadrature.hpp"

using namespace lensflow;

TEST_CASE("bisect locates simple roots", "[numerics]") {
    const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(std::abs(r - std::sqrt(2.0)) < 1e-13);
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), std::domain_error);
}

TEST_CASE("tridiagonal solve reproduces a known solution", "[numerics]") {
    // system assembled from the target x = (1, 2, 3, 4)
    std::vector<double> sub = {0, -1, -1, -1}, diag = {2, 2, 2, 2}, sup = {-1, -1, -1, 0};
    std::vector<double> x_true = {1, 2, 3, 4}, rhs(4);
    rhs[0] = diag[0] * x_true[0] + sup[0] * x_true[1];
    for (int i = 1; i < 3; ++i)
        rhs[i] = sub[i] * x_true[i - 1] + diag[i] * x_true[i] + sup[i] * x_true[i + 1];
    rhs[3] = sub[3] * x_true[2] + diag[3] * x_true[3];
    solve_tridiagonal(sub, diag, sup, rhs);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rhs[i] - x_true[i]) < 1e-12);
}

TEST_CASE("least squares line is exact on affine data", "[numerics]") {
    std::vector<double> x = {0, 1, 2, 3, 4}, y;
    for (double v : x) y.push_back(3.5 * v - 1.25);
    const LinearFit fit = least_squares_line(x, y);
    CHECK(std::abs(fit.slope - 3.5) < 1e-12);
    CHECK(std::abs(fit.intercept + 1.25) < 1e-12);
    CHECK(fit.residual_rms < 1e-12);
}

TEST_CASE("adaptive quadrature matches closed forms", "[numerics]") {
    CHECK(std::abs(integrate([](double x) { return x * x; }, 0.0, 1.0) - 1.0 / 3.0) < 1e-14);
    CHECK(std::abs(integrate([](double x) { return std::sin(x); }, 0.0, pi) - 2.0) < 1e-12);
    // sharp peak against the arctangent oracle
    const double w = 1e-2;
    const double v = integrate([w](double x) { return 1.0 / (w * w + x * x); }, -1.0, 1.0, 1e-12);
    const double oracle = 2.0 * std::atan(1.0 / w) / w;
    CHECK(std::abs(v - oracle) < 1e-9 * oracle);
}

TEST_CASE("rk4 converges at fourth order", "[numerics]") {
    auto run = [](int steps) {
        const auto f = [](double, const OdeState<1>& y) { return OdeState<1>{y[0]}; };
        OdeState<1> y = {1.0};
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) y = rk4_step<1>(f, i * h, y, h);
        return std::abs(y[0] - std::exp(1.0));
    };
    const double e1 = run(32), e2 = run(64);
    CHECK(e2 < e1 / 12.0);  // order ~4 halving gives ~16
}

TEST_CASE("event bisection finds the crossing fraction", "[numerics]") {
    const auto f = [](double, const OdeState<1>&) { return OdeState<1>{-1.0}; };
    const OdeState<1> y = {1.0};
    // y(x) = 1 - x crosses zero at x = 1; step of length 4 from 0
    const double s =
        event_fraction<1>(f, [](double, const OdeState<1>& v) { return v[0]; }, 0.0, y, 4.0);
    CHECK(std::abs(s - 0.25) < 1e-12);
}

TEST_CASE("extrapolation to zero recovers polynomial constants", "[numerics]") {
    auto fq = [](double x) { return 7.0 - 3.0 * x + 2.0 * x * x; };
    CHECK(std::abs(extrapolate_to_zero_linear(0.1, 7.0 - 0.3, 0.05, 7.0 - 0.15) - 7.0) < 1e-12);
    CHECK(std::abs(extrapolate_to_zero_quadratic(0.2, fq(0.2), 0.1, fq(0.1), 0.05, fq(0.05)) -
                   7.0) < 1e-11);
}

TEST_CASE("trapezoid rules agree on uniform grids", "[numerics]") {
    const auto x = linspace(0.0, 1.0, 101);
    std::vector<double> y;
    for (double v : x) y.push_back(v * v);
    CHECK(std::abs(trapezoid(y, 0.01) - trapezoid(x, y)) < 1e-14);
    CHECK(std::abs(trapezoid(x, y) - 1.0 / 3.0) < 1e-4);
}

TEST_CASE("parallel_for covers the index range once", "[numerics]") {
    std::vector<int> hits(257, 0);
    parallel_for(257, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}
