#pragma once
// quadrature.hpp: adaptive Gauss-Kronrod 7-15 integration on finite intervals.
// Endpoint singularities are expected to be removed by substitution before the
// integrand reaches this layer.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace lensflow {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

namespace detail {

// 15-point Kronrod abscissae on [0,1] side (symmetric), with Kronrod weights
// and the embedded 7-point Gauss weights on the shared nodes.
inline constexpr double kronrod_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kronrod_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gauss_w[4] = {0.129484966168870, 0.279705391489277,
                                      0.381830050505119, 0.417959183673469};

template <class F>
inline QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kronrod_x[i]);
        fv[14 - i] = f(c + h * kronrod_x[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    for (int i = 0; i < 7; ++i) kron += kronrod_w[i] * (fv[i] + fv[14 - i]);
    kron += kronrod_w[7] * fv[7];
    double gauss = gauss_w[3] * fv[7];
    for (int i = 0; i < 3; ++i) gauss += gauss_w[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    QuadResult r;
    r.value = kron * h;
    r.error = std::abs((kron - gauss) * h);
    return r;
}

template <class F>
inline QuadResult adapt(const F& f, double a, double b, double tol, int depth) {
    const QuadResult whole = gk15(f, a, b);
    if (whole.error <= tol || depth <= 0) return whole;
    const double c = 0.5 * (a + b);
    const QuadResult left = adapt(f, a, c, 0.5 * tol, depth - 1);
    const QuadResult right = adapt(f, c, b, 0.5 * tol, depth - 1);
    return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

template <class F>
inline double integrate(const F& f, double a, double b, double tol = 1e-12) {
    if (!(a <= b)) throw std::invalid_argument("integrate: reversed interval");
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, tol, 30).value;
}

template <class F>
inline QuadResult integrate_with_error(const F& f, double a, double b, double tol = 1e-12) {
    if (!(a <= b)) throw std::invalid_argument("integrate: reversed interval");
    if (a == b) return {0.0, 0.0};
    return detail::adapt(f, a, b, tol, 30);
}

}  // namespace lensflow
