#pragma once
// numerics.hpp: scalar constants, root bracketing, linear algebra bits and
// small statistical helpers shared by every module.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lensflow {

// ------------------------------------------------------------------
// constants
// ------------------------------------------------------------------

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double sqrt3 = 1.7320508075688772935;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double sq(double x) { return x * x; }

// ------------------------------------------------------------------
// grids and quad-free integrals
// ------------------------------------------------------------------

inline std::vector<double> linspace(double lo, double hi, int m) {
    if (m < 2) throw std::invalid_argument("linspace: need m >= 2");
    std::vector<double> v(m);
    const double h = (hi - lo) / (m - 1);
    for (int i = 0; i < m; ++i) v[i] = lo + h * i;
    v.back() = hi;
    return v;
}

inline double trapezoid(const std::vector<double>& y, double dx) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * dx;
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("trapezoid: mismatched or short inputs");
    double s = 0.0;
    for (size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

// ------------------------------------------------------------------
// root finding
// ------------------------------------------------------------------

// plain bisection on a sign change; tolerance on the bracket width
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-14, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi))
        throw std::domain_error("bisect: no sign change on [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ------------------------------------------------------------------
// tridiagonal solve (Thomas), rhs overwritten with the solution
// ------------------------------------------------------------------

inline void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                              std::vector<double>& sup, std::vector<double>& rhs) {
    const size_t m = diag.size();
    if (sub.size() != m || sup.size() != m || rhs.size() != m)
        throw std::invalid_argument("solve_tridiagonal: size mismatch");
    for (size_t i = 1; i < m; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[m - 1] /= diag[m - 1];
    for (size_t i = m - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// ------------------------------------------------------------------
// least squares line fit
// ------------------------------------------------------------------

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

inline LinearFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t m = x.size();
    if (y.size() != m || m < 2) throw std::invalid_argument("least_squares_line: bad input");
    double mx = 0, my = 0;
    for (size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sxx += sq(x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0;
    for (size_t i = 0; i < m; ++i) rss += sq(y[i] - fit.slope * x[i] - fit.intercept);
    fit.residual_rms = std::sqrt(rss / m);
    return fit;
}

// ------------------------------------------------------------------
// limits by polynomial extrapolation to x = 0
// ------------------------------------------------------------------

inline double extrapolate_to_zero_linear(double x1, double f1, double x2, double f2) {
    return (f1 * x2 - f2 * x1) / (x2 - x1);
}

inline double extrapolate_to_zero_quadratic(double x1, double f1, double x2, double f2, double x3,
                                            double f3) {
    const double l1 = (x2 * x3) / ((x1 - x2) * (x1 - x3));
    const double l2 = (x1 * x3) / ((x2 - x1) * (x2 - x3));
    const double l3 = (x1 * x2) / ((x3 - x1) * (x3 - x2));
    return f1 * l1 + f2 * l2 + f3 * l3;
}

// central difference derivative of a callable
inline double derivative_central(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// ------------------------------------------------------------------
// bounded parallel map; LENSFLOW_THREADS caps the worker count
// ------------------------------------------------------------------

inline int thread_budget() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("LENSFLOW_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

inline void parallel_for(int count, const std::function<void(int)>& body) {
    const int workers = std::min(thread_budget(), std::max(count, 1));
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace lensflow
