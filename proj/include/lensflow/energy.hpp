#pragma once
// energy.hpp: first-integral analysis of self-similar arcs. The level
// E^S = S_theta^2 + S^2 - 2 log S classifies arcs by the ratio eta of the
// 60-degree-line support value to the minimal support value; Psi and Theta
// are total-turning integrals along such arcs, desingularized at their
// endpoints by distance-squared substitutions.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"
#include "quadrature.hpp"

namespace lensflow {

// ------------------------------------------------------------------
// coefficient functions of the ratio eta
// ------------------------------------------------------------------

inline double coefficient_C(double eta) {
    if (!(eta > 1.0)) throw std::invalid_argument("coefficient_C: requires eta > 1");
    return (4.0 * eta * eta - 3.0) / (3.0 * std::log(eta));
}

// A = C' / 2; its unique zero eta0 is the minimum of C
inline double A_of_eta(double eta) {
    if (!(eta > 1.0)) throw std::invalid_argument("A_of_eta: requires eta > 1");
    const double lg = std::log(eta);
    return (8.0 * eta * eta * lg - 4.0 * eta * eta + 3.0) / (6.0 * eta * lg * lg);
}

inline double B_of_eta(double eta) {
    if (!(eta >= 1.0)) throw std::invalid_argument("B_of_eta: requires eta >= 1");
    if (eta == 1.0) return 2.0;
    const double e2 = eta * eta;
    const double lg = std::log(eta);
    return 8.0 * e2 * lg * lg - 12.0 * e2 * lg - 3.0 * lg + 8.0 * e2 - 6.0;
}

inline double eta0(double tol = 1e-13) {
    return bisect([](double e) { return A_of_eta(e); }, 1.25, 1.45, tol);
}

// ------------------------------------------------------------------
// Psi(eta) = integral over [1, eta] of dx / sqrt(d(x)),
// d(x) = 1 - x^2 + C(eta) log x, simple zero at x = 1
// ------------------------------------------------------------------

namespace detail {

// d(1 + s^2) without cancellation
inline double d_shifted(double s2, double C) {
    return C * std::log1p(s2) - s2 * (2.0 + s2);
}

}  // namespace detail

inline double psi(double eta, double tol = 1e-12) {
    if (!(eta > 1.0)) {
        if (eta == 1.0) return 0.0;
        throw std::invalid_argument("psi: requires eta >= 1");
    }
    const double C = coefficient_C(eta);
    const double smax = std::sqrt(eta - 1.0);
    auto f = [C](double s) {
        if (s == 0.0) return 2.0 / std::sqrt(C - 2.0);
        const double d = detail::d_shifted(s * s, C);
        return 2.0 * s / std::sqrt(d);
    };
    return integrate(f, 0.0, smax, tol);
}

// upper Riemann-type bound: sqrt(zeta / d(1 + zeta)) is increasing, so each
// cell is dominated by its right endpoint under the zeta = sigma^2 substitution
inline double psi_upper_bound_riemann(double eta, int pieces) {
    if (!(eta > 1.0)) throw std::invalid_argument("psi_upper_bound_riemann: requires eta > 1");
    if (pieces < 1) throw std::invalid_argument("psi_upper_bound_riemann: pieces < 1");
    const double C = coefficient_C(eta);
    const double dz = (eta - 1.0) / pieces;
    double sum = 0.0;
    for (int i = 0; i < pieces; ++i) {
        const double zl = i * dz, zr = (i + 1) * dz;
        const double d = detail::d_shifted(zr, C);
        if (!(d > 0.0)) throw std::domain_error("psi_upper_bound_riemann: d <= 0 inside range");
        sum += std::sqrt(zr / d) * 2.0 * (std::sqrt(zr) - std::sqrt(zl));
    }
    return sum;
}

// ------------------------------------------------------------------
// paired ratio eta_bar below eta0 on the same C-level, and the
// asymmetric turning sum Sigma
// ------------------------------------------------------------------

inline double eta_bar(double eta_tilde, double tol = 1e-13) {
    const double e0 = eta0();
    if (!(eta_tilde >= e0)) throw std::invalid_argument("eta_bar: requires eta_tilde >= eta0");
    if (eta_tilde == e0) return e0;
    const double target = coefficient_C(eta_tilde);
    return bisect([target](double e) { return coefficient_C(e) - target; }, 1.0 + 1e-13, e0, tol);
}

inline double sigma(double eta_tilde, double tol = 1e-12) {
    return psi(eta_tilde, tol) + psi(eta_bar(eta_tilde), tol);
}

// root of Psi - pi/3 above eta0
inline double eta_star(double tol = 1e-12) {
    return bisect([](double e) { return psi(e) - pi / 3.0; }, eta0(), 1.9, tol);
}

// ------------------------------------------------------------------
// Theta(rho): total turning of a closed-arc piece between consecutive
// support extrema S_minus and S_plus = rho S_minus on the level
// E = S_minus^2 - 2 log S_minus
// ------------------------------------------------------------------

namespace detail {

// integral of dS / sqrt(E - S^2 + 2 log S) between the simple zeros
// s_lo < 1 < s_hi, split at S = 1 with S = s_lo + sigma^2 (lower) and
// S = s_hi - sigma^2 (upper)
inline double theta_between(double s_lo, double s_hi, double tol) {
    auto g_lo = [s_lo](double sig) {
        const double s2 = sig * sig;
        return -(2.0 * s_lo * s2 + s2 * s2) + 2.0 * std::log1p(s2 / s_lo);
    };
    auto g_hi = [s_hi](double sig) {
        const double s2 = sig * sig;
        return 2.0 * s_hi * s2 - s2 * s2 + 2.0 * std::log1p(-s2 / s_hi);
    };
    auto f_lo = [s_lo, g_lo](double sig) {
        if (sig == 0.0) return 2.0 / std::sqrt(2.0 * (1.0 - s_lo * s_lo) / s_lo);
        return 2.0 * sig / std::sqrt(g_lo(sig));
    };
    auto f_hi = [s_hi, g_hi](double sig) {
        if (sig == 0.0) return 2.0 / std::sqrt(2.0 * (s_hi * s_hi - 1.0) / s_hi);
        return 2.0 * sig / std::sqrt(g_hi(sig));
    };
    const double lo_span = std::sqrt(1.0 - s_lo);
    const double hi_span = std::sqrt(s_hi - 1.0);
    return integrate(f_lo, 0.0, lo_span, 0.5 * tol) + integrate(f_hi, 0.0, hi_span, 0.5 * tol);
}

}  // namespace detail

inline double theta(double rho, double tol = 1e-12) {
    if (!(rho > 1.0)) throw std::invalid_argument("theta: requires rho > 1");
    const double r = rho - 1.0;
    const double s_minus = std::sqrt(2.0 * std::log1p(r) / (r * (rho + 1.0)));
    const double s_plus = rho * s_minus;
    return detail::theta_between(s_minus, s_plus, tol);
}

// same quantity parameterized by the energy level E > 1; usable far past
// the point where s_minus ~ exp(-E/2) leaves the range of rho arithmetic
inline double theta_of_energy(double E, double tol = 1e-12) {
    if (!(E > 1.0)) throw std::invalid_argument("theta_of_energy: requires E > 1");
    if (!(E < 1400.0)) throw std::invalid_argument("theta_of_energy: E too large for doubles");
    auto f = [E](double z) {
        const double s = std::exp(z);
        return s * s - 2.0 * z - E;
    };
    const double z_lo = -0.5 * E - std::log(2.0);
    const double z_minus = bisect(f, z_lo, 0.0, 1e-15, 400);
    const double s_minus = std::exp(z_minus);
    const double s_plus =
        bisect([E](double s) { return s * s - 2.0 * std::log(s) - E; }, 1.0,
               2.0 + std::sqrt(E + 2.0), 1e-15, 400);
    return detail::theta_between(s_minus, s_plus, tol);
}

// limit of Theta as rho -> infinity, by quadratic extrapolation in
// x = log(E)/E (the observed leading correction term)
inline double theta_limit_extrapolated(double tol = 1e-12) {
    const double E1 = 345.0, E2 = 690.0, E3 = 1380.0;
    const double x1 = std::log(E1) / E1, x2 = std::log(E2) / E2, x3 = std::log(E3) / E3;
    return extrapolate_to_zero_quadratic(x1, theta_of_energy(E1, tol), x2, theta_of_energy(E2, tol),
                                         x3, theta_of_energy(E3, tol));
}

// ------------------------------------------------------------------
// eta as a function of the apex height h: 2 log(eta) = (4/3 eta^2 - 1) h^2,
// i.e. C(eta) = 2 / h^2; two branches around eta0 when they exist
// ------------------------------------------------------------------

struct EtaFromH {
    bool exists = false;
    double lower = 0.0;  // branch in (1, eta0]
    double upper = 0.0;  // branch in [eta0, inf)
};

inline EtaFromH eta_from_h(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("eta_from_h: requires h > 0");
    EtaFromH out;
    const double target = 2.0 / (h * h);
    if (!std::isfinite(target))
        throw std::domain_error("eta_from_h: h*h underflows, coefficient target not representable");
    const double e0 = eta0();
    const double c0 = coefficient_C(e0);
    if (target < c0) return out;
    out.exists = true;
    if (target == c0) {
        out.lower = out.upper = e0;
        return out;
    }
    const double near_one = 1.0 + 1e-13;
    if (coefficient_C(near_one) > target) {
        out.lower = bisect([target](double e) { return coefficient_C(e) - target; }, near_one, e0,
                           1e-14);
    } else {
        // the root sits at eta - 1 ~ h^2/6, below what a fixed bracket can
        // resolve; Newton on 2 log eta = (4 eta^2 / 3 - 1) h^2 from the
        // leading term
        double d = h * h / 6.0;
        for (int it = 0; it < 8; ++it) {
            const double f =
                2.0 * std::log1p(d) - (4.0 * (1.0 + d) * (1.0 + d) / 3.0 - 1.0) * h * h;
            const double fp = 2.0 / (1.0 + d) - 8.0 * (1.0 + d) * h * h / 3.0;
            d -= f / fp;
        }
        out.lower = 1.0 + d;
    }
    double hi = 2.0;
    while (coefficient_C(hi) < target) hi *= 2.0;
    out.upper = bisect([target](double e) { return coefficient_C(e) - target; }, e0, hi, 1e-14);
    return out;
}

// ------------------------------------------------------------------
// full description of one level of E = S^2 + S_theta^2 - 2 log S in
// the support plane: extreme radii, their ratio, and the radii where
// the level meets the junction lines S = +-sqrt(3) S_theta
// ------------------------------------------------------------------

struct EnergyLevel {
    double E = 1.0;
    double S_minus = 1.0, S_plus = 1.0;   // zeros of E - S^2 + 2 log S
    double rho = 1.0;                     // S_plus / S_minus
    bool reaches_junction_lines = false;
    double S1 = 0.0, S2 = 0.0;            // junction radii when they exist
    double eta = 0.0, eta_bar = 0.0;      // S2 / S_minus, S1 / S_minus
};

inline EnergyLevel energy_level_from_S_minus(double S_minus) {
    if (!(S_minus > 0.0 && S_minus <= 1.0))
        throw std::invalid_argument("energy_level_from_S_minus: requires S_minus in (0, 1]");
    EnergyLevel lv;
    lv.S_minus = S_minus;
    lv.E = S_minus * S_minus - 2.0 * std::log(S_minus);
    const double E = lv.E;
    lv.S_plus = S_minus == 1.0 ? 1.0
                               : bisect([E](double s) { return s * s - 2.0 * std::log(s) - E; },
                                        1.0, 2.0 + std::sqrt(E), 1e-14);
    lv.rho = lv.S_plus / lv.S_minus;
    const auto branches = eta_from_h(S_minus);
    if (branches.exists) {
        lv.reaches_junction_lines = true;
        lv.eta_bar = branches.lower;
        lv.eta = branches.upper;
        lv.S1 = lv.eta_bar * S_minus;
        lv.S2 = lv.eta * S_minus;
    }
    return lv;
}

// ------------------------------------------------------------------
// bundled report for the command line and the acceptance gate
// ------------------------------------------------------------------

struct EnergyReport {
    double eta0_lo = 0.0, eta0_hi = 0.0;  // enclosing bracket from sign checks
    double eta0_value = 0.0;
    double psi_eta0 = 0.0;
    double psi_riemann_bound = 0.0;  // psi_upper_bound_riemann(1.33652, 3)
    double eta_star_value = 0.0;
    double sigma_max = 0.0;  // max of Sigma on a grid over [eta0, 1.9]
    double theta_near_one = 0.0;   // theta(1 + 1e-4)
    double theta_large = 0.0;      // theta(1e3)
    double theta_limit = 0.0;      // extrapolated rho -> inf value
    int psi_sign_changes = 0;      // of Psi - pi/3 on the (1, 1.9] grid
};

inline EnergyReport energy_report(int sigma_grid = 1000, int psi_grid = 10000) {
    EnergyReport r;
    r.eta0_value = eta0();
    r.eta0_lo = 1.3365;
    r.eta0_hi = 1.33652;
    if (!(A_of_eta(r.eta0_lo) < 0.0 && A_of_eta(r.eta0_hi) > 0.0))
        throw std::runtime_error("energy_report: eta0 bracket sign check failed");
    r.psi_eta0 = psi(r.eta0_value);
    r.psi_riemann_bound = psi_upper_bound_riemann(1.33652, 3);
    r.eta_star_value = eta_star();
    r.sigma_max = -inf;
    for (int i = 0; i < sigma_grid; ++i) {
        const double e = r.eta0_value + (1.9 - r.eta0_value) * i / (sigma_grid - 1.0);
        r.sigma_max = std::max(r.sigma_max, sigma(std::max(e, r.eta0_value), 1e-10));
    }
    int changes = 0;
    double prev = psi(1.0 + 1e-6, 1e-10) - pi / 3.0;
    for (int i = 1; i < psi_grid; ++i) {
        const double e = 1.0 + 1e-6 + (1.9 - 1.0 - 1e-6) * i / (psi_grid - 1.0);
        const double v = psi(e, 1e-10) - pi / 3.0;
        if ((v > 0.0) != (prev > 0.0)) ++changes;
        prev = v;
    }
    r.psi_sign_changes = changes;
    r.theta_near_one = theta(1.0 + 1e-4);
    r.theta_large = theta(1e3);
    r.theta_limit = theta_limit_extrapolated();
    return r;
}

}  // namespace lensflow
