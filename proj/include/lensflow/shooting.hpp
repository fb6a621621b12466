#pragma once
// shooting.hpp: self-similar profile ODE u'' = (1 + u'^2)(x u' - u) shot from
// the apex (u(0) = h, u'(0) = 0); bisection over h locates the symmetric lens
// height H where the contact slope is exactly -sqrt(3).

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "numerics.hpp"
#include "ode.hpp"

namespace lensflow {

enum class ShotOutcome { hit, undershoot, overshoot, blowup };

struct SelfSimilarProfile {
    double h = 0.0;
    std::vector<std::array<double, 3>> samples;  // (x, u, u')
    double contact_x = std::numeric_limits<double>::quiet_NaN();
    double contact_slope = std::numeric_limits<double>::quiet_NaN();
    double energy = 0.0;  // E^u, constant along the profile
    ShotOutcome outcome = ShotOutcome::undershoot;
};

// E^u = <F, nu> exp(-|F|^2 / 2) for the graph point (x, u) with slope u'
inline double energy_u(double x, double u, double u_prime) {
    return (u - x * u_prime) / std::sqrt(1.0 + u_prime * u_prime) *
           std::exp(-0.5 * (x * x + u * u));
}

namespace detail {

inline OdeState<2> selfsim_rhs(double x, const OdeState<2>& y) {
    const double u = y[0], p = y[1];
    return {p, (1.0 + p * p) * (x * p - u)};
}

}  // namespace detail

inline constexpr double shooting_slope_cap = 50.0;
inline constexpr double shooting_x_cap = 1.5;  // contact exists in (0, sqrt(2)]

inline SelfSimilarProfile integrate_profile(double h, double dx = 1e-4, bool keep_samples = true,
                                            double hit_tol = 1e-10) {
    if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("integrate_profile: h outside (0,1]");
    if (!(dx > 0.0 && dx <= 1e-2)) throw std::invalid_argument("integrate_profile: bad step");
    SelfSimilarProfile prof;
    prof.h = h;
    prof.energy = h * std::exp(-0.5 * h * h);

    double x = 0.0;
    OdeState<2> y = {h, 0.0};
    const auto rhs = [](double t, const OdeState<2>& s) { return detail::selfsim_rhs(t, s); };
    if (keep_samples) prof.samples.push_back({x, y[0], y[1]});

    while (x < shooting_x_cap) {
        const OdeState<2> y2 = rk4_step<2>(rhs, x, y, dx);
        const double x2 = x + dx;

        const bool crossed_zero = y2[0] <= 0.0;
        const bool crossed_slope = y2[1] <= -sqrt3;
        if (crossed_zero || crossed_slope) {
            double s_u = 2.0, s_p = 2.0;
            if (crossed_zero)
                s_u = event_fraction<2>(rhs, [](double, const OdeState<2>& s) { return s[0]; }, x,
                                        y, dx);
            if (crossed_slope)
                s_p = event_fraction<2>(
                    rhs, [](double, const OdeState<2>& s) { return s[1] + sqrt3; }, x, y, dx);
            const double s = std::min(s_u, s_p);
            const OdeState<2> ye = rk4_step<2>(rhs, x, y, s * dx);
            const double xe = x + s * dx;
            if (keep_samples) prof.samples.push_back({xe, ye[0], ye[1]});
            if (s_u <= s_p) {
                prof.contact_x = xe;
                prof.contact_slope = ye[1];
                prof.outcome = std::abs(ye[1] + sqrt3) < hit_tol ? ShotOutcome::hit
                               : ye[1] > -sqrt3                  ? ShotOutcome::undershoot
                                                                 : ShotOutcome::overshoot;
            } else {
                // slope reached -sqrt(3) while u still positive
                prof.outcome = ye[0] < hit_tol ? ShotOutcome::hit : ShotOutcome::overshoot;
                if (prof.outcome == ShotOutcome::hit) {
                    prof.contact_x = xe;
                    prof.contact_slope = ye[1];
                }
            }
            return prof;
        }
        if (std::abs(y2[1]) > shooting_slope_cap) {
            prof.outcome = ShotOutcome::blowup;
            return prof;
        }
        x = x2;
        y = y2;
        if (keep_samples) prof.samples.push_back({x, y[0], y[1]});
    }
    prof.outcome = ShotOutcome::undershoot;  // no contact before the domain cap
    return prof;
}

// ------------------------------------------------------------------
// symmetric lens: H = sup of heights whose contact stays shallower
// than 60 degrees; bisection over the undershoot/overshoot fence
// ------------------------------------------------------------------

struct SymmetricLens {
    double H = 0.0;
    double b = 0.0;  // contact abscissa
    SelfSimilarProfile profile;
};

inline SymmetricLens find_symmetric_lens(double tol = 1e-10, double dx = 1e-4) {
    if (!(tol >= 1e-12)) throw std::invalid_argument("find_symmetric_lens: tol below 1e-12");
    double lo = 0.55, hi = 0.99;
    auto is_under = [&](double h) {
        const auto prof = integrate_profile(h, dx, false, 0.0);
        if (prof.outcome == ShotOutcome::blowup)
            throw std::runtime_error("find_symmetric_lens: unexpected blowup in bracket");
        return prof.outcome == ShotOutcome::undershoot;
    };
    int widen = 0;
    while (!is_under(lo)) {
        lo = 0.5 * lo;
        if (++widen > 6) throw std::runtime_error("find_symmetric_lens: no undershoot bracket");
    }
    widen = 0;
    while (is_under(hi)) {
        hi = 0.5 * (hi + 1.0);
        if (++widen > 6) throw std::runtime_error("find_symmetric_lens: no overshoot bracket");
    }
    while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon()) {
        const double mid = 0.5 * (lo + hi);
        if (is_under(mid))
            lo = mid;
        else
            hi = mid;
    }
    SymmetricLens lens;
    lens.H = 0.5 * (lo + hi);
    lens.profile = integrate_profile(lens.H, dx, true, tol);
    if (!(std::abs(lens.profile.contact_slope + sqrt3) < tol))
        throw std::runtime_error("find_symmetric_lens: contact-slope residual above tolerance");
    lens.profile.outcome = ShotOutcome::hit;
    lens.b = lens.profile.contact_x;
    return lens;
}

// dense mirror samples on [-b, b] for initial-data construction
inline std::vector<std::array<double, 2>> selfsim_reference(const SelfSimilarProfile& prof) {
    if (prof.samples.empty() || !(prof.contact_x > 0.0))
        throw std::invalid_argument("selfsim_reference: profile has no contact");
    std::vector<std::array<double, 2>> ref;
    ref.reserve(2 * prof.samples.size());
    for (size_t i = prof.samples.size(); i-- > 1;)
        ref.push_back({-prof.samples[i][0], std::max(prof.samples[i][1], 0.0)});
    for (const auto& s : prof.samples) ref.push_back({s[0], std::max(s[1], 0.0)});
    ref.front()[1] = 0.0;
    ref.back()[1] = 0.0;
    return ref;
}

// ------------------------------------------------------------------
// barrier curves u(x) <= h q(x) excluding shallow shooting heights
// ------------------------------------------------------------------

struct BarrierBounds {
    std::function<double(double)> quartic_bound;  // h (1 - x^2/2 - x^4/24)
    std::function<double(double)> refined_bound;  // degree-10 refinement
    double B1 = 0.0;                              // sqrt(-6 + 2 sqrt(15)), root of the quartic
    double quartic_root = 0.0;
    double refined_root = 0.0;
};

inline BarrierBounds barrier_bounds(double h) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("barrier_bounds: h outside (0,1)");
    BarrierBounds bb;
    bb.B1 = std::sqrt(-6.0 + 2.0 * std::sqrt(15.0));
    const double h2 = h * h;
    auto quartic_q = [](double x) {
        const double x2 = x * x;
        return 1.0 - 0.5 * x2 - x2 * x2 / 24.0;
    };
    auto refined_q = [h2](double x) {
        const double x2 = x * x;
        const double x4 = x2 * x2;
        return 1.0 - (0.5 * x2 + (0.5 + h2) * x4 / 12.0 + h2 * x4 * x2 / 36.0 +
                      h2 * x4 * x4 / 288.0 + h2 * x4 * x4 * x2 / 6480.0);
    };
    bb.quartic_bound = [h, quartic_q](double x) { return h * quartic_q(x); };
    bb.refined_bound = [h, refined_q](double x) { return h * refined_q(x); };
    bb.quartic_root = bisect([&](double x) { return quartic_q(x); }, 0.5, 2.0, 1e-14);
    bb.refined_root = bisect([&](double x) { return refined_q(x); }, 0.5, 2.0, 1e-14);
    return bb;
}

}  // namespace lensflow
