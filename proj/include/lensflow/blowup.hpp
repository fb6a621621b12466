#pragma once
// Parabolic dilations of a flow trajectory, the Gaussian density of a
// network, and convergence diagnostics against the self-similar lens.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "classify.hpp"
#include "flow.hpp"

namespace lensflow {

// ------------------------------------------------------------------
// dilation family: lambda * (M_t - x0) sampled at t = tau / lambda^2 + T
// ------------------------------------------------------------------

struct RescaledSequence {
    std::vector<double> lambdas;
    std::vector<NetworkSnapshot> snapshots;  // all at the same rescaled time tau
    std::vector<double> hausdorff_to_limit;
    std::vector<double> density_gap_rms;
    double tau = -0.5;
    ExtinctionEstimate extinction;  // the center the dilations used
};

namespace detail {

inline Vec2 dilate(Vec2 q, double lambda, double x0) {
    return {lambda * (q.x - x0), lambda * q.y};
}

// linear blend in time between stored snapshots; all snapshots of one run
// share the node count, so node i tracks a fixed relative abscissa
inline GridProfile interpolate_in_time(const FlowTrajectory& traj, double t) {
    const auto& s = traj.snapshots;
    if (s.empty()) throw std::invalid_argument("rescale: empty trajectory");
    if (!(t >= s.front().time && t <= s.back().time))
        throw std::domain_error("rescale: requested time outside the stored trajectory");
    size_t k = 1;
    while (k + 1 < s.size() && s[k].time < t) ++k;
    const GridProfile& p0 = s[k - 1];
    const GridProfile& p1 = s[k];
    if (p0.x.size() != p1.x.size())
        throw std::invalid_argument("rescale: snapshots disagree on node count");
    const double span = p1.time - p0.time;
    const double w = span > 0.0 ? std::clamp((t - p0.time) / span, 0.0, 1.0) : 0.0;
    GridProfile out = p0;
    out.time = t;
    out.a = (1.0 - w) * p0.a + w * p1.a;
    out.b = (1.0 - w) * p0.b + w * p1.b;
    for (size_t i = 0; i < out.x.size(); ++i) {
        out.x[i] = (1.0 - w) * p0.x[i] + w * p1.x[i];
        out.u[i] = (1.0 - w) * p0.u[i] + w * p1.u[i];
    }
    out.x.front() = out.a;
    out.x.back() = out.b;
    return out;
}

inline NetworkSnapshot dilate_network(NetworkSnapshot s, double lambda, double x0) {
    for (auto* arc : {&s.upper_arc, &s.lower_arc})
        for (auto& q : *arc) q = dilate(q, lambda, x0);
    for (auto* ray : {&s.left_ray, &s.right_ray}) ray->base = dilate(ray->base, lambda, x0);
    for (auto& j : s.junctions) j.point = dilate(j.point, lambda, x0);
    return s;
}

// rms of kappa + <y, nu> / (2 tau) over the rescaled loop, computed from the
// unscaled profile; the half-lines lie on the axis and contribute zero
inline double shrinker_gap_rms(const GridProfile& p, double lambda, double x0, double tau) {
    const auto kap = curvature(p);
    const auto slo = slopes(p);
    const double dx = (p.b - p.a) / p.segments();
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < p.x.size(); ++i) {
        const double root = std::sqrt(1.0 + slo[i] * slo[i]);
        const double inner = lambda * (p.u[i] - (p.x[i] - x0) * slo[i]) / root;
        const double gap = kap[i] / lambda + inner / (2.0 * tau);
        const double w = (i == 0 || i + 1 == p.x.size()) ? 0.5 : 1.0;
        num += w * gap * gap * root * dx;
        den += w * root * dx;
    }
    return std::sqrt(num / den);
}

}  // namespace detail

inline NetworkSnapshot rescale(const FlowTrajectory& traj, double lambda, double x0, double T,
                               double tau) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale: requires lambda > 0");
    if (!(tau < 0.0)) throw std::invalid_argument("rescale: requires tau < 0");
    if (!std::isfinite(T)) throw std::invalid_argument("rescale: extinction time not estimated");
    const double t = tau / (lambda * lambda) + T;
    const GridProfile p = detail::interpolate_in_time(traj, t);
    return detail::dilate_network(lens_network(p), lambda, x0);
}

// the dilation applied to a whole trajectory; times map to lambda^2 (t - T),
// so composing two dilations equals one with the product scale
inline FlowTrajectory rescale_trajectory(const FlowTrajectory& traj, double lambda, double x0,
                                         double T) {
    if (!(lambda > 0.0)) throw std::invalid_argument("rescale: requires lambda > 0");
    FlowTrajectory out = traj;
    for (auto& p : out.snapshots) {
        p.time = lambda * lambda * (p.time - T);
        p.a = lambda * (p.a - x0);
        p.b = lambda * (p.b - x0);
        for (auto& x : p.x) x = lambda * (x - x0);
        for (auto& u : p.u) u *= lambda;
    }
    for (auto& d : out.diagnostics) {
        d.time = lambda * lambda * (d.time - T);
        d.area *= lambda * lambda;
        d.length *= lambda;
        d.kappa_min /= lambda;
        d.kappa_max /= lambda;
        d.a = lambda * (d.a - x0);
        d.b = lambda * (d.b - x0);
    }
    out.extinction.T_hat = lambda * lambda * (out.extinction.T_hat - T);
    out.extinction.x0_hat = lambda * (out.extinction.x0_hat - x0);
    out.extinction.area_fit_rms *= lambda * lambda;
    return out;
}

// ------------------------------------------------------------------
// Gaussian density of a network about (x0, 0) at backward time T - t
// ------------------------------------------------------------------

struct GaussianDensity {
    double value = 0.0;
    double truncation_radius = 0.0;  // polyline quadrature cut about the center
    double tail_bound = 0.0;         // bound on the mass beyond the cut
};

inline GaussianDensity gaussian_density(const NetworkSnapshot& net, double x0, double T, double t,
                                        double tail = 1e-12) {
    if (!(t < T)) throw std::invalid_argument("gaussian_density: requires t < T");
    const double sigma = T - t;
    const double scale = 1.0 / std::sqrt(4.0 * pi * sigma);
    const Vec2 c{x0, 0.0};
    GaussianDensity out;
    out.truncation_radius = std::sqrt(4.0 * sigma * std::log(1.0 / tail));

    auto rho = [&](Vec2 q) {
        const Vec2 d = q - c;
        return scale * std::exp(-dot(d, d) / (4.0 * sigma));
    };
    for (const auto* arc : {&net.upper_arc, &net.lower_arc}) {
        for (size_t i = 0; i + 1 < arc->size(); ++i) {
            const Vec2 p0 = (*arc)[i], p1 = (*arc)[i + 1];
            const double len = norm(p1 - p0);
            if (norm(p0 - c) > out.truncation_radius && norm(p1 - c) > out.truncation_radius) {
                const double gap = std::max(0.0, out.truncation_radius - 0.5 * len);
                out.tail_bound += len * scale * std::exp(-gap * gap / (4.0 * sigma));
                continue;
            }
            out.value += 0.5 * len * (rho(p0) + rho(p1));
        }
    }
    // straight half-lines in closed form: with m = |B - c| and
    // p = <d, B - c>, the ray integral is
    // (1/2) exp(-(m^2 - p^2) / (4 sigma)) erfc(p / (2 sqrt(sigma)))
    for (const auto* ray : {&net.left_ray, &net.right_ray}) {
        const Vec2 off = ray->base - c;
        const Vec2 dir = normalized(ray->dir);
        const double proj = dot(dir, off);
        const double perp2 = std::max(0.0, dot(off, off) - proj * proj);
        out.value += 0.5 * std::exp(-perp2 / (4.0 * sigma)) *
                     std::erfc(proj / (2.0 * std::sqrt(sigma)));
    }
    return out;
}

// ------------------------------------------------------------------
// extinction data and the full convergence diagnostic
// ------------------------------------------------------------------

inline ExtinctionEstimate extinction_point_estimate(const FlowTrajectory& traj) {
    std::vector<double> t, A, mid;
    for (const auto& d : traj.diagnostics) {
        t.push_back(d.time);
        A.push_back(d.area);
        mid.push_back(0.5 * (d.a + d.b));
    }
    return extinction_estimate_from_series(t, A, mid);
}

inline RescaledSequence convergence_report(const FlowTrajectory& traj,
                                           const std::vector<double>& lambdas, double tau = -0.5) {
    if (lambdas.empty()) throw std::invalid_argument("convergence report: no scales given");
    if (!(tau < 0.0)) throw std::invalid_argument("convergence report: requires tau < 0");
    if (traj.diagnostics.empty())
        throw std::invalid_argument("convergence report: trajectory has no diagnostics");
    if (!(traj.diagnostics.back().area < 0.05 * traj.diagnostics.front().area))
        throw std::domain_error("convergence report: run must approach extinction");
    for (size_t i = 1; i < lambdas.size(); ++i)
        if (!(lambdas[i] > lambdas[i - 1]))
            throw std::invalid_argument("convergence report: scales must increase");

    RescaledSequence seq;
    seq.tau = tau;
    seq.lambdas = lambdas;
    seq.extinction = extinction_point_estimate(traj);
    const double T = seq.extinction.T_hat;
    const double x0 = seq.extinction.x0_hat;
    for (double l : lambdas)
        if (!(l * l * T > 1.0))
            throw std::invalid_argument("convergence report: requires lambda^2 T > 1");

    // reference loop: the lens that is fixed under the dilation at tau = -1/2
    const auto lens = find_symmetric_lens(1e-10);
    ShrinkerParams sp;
    sp.H = lens.H;
    const auto limit = build_self_similar_network(ShrinkerKind::lens, sp).network;
    Polyline limit_loop;
    {
        const Polyline full = network_loop(limit);
        for (size_t i = 0; i < full.size(); i += 8) limit_loop.push_back(full[i]);
        limit_loop.push_back(full.front());  // close
    }

    const int m = static_cast<int>(lambdas.size());
    seq.snapshots.resize(m);
    seq.hausdorff_to_limit.resize(m);
    seq.density_gap_rms.resize(m);
    parallel_for(m, [&](int i) {
        const double l = lambdas[i];
        const double t = tau / (l * l) + T;
        const GridProfile p = detail::interpolate_in_time(traj, t);
        seq.snapshots[i] = detail::dilate_network(lens_network(p), l, x0);
        Polyline loop = network_loop(seq.snapshots[i]);
        loop.push_back(loop.front());
        seq.hausdorff_to_limit[i] = hausdorff_distance(loop, limit_loop);
        seq.density_gap_rms[i] = detail::shrinker_gap_rms(p, l, x0, tau);
    });
    return seq;
}

}  // namespace lensflow
