#pragma once
// flow.hpp: time integration of the lens free boundary problem
// u_t = u_xx / (1 + u_x^2) on (a(t), b(t)), u = 0 and u_x = +-sqrt(3) at the
// contacts. The grid is fixed in xi = (x - a)/(b - a); the transformed
// equation gains the advection term ((1 - xi) a' + xi b') u_x. Contact
// second derivatives use the one-sided cubic stencil with the slope built in,
// which feeds the boundary speeds a' = -u_xx(a)/(4 sqrt(3)),
// b' = u_xx(b)/(4 sqrt(3)).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "numerics.hpp"

namespace lensflow {

enum class Scheme { explicit_euler, semi_implicit };

struct FlowConfig {
    int n = 128;
    double cfl = 0.4;
    double t_end = inf;
    double area_floor = 0.01;
    Scheme scheme = Scheme::explicit_euler;
    int snapshot_stride = 50;
    int ratio_cap = 128;  // arc vertex cap for the distance-ratio diagnostic
};

inline void validate(const FlowConfig& c) {
    if (c.n < 32) throw std::invalid_argument("flow config: n < 32");
    if (!(c.cfl > 0.0 && c.cfl <= 0.5)) throw std::invalid_argument("flow config: cfl outside (0, 0.5]");
    if (c.snapshot_stride < 1) throw std::invalid_argument("flow config: snapshot_stride < 1");
    if (!(c.area_floor > 0.0)) throw std::invalid_argument("flow config: area_floor <= 0");
}

struct ExtinctionEstimate {
    // NaN until estimated, so downstream users can detect a missing fit
    double T_hat = std::numeric_limits<double>::quiet_NaN();
    double x0_hat = std::numeric_limits<double>::quiet_NaN();
    double area_slope = 0.0;    // least-squares slope over the whole run
    double area_fit_rms = 0.0;  // residual of that fit
};

struct FlowTrajectory {
    std::vector<GridProfile> snapshots;
    std::vector<Diagnostics> diagnostics;
    ExtinctionEstimate extinction;
    bool reached_extinction = false;
};

// ------------------------------------------------------------------
// boundary speeds from the one-sided cubic with prescribed slope
// ------------------------------------------------------------------

namespace detail {

inline double grid_spacing(const GridProfile& p) {
    const double dx = (p.b - p.a) / p.segments();
    if (std::abs((p.x[1] - p.x[0]) - dx) > 1e-10 * (p.b - p.a))
        throw std::invalid_argument("flow: requires a uniform grid");
    return dx;
}

inline double contact_uxx_left(const GridProfile& p, double dx) {
    return (8.0 * p.u[1] - p.u[2] - 6.0 * sqrt3 * dx) / (2.0 * dx * dx);
}

inline double contact_uxx_right(const GridProfile& p, double dx) {
    const size_t m = p.u.size();
    return (8.0 * p.u[m - 2] - p.u[m - 3] - 6.0 * sqrt3 * dx) / (2.0 * dx * dx);
}

inline void check_contact_slopes(const GridProfile& p, double dx) {
    double du, ddu;
    one_sided_derivatives(&p.x[0], &p.u[0], du, ddu);
    // input sanity gate, not an accuracy bound: the discrete slope error is
    // scale-invariant along a shrinking run, so the floor must not tighten
    // as dx shrinks with the domain
    const double tol = std::max(0.02, 2.0 * dx);
    if (std::abs(du - sqrt3) > tol)
        throw std::runtime_error("flow: left contact slope drifted from sqrt(3)");
    const size_t m = p.x.size();
    double xr[4] = {p.x[m - 1], p.x[m - 2], p.x[m - 3], p.x[m - 4]};
    double ur[4] = {p.u[m - 1], p.u[m - 2], p.u[m - 3], p.u[m - 4]};
    one_sided_derivatives(xr, ur, du, ddu);
    if (std::abs(-du - sqrt3) > tol)
        throw std::runtime_error("flow: right contact slope drifted from sqrt(3)");
}

}  // namespace detail

struct BoundarySpeed {
    double da_dt = 0.0;
    double db_dt = 0.0;
};

inline BoundarySpeed boundary_speed(const GridProfile& p) {
    validate(p);
    const double dx = detail::grid_spacing(p);
    detail::check_contact_slopes(p, dx);
    BoundarySpeed s;
    s.da_dt = -detail::contact_uxx_left(p, dx) / (4.0 * sqrt3);
    s.db_dt = detail::contact_uxx_right(p, dx) / (4.0 * sqrt3);
    return s;
}

// ------------------------------------------------------------------
// single step
// ------------------------------------------------------------------

inline double stable_dt(const GridProfile& p, double cfl) {
    const double dx = detail::grid_spacing(p);
    double dt = inf;
    for (size_t i = 1; i + 1 < p.u.size(); ++i) {
        const double ux = (p.u[i + 1] - p.u[i - 1]) / (2.0 * dx);
        dt = std::min(dt, cfl * dx * dx * (1.0 + ux * ux));
    }
    const BoundarySpeed s = boundary_speed(p);
    const double vmax = std::max(std::abs(s.da_dt), std::abs(s.db_dt));
    if (vmax > 0.0) dt = std::min(dt, 0.5 * dx / vmax);
    return dt;
}

namespace detail {

inline void advance_domain(GridProfile& p, const BoundarySpeed& s, double dt) {
    p.a += dt * s.da_dt;
    p.b += dt * s.db_dt;
    if (!(p.b - p.a > 0.0)) throw std::runtime_error("flow: domain collapsed during step");
    const int n = p.segments();
    for (int i = 0; i <= n; ++i) p.x[i] = p.a + (p.b - p.a) * i / n;
    p.x.front() = p.a;
    p.x.back() = p.b;
}

}  // namespace detail

inline GridProfile step_explicit(const GridProfile& p, double dt) {
    validate(p);
    const double dx = detail::grid_spacing(p);
    const BoundarySpeed s = boundary_speed(p);
    const int n = p.segments();
    GridProfile q = p;
    for (int i = 1; i < n; ++i) {
        const double ux = (p.u[i + 1] - p.u[i - 1]) / (2.0 * dx);
        const double uxx = (p.u[i + 1] - 2.0 * p.u[i] + p.u[i - 1]) / (dx * dx);
        const double xi = static_cast<double>(i) / n;
        const double v = (1.0 - xi) * s.da_dt + xi * s.db_dt;
        q.u[i] = p.u[i] + dt * (uxx / (1.0 + ux * ux) + v * ux);
        if (!std::isfinite(q.u[i])) throw std::runtime_error("flow: instability (non-finite u)");
        if (q.u[i] < 0.0) q.u[i] = 0.0;
    }
    detail::advance_domain(q, s, dt);
    q.time = p.time + dt;
    return q;
}

// diffusion implicit with the coefficient 1/(1 + u_x^2) frozen at the old
// state; advection and boundary motion explicit
inline GridProfile step_semi_implicit(const GridProfile& p, double dt) {
    validate(p);
    const double dx = detail::grid_spacing(p);
    const BoundarySpeed s = boundary_speed(p);
    const int n = p.segments();
    std::vector<double> sub(n - 1, 0.0), diag(n - 1, 0.0), sup(n - 1, 0.0), rhs(n - 1, 0.0);
    for (int i = 1; i < n; ++i) {
        const double ux = (p.u[i + 1] - p.u[i - 1]) / (2.0 * dx);
        const double r = dt / ((1.0 + ux * ux) * dx * dx);
        const double xi = static_cast<double>(i) / n;
        const double v = (1.0 - xi) * s.da_dt + xi * s.db_dt;
        sub[i - 1] = -r;
        diag[i - 1] = 1.0 + 2.0 * r;
        sup[i - 1] = -r;
        rhs[i - 1] = p.u[i] + dt * v * ux;
    }
    solve_tridiagonal(sub, diag, sup, rhs);
    GridProfile q = p;
    for (int i = 1; i < n; ++i) {
        q.u[i] = std::max(rhs[i - 1], 0.0);
        if (!std::isfinite(q.u[i])) throw std::runtime_error("flow: instability (non-finite u)");
    }
    detail::advance_domain(q, s, dt);
    q.time = p.time + dt;
    return q;
}

inline GridProfile step(const GridProfile& p, double dt, Scheme scheme = Scheme::explicit_euler) {
    return scheme == Scheme::explicit_euler ? step_explicit(p, dt) : step_semi_implicit(p, dt);
}

// ------------------------------------------------------------------
// extinction estimators
// ------------------------------------------------------------------

// T from the known slope -4pi/3 over the trailing window; x0 from the
// midpoint trend evaluated at T
inline ExtinctionEstimate extinction_estimate_from_series(const std::vector<double>& times,
                                                          const std::vector<double>& areas,
                                                          const std::vector<double>& midpoints,
                                                          double window_fraction = 0.1) {
    const size_t m = times.size();
    if (areas.size() != m || midpoints.size() != m || m < 10)
        throw std::invalid_argument("extinction estimate: need >= 10 snapshots");
    ExtinctionEstimate est;
    const LinearFit full = least_squares_line(times, areas);
    est.area_slope = full.slope;
    est.area_fit_rms = full.residual_rms;
    size_t first = m - std::max<size_t>(static_cast<size_t>(window_fraction * m), 10);
    if (first > m - 10) first = m - 10;
    double acc = 0.0;
    for (size_t i = first; i < m; ++i) acc += areas[i] + (4.0 * pi / 3.0) * times[i];
    est.T_hat = 3.0 * (acc / (m - first)) / (4.0 * pi);
    std::vector<double> tw(times.begin() + first, times.end());
    std::vector<double> mw(midpoints.begin() + first, midpoints.end());
    const LinearFit mid = least_squares_line(tw, mw);
    est.x0_hat = mid.intercept + mid.slope * est.T_hat;
    return est;
}

// ------------------------------------------------------------------
// full run
// ------------------------------------------------------------------

inline FlowTrajectory evolve(const GridProfile& initial, const FlowConfig& config) {
    validate(config);
    validate(initial);
    FlowTrajectory traj;
    GridProfile state = initial;
    const double width0 = initial.b - initial.a;
    auto record = [&](const GridProfile& p) {
        traj.snapshots.push_back(p);
        traj.diagnostics.push_back(compute_diagnostics(p, config.ratio_cap));
    };
    record(state);
    long steps_since_snapshot = 0;
    while (true) {
        if (state.time >= config.t_end) break;
        if (enclosed_area(state) <= config.area_floor) break;
        if (state.b - state.a < 1e-3 * width0) {
            traj.reached_extinction = true;
            break;
        }
        double dt = stable_dt(state, config.cfl);
        if (config.scheme == Scheme::semi_implicit) dt *= 4.0;
        if (state.time + dt > config.t_end) dt = config.t_end - state.time;
        state = step(state, dt, config.scheme);
        if (++steps_since_snapshot >= config.snapshot_stride) {
            record(state);
            steps_since_snapshot = 0;
        }
    }
    if (steps_since_snapshot != 0 || traj.snapshots.size() == 1) record(state);
    if (traj.snapshots.size() >= 10) {
        std::vector<double> t, A, mid;
        for (const auto& d : traj.diagnostics) {
            t.push_back(d.time);
            A.push_back(d.area);
            mid.push_back(0.5 * (d.a + d.b));
        }
        traj.extinction = extinction_estimate_from_series(t, A, mid);
    }
    return traj;
}

// ------------------------------------------------------------------
// exact references
// ------------------------------------------------------------------

inline double grim_reaper_reference(double x, double t) {
    if (!(std::abs(x) < 0.5 * pi))
        throw std::invalid_argument("grim_reaper_reference: |x| >= pi/2");
    return std::log(std::cos(x)) - t;
}

// interior stepper with Dirichlet endpoint values pinned to bc(x, t); used by
// translating-solution convergence tests on a fixed domain
inline void step_interior_dirichlet(const std::vector<double>& x, std::vector<double>& u, double t,
                                    double dt, const std::function<double(double, double)>& bc) {
    const size_t m = x.size();
    if (u.size() != m || m < 3) throw std::invalid_argument("step_interior_dirichlet: bad input");
    std::vector<double> next(m);
    for (size_t i = 1; i + 1 < m; ++i) {
        const double ux = (u[i + 1] - u[i - 1]) / (x[i + 1] - x[i - 1]);
        const double dxl = x[i] - x[i - 1], dxr = x[i + 1] - x[i];
        const double uxx =
            2.0 * ((u[i + 1] - u[i]) / dxr - (u[i] - u[i - 1]) / dxl) / (dxl + dxr);
        next[i] = u[i] + dt * uxx / (1.0 + ux * ux);
    }
    next.front() = bc(x.front(), t + dt);
    next.back() = bc(x.back(), t + dt);
    u = next;
}

}  // namespace lensflow
