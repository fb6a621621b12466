#pragma once
// geometry.hpp: discrete-curve data types and differential-geometric
// measurements shared by all other modules. Curves are graphs over an
// interval plus mirror symmetry and straight rays; no general immersed
// curve support.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace lensflow {

// ------------------------------------------------------------------
// plane primitives
// ------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 p, Vec2 q) { return {p.x + q.x, p.y + q.y}; }
inline Vec2 operator-(Vec2 p, Vec2 q) { return {p.x - q.x, p.y - q.y}; }
inline Vec2 operator*(double s, Vec2 p) { return {s * p.x, s * p.y}; }
inline double dot(Vec2 p, Vec2 q) { return p.x * q.x + p.y * q.y; }
inline double cross(Vec2 p, Vec2 q) { return p.x * q.y - p.y * q.x; }
inline double norm(Vec2 p) { return std::hypot(p.x, p.y); }
inline Vec2 normalized(Vec2 p) {
    const double m = norm(p);
    if (m == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {p.x / m, p.y / m};
}

using Polyline = std::vector<Vec2>;

inline double polyline_length(const Polyline& p, bool closed = false) {
    double s = 0.0;
    for (size_t i = 1; i < p.size(); ++i) s += norm(p[i] - p[i - 1]);
    if (closed && p.size() > 2) s += norm(p.front() - p.back());
    return s;
}

struct Ray {
    Vec2 base;
    Vec2 dir;  // unit
};

struct Junction {
    Vec2 point;
    std::array<Vec2, 3> tangents;  // unit, pointing away from the junction
};

struct NetworkSnapshot {
    Polyline upper_arc;
    Polyline lower_arc;
    Ray left_ray;
    Ray right_ray;
    std::array<Junction, 2> junctions;  // left, right
    bool symmetric = true;
};

// ------------------------------------------------------------------
// flow state: graph u over [a, b] with zero boundary values
// ------------------------------------------------------------------

struct GridProfile {
    std::vector<double> x;
    std::vector<double> u;
    double a = 0.0;
    double b = 0.0;
    double time = 0.0;

    int segments() const { return static_cast<int>(x.size()) - 1; }
};

inline void validate(const GridProfile& p, int min_segments = 4) {
    const size_t m = p.x.size();
    if (p.u.size() != m || static_cast<int>(m) < min_segments + 1)
        throw std::invalid_argument("profile: too few nodes");
    if (!(p.a < p.b)) throw std::invalid_argument("profile: requires a < b");
    if (p.x.front() != p.a || p.x.back() != p.b)
        throw std::invalid_argument("profile: endpoints must sit at a and b");
    const double floor_dx = 64.0 * std::numeric_limits<double>::epsilon() * (p.b - p.a);
    for (size_t i = 1; i < m; ++i)
        if (!(p.x[i] - p.x[i - 1] > floor_dx)) throw std::invalid_argument("profile: invalid grid");
}

namespace detail {

// Newton divided differences through four nodes; first/second derivative at x0.
inline void one_sided_derivatives(const double* xs, const double* us, double& du, double& ddu) {
    const double f01 = (us[1] - us[0]) / (xs[1] - xs[0]);
    const double f12 = (us[2] - us[1]) / (xs[2] - xs[1]);
    const double f23 = (us[3] - us[2]) / (xs[3] - xs[2]);
    const double f012 = (f12 - f01) / (xs[2] - xs[0]);
    const double f123 = (f23 - f12) / (xs[3] - xs[1]);
    const double f0123 = (f123 - f012) / (xs[3] - xs[0]);
    const double d1 = xs[0] - xs[1], d2 = xs[0] - xs[2];
    du = f01 + f012 * d1 + f0123 * d1 * d2;
    ddu = 2.0 * f012 + 2.0 * (d1 + d2) * f0123;
}

inline void interior_derivatives(const GridProfile& p, size_t i, double& du, double& ddu) {
    const double h1 = p.x[i] - p.x[i - 1];
    const double h2 = p.x[i + 1] - p.x[i];
    const double sL = (p.u[i] - p.u[i - 1]) / h1;
    const double sR = (p.u[i + 1] - p.u[i]) / h2;
    du = (sL * h2 + sR * h1) / (h1 + h2);
    ddu = 2.0 * (sR - sL) / (h1 + h2);
}

}  // namespace detail

inline std::vector<double> slopes(const GridProfile& p) {
    validate(p);
    const size_t m = p.x.size();
    std::vector<double> du(m);
    double unused;
    detail::one_sided_derivatives(&p.x[0], &p.u[0], du[0], unused);
    for (size_t i = 1; i + 1 < m; ++i) detail::interior_derivatives(p, i, du[i], unused);
    double xr[4] = {p.x[m - 1], p.x[m - 2], p.x[m - 3], p.x[m - 4]};
    double ur[4] = {p.u[m - 1], p.u[m - 2], p.u[m - 3], p.u[m - 4]};
    detail::one_sided_derivatives(xr, ur, du[m - 1], unused);
    return du;
}

// kappa = -u_xx / (1 + u_x^2)^(3/2), positive for the convex lens
inline std::vector<double> curvature(const GridProfile& p) {
    validate(p);
    const size_t m = p.x.size();
    std::vector<double> k(m);
    double du, ddu;
    detail::one_sided_derivatives(&p.x[0], &p.u[0], du, ddu);
    k[0] = -ddu / std::pow(1.0 + du * du, 1.5);
    for (size_t i = 1; i + 1 < m; ++i) {
        detail::interior_derivatives(p, i, du, ddu);
        k[i] = -ddu / std::pow(1.0 + du * du, 1.5);
    }
    double xr[4] = {p.x[m - 1], p.x[m - 2], p.x[m - 3], p.x[m - 4]};
    double ur[4] = {p.u[m - 1], p.u[m - 2], p.u[m - 3], p.u[m - 4]};
    detail::one_sided_derivatives(xr, ur, du, ddu);
    k[m - 1] = -ddu / std::pow(1.0 + du * du, 1.5);
    return k;
}

// |Omega| = 2 * integral of u
inline double enclosed_area(const GridProfile& p) {
    validate(p);
    return 2.0 * trapezoid(p.x, p.u);
}

// L = 2 * length of one arc
inline double network_length(const GridProfile& p) {
    validate(p);
    double s = 0.0;
    for (size_t i = 1; i < p.x.size(); ++i)
        s += std::hypot(p.x[i] - p.x[i - 1], p.u[i] - p.u[i - 1]);
    return 2.0 * s;
}

// ------------------------------------------------------------------
// extrinsic/intrinsic distance ratio on the closed reduced network
// ------------------------------------------------------------------

struct RatioMin {
    double ratio = 0.0;
    int i = -1;
    int j = -1;
    double d_ex = 0.0;
    double d_in = 0.0;
    double loop_length = 0.0;
};

// min over vertex pairs of d_ex / psi, psi = (L/pi) sin(pi d_in / L),
// d_in the shorter of the two boundary paths of a closed polygon
inline RatioMin ratio_min_closed_loop(const Polyline& loop) {
    const int m = static_cast<int>(loop.size());
    if (m < 8) throw std::invalid_argument("ratio_min_closed_loop: need >= 8 vertices");
    std::vector<double> cum(m, 0.0);
    for (int i = 1; i < m; ++i) cum[i] = cum[i - 1] + norm(loop[i] - loop[i - 1]);
    const double L = cum[m - 1] + norm(loop.front() - loop.back());
    RatioMin best;
    best.ratio = inf;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double din = cum[j] - cum[i];
            din = std::min(din, L - din);
            if (din <= 0.0) continue;
            const double psi = (L / pi) * std::sin(pi * din / L);
            const double r = norm(loop[i] - loop[j]) / psi;
            if (r < best.ratio) {
                best.ratio = r;
                best.i = i;
                best.j = j;
                best.d_ex = norm(loop[i] - loop[j]);
                best.d_in = din;
            }
        }
    }
    best.loop_length = L;
    return best;
}

// assembles the mirror-closed loop from the profile, decimating each arc to
// at most max_per_arc vertices (diagnostic, not inner loop)
inline RatioMin distance_ratio_min(const GridProfile& p, int max_per_arc = 512) {
    validate(p);
    const int n = p.segments();
    if (n < 8) throw std::invalid_argument("distance_ratio_min: need >= 8 segments per arc");
    int stride = 1;
    while ((n + stride - 1) / stride > max_per_arc) ++stride;
    Polyline loop;
    for (int i = 0; i < n; i += stride) loop.push_back({p.x[i], p.u[i]});
    loop.push_back({p.x[n], 0.0});
    for (int i = n - stride; i > 0; i -= stride) loop.push_back({p.x[i], -p.u[i]});
    return ratio_min_closed_loop(loop);
}

// ------------------------------------------------------------------
// Hausdorff distance between polylines (vertex vs segment, symmetric)
// ------------------------------------------------------------------

inline double point_segment_distance(Vec2 q, Vec2 p0, Vec2 p1) {
    const Vec2 d = p1 - p0;
    const double len2 = dot(d, d);
    double t = len2 > 0.0 ? dot(q - p0, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(q - (p0 + t * d));
}

inline double point_polyline_distance(Vec2 q, const Polyline& p) {
    if (p.empty()) throw std::invalid_argument("point_polyline_distance: empty polyline");
    if (p.size() == 1) return norm(q - p[0]);
    double best = inf;
    for (size_t i = 1; i < p.size(); ++i)
        best = std::min(best, point_segment_distance(q, p[i - 1], p[i]));
    return best;
}

inline double hausdorff_distance(const Polyline& A, const Polyline& B) {
    if (A.empty() || B.empty()) throw std::invalid_argument("hausdorff_distance: empty input");
    double h = 0.0;
    for (const Vec2& q : A) h = std::max(h, point_polyline_distance(q, B));
    for (const Vec2& q : B) h = std::max(h, point_polyline_distance(q, A));
    return h;
}

// ------------------------------------------------------------------
// initial data
// ------------------------------------------------------------------

enum class LensKind { circular_arc, scaled_selfsimilar, perturbed };

struct LensParams {
    double width = 2.0;       // contact chord b - a
    int n = 128;              // grid segments
    double lambda_scale = 1;  // scaled_selfsimilar only
    double eps = 0.0;         // perturbed only, relative bump height
    bool require_convex = true;
    // dense (x, u) samples of a reference profile on [-b, b], used by
    // scaled_selfsimilar; supplied by the shooting module
    std::vector<std::array<double, 2>> reference;
};

namespace detail {

inline double interp_reference(const std::vector<std::array<double, 2>>& ref, double x) {
    if (ref.size() < 2) throw std::invalid_argument("reference profile: too few samples");
    if (x <= ref.front()[0]) return ref.front()[1];
    if (x >= ref.back()[0]) return ref.back()[1];
    size_t lo = 0, hi = ref.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        (ref[mid][0] <= x ? lo : hi) = mid;
    }
    const double t = (x - ref[lo][0]) / (ref[hi][0] - ref[lo][0]);
    return (1.0 - t) * ref[lo][1] + t * ref[hi][1];
}

}  // namespace detail

// circular_arc: the circle meeting the axis at 60 degrees has radius w/sqrt(3)
// and center (0, -w/(2 sqrt(3))); nodes are placed on the circle so the
// contact slopes are exact by construction
inline GridProfile build_initial_lens(LensKind kind, const LensParams& params) {
    if (!(params.width > 0.0)) throw std::invalid_argument("build_initial_lens: width <= 0");
    if (params.n < 16) throw std::invalid_argument("build_initial_lens: need n >= 16");
    const int n = params.n;
    GridProfile p;
    p.time = 0.0;

    if (kind == LensKind::circular_arc || kind == LensKind::perturbed) {
        const double w = params.width;
        const double R = w / sqrt3;
        const double cy = -w / (2.0 * sqrt3);
        p.a = -0.5 * w;
        p.b = 0.5 * w;
        p.x = linspace(p.a, p.b, n + 1);
        p.u.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double rad2 = std::max(R * R - p.x[i] * p.x[i], 0.0);
            p.u[i] = std::sqrt(rad2) + cy;
        }
        p.u.front() = 0.0;
        p.u.back() = 0.0;
        if (kind == LensKind::perturbed && params.eps != 0.0) {
            for (int i = 1; i < n; ++i) {
                const double xi = static_cast<double>(i) / n;
                const double s = std::sin(pi * xi);
                p.u[i] += params.eps * w * s * s * xi;
            }
            const auto du = slopes(p);
            for (double v : du)
                if (std::abs(v) > sqrt3 + 1e-12)
                    throw std::invalid_argument("build_initial_lens: perturbation breaks |u_x| <= sqrt(3)");
            if (params.require_convex) {
                const auto k = curvature(p);
                for (double v : k)
                    if (v < -1e-9)
                        throw std::invalid_argument("build_initial_lens: perturbation breaks convexity");
            }
        }
        return p;
    }

    // scaled_selfsimilar: u(x) = lambda * U(x / lambda) from reference samples
    if (params.reference.size() < 2)
        throw std::invalid_argument("build_initial_lens: scaled_selfsimilar needs reference samples");
    const double lam = params.lambda_scale;
    if (!(lam > 0.0)) throw std::invalid_argument("build_initial_lens: lambda_scale <= 0");
    const double bref = params.reference.back()[0];
    p.a = -lam * bref;
    p.b = lam * bref;
    p.x = linspace(p.a, p.b, n + 1);
    p.u.resize(n + 1);
    for (int i = 0; i <= n; ++i)
        p.u[i] = lam * detail::interp_reference(params.reference, std::abs(p.x[i]) / lam);
    p.u.front() = 0.0;
    p.u.back() = 0.0;
    return p;
}

// ------------------------------------------------------------------
// snapshot assembly for the symmetric lens
// ------------------------------------------------------------------

inline NetworkSnapshot lens_network(const GridProfile& p) {
    validate(p);
    NetworkSnapshot s;
    s.symmetric = true;
    const size_t m = p.x.size();
    s.upper_arc.resize(m);
    s.lower_arc.resize(m);
    for (size_t i = 0; i < m; ++i) {
        s.upper_arc[i] = {p.x[i], p.u[i]};
        s.lower_arc[i] = {p.x[i], -p.u[i]};
    }
    s.left_ray = {{p.a, 0.0}, {-1.0, 0.0}};
    s.right_ray = {{p.b, 0.0}, {1.0, 0.0}};
    s.junctions[0] = {{p.a, 0.0}, {Vec2{0.5, 0.5 * sqrt3}, Vec2{0.5, -0.5 * sqrt3}, Vec2{-1.0, 0.0}}};
    s.junctions[1] = {{p.b, 0.0}, {Vec2{-0.5, 0.5 * sqrt3}, Vec2{-0.5, -0.5 * sqrt3}, Vec2{1.0, 0.0}}};
    return s;
}

// closed loop of the reduced network (both arcs, no rays)
inline Polyline network_loop(const NetworkSnapshot& s) {
    Polyline loop = s.upper_arc;
    for (size_t i = s.lower_arc.size() - 1; i-- > 1;) loop.push_back(s.lower_arc[i]);
    return loop;
}

// ------------------------------------------------------------------
// scalar diagnostics of a flow state
// ------------------------------------------------------------------

struct Diagnostics {
    double time = 0.0;
    double area = 0.0;
    double length = 0.0;
    double kappa_min = 0.0;
    double kappa_max = 0.0;
    double ratio_min = 0.0;
    double a = 0.0;
    double b = 0.0;
    double sup_abs_slope = 0.0;
};

inline Diagnostics compute_diagnostics(const GridProfile& p, int ratio_cap = 128) {
    Diagnostics d;
    d.time = p.time;
    d.area = enclosed_area(p);
    d.length = network_length(p);
    const auto k = curvature(p);
    d.kappa_min = inf;
    d.kappa_max = -inf;
    for (double v : k) {
        d.kappa_min = std::min(d.kappa_min, v);
        d.kappa_max = std::max(d.kappa_max, v);
    }
    d.ratio_min = distance_ratio_min(p, ratio_cap).ratio;
    d.a = p.a;
    d.b = p.b;
    for (double v : slopes(p)) d.sup_abs_slope = std::max(d.sup_abs_slope, std::abs(v));
    return d;
}

}  // namespace lensflow
