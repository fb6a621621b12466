#pragma once
// ode.hpp: fixed-step RK4 for small first-order systems, with a helper to
// bisect an event inside the final step (re-integrating partial steps keeps
// the located event at the accuracy of the stepper itself).

#include <array>
#include <cmath>
#include <functional>

namespace lensflow {

template <int N>
using OdeState = std::array<double, N>;

template <int N, class F>
inline OdeState<N> rk4_step(const F& f, double x, const OdeState<N>& y, double h) {
    OdeState<N> k1 = f(x, y), y2{}, k2{}, k3{}, k4{}, out{};
    for (int i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
    k2 = f(x + 0.5 * h, y2);
    for (int i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * h * k2[i];
    k3 = f(x + 0.5 * h, y2);
    for (int i = 0; i < N; ++i) y2[i] = y[i] + h * k3[i];
    k4 = f(x + h, y2);
    for (int i = 0; i < N; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

// Finds s in (0, 1] with event(x + s*h, step(s*h)) = 0 given a sign change over
// the full step. Returns the step fraction; the caller re-steps with s*h.
template <int N, class F, class E>
inline double event_fraction(const F& f, const E& event, double x, const OdeState<N>& y, double h,
                             int iters = 80) {
    double lo = 0.0, hi = 1.0;
    const double elo = event(x, y);
    for (int it = 0; it < iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        const OdeState<N> ym = rk4_step<N>(f, x, y, mid * h);
        const double em = event(x + mid * h, ym);
        if ((em > 0.0) == (elo > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace lensflow
