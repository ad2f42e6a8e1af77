#pragma once

#include <cstddef>

namespace gfl::detail {

/// Scratch buffers for classic RK4 on a fixed-size state. State must be copyable, indexable
/// and expose size(); the right-hand side is called as rhs(z, y, dydz).
template <class State>
struct Rk4Workspace {
    explicit Rk4Workspace(const State& shape) : k1(shape), k2(shape), k3(shape), k4(shape), tmp(shape) {}
    State k1, k2, k3, k4, tmp;
};

/// One step from z to z_end; the final stage is evaluated exactly at z_end.
template <class State, class Rhs>
void rk4_step(State& y, double z, double z_end, Rhs& rhs, Rk4Workspace<State>& w) {
    const double h = z_end - z;
    const std::size_t n = y.size();
    rhs(z, y, w.k1);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + (0.5 * h) * w.k1[i];
    rhs(z + 0.5 * h, w.tmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + (0.5 * h) * w.k2[i];
    rhs(z + 0.5 * h, w.tmp, w.k3);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
    rhs(z_end, w.tmp, w.k4);
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += h6 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
    }
}

/// Advances y from z0 to z1 in `steps` equal RK4 steps.
template <class State, class Rhs>
void rk4_advance(State& y, double z0, double z1, long steps, Rhs& rhs, Rk4Workspace<State>& w) {
    if (steps <= 0 || z1 == z0) return;
    const double h = (z1 - z0) / static_cast<double>(steps);
    for (long s = 0; s < steps; ++s) {
        // z recomputed from the index so segment endpoints are hit exactly
        const double z = z0 + static_cast<double>(s) * h;
        const double z_end = s + 1 == steps ? z1 : z0 + static_cast<double>(s + 1) * h;
        rk4_step(y, z, z_end, rhs, w);
    }
}

}  // namespace gfl::detail
