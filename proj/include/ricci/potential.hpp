#pragma once

#include "geometry.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace ricci {

/// Finite-volume form of the rotationally symmetric Laplacian of g:
/// (Δ_g f)_i = (F_{i+1/2} - F_{i-1/2}) / (V_i), F = f0 (f_{i+1} - f_i)/h on
/// cell faces, V_i = e^{2w_i} f0_i h (half cells at the ends), zero flux
/// through both boundary circles.
inline ScalarField laplace_metric_fv(const FlowState& s, std::span<const double> f) {
    const auto& g = s.geometry();
    const std::size_t N = g.nodes(), n = N - 1;
    ScalarField out(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double right = i < n ? g.f0_half[i] * (f[i + 1] - f[i]) / g.h : 0.0;
        const double left = i > 0 ? g.f0_half[i - 1] * (f[i] - f[i - 1]) / g.h : 0.0;
        const double vol = std::exp(2.0 * s.w[i]) * g.f0[i] * g.h * ((i == 0 || i == n) ? 0.5 : 1.0);
        out[i] = (right - left) / vol;
    }
    return out;
}

/// Average of R with the finite-volume weights; makes Δ_g f = R - r solvable.
inline double volume_average(const FlowState& s, std::span<const double> R) {
    const auto& g = s.geometry();
    const std::size_t n = g.nodes() - 1;
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i <= n; ++i) {
        const long double v = std::exp(2.0 * s.w[i]) * g.f0[i] * ((i == 0 || i == n) ? 0.5 : 1.0);
        num += v * R[i];
        den += v;
    }
    return static_cast<double>(num / den);
}

/// Potential of the curvature: Δ_g f = R - r, ∂f/∂η = 0, volume-weighted
/// mean zero. Face fluxes are accumulated from both ends toward the middle so
/// mirror-symmetric states give mirror-symmetric potentials.
inline ScalarField solve_potential(const FlowState& s) {
    const auto& g = s.geometry();
    const std::size_t N = g.nodes(), n = N - 1, m = n / 2;
    const ScalarField R = scalar_curvature(s);
    const double r = volume_average(s, R);
    std::vector<long double> src(N);
    double scale = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const long double vol = std::exp(2.0 * s.w[i]) * g.f0[i] * g.h * ((i == 0 || i == n) ? 0.5 : 1.0);
        src[i] = vol * (R[i] - r);
        scale = std::max(scale, std::abs(R[i]));
        dev = std::max(dev, std::abs(R[i] - r));
    }
    ScalarField f(N, 0.0);
    if (dev <= 64.0 * std::numeric_limits<double>::epsilon() * scale) return f;
    // F_{i+1/2} = Σ_{k≤i} src_k from the left, = -Σ_{k>i} src_k from the right.
    std::vector<long double> flux(n);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < m; ++i) flux[i] = (acc += src[i]);
    acc = 0.0L;
    for (std::size_t i = n - 1; i >= m; --i) {
        flux[i] = -(acc += src[i + 1]);
        if (i == 0) break;
    }
    // Integrate outward from the middle node so both halves see the same arithmetic.
    std::vector<long double> fl(N, 0.0L);
    for (std::size_t i = m; i < n; ++i) fl[i + 1] = fl[i] + flux[i] * g.h / g.f0_half[i];
    for (std::size_t i = m; i-- > 0;) fl[i] = fl[i + 1] - flux[i] * g.h / g.f0_half[i];
    long double mean = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < N; ++i) {
        const long double v = std::exp(2.0 * s.w[i]) * g.f0[i] * ((i == 0 || i == n) ? 0.5 : 1.0);
        mean += v * fl[i];
        den += v;
    }
    mean /= den;
    for (std::size_t i = 0; i < N; ++i) f[i] = static_cast<double>(fl[i] - mean);
    return f;
}

/// max over nodes of h = Δ_g f + |∇f|²_g for the potential of the state.
inline double h_monitor(const FlowState& s, std::span<const double> f) {
    const auto& g = s.geometry();
    const std::size_t N = g.nodes(), n = N - 1;
    const ScalarField lap = laplace_metric_fv(s, f);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N; ++i) {
        const double df = (i == 0 || i == n) ? 0.0 : (f[i + 1] - f[i - 1]) / (2.0 * g.h);
        best = std::max(best, lap[i] + std::exp(-2.0 * s.w[i]) * df * df);
    }
    return best;
}

inline double h_monitor(const FlowState& s) { return h_monitor(s, solve_potential(s)); }

/// h in the normalized flow (area A_target): h scales like curvature.
inline double h_monitor_normalized(const FlowState& s, double a_target = 1.0) {
    return h_monitor(s) * area(s) / a_target;
}

}  // namespace ricci
