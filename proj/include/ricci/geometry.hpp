#pragma once

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace ricci {

using ScalarField = std::vector<double>;

enum class ProfileKind { flat, cos_band };

/// Background warping profile f0 of the metric dσ² + f0(σ)² dθ².
/// flat: f0 ≡ 1.  cos_band: f0 = cos(aσ) (already max-normalized, the
/// maximum on [-ρ, ρ] is 1 at σ = 0). Both are even in σ.
struct Profile {
    ProfileKind kind = ProfileKind::flat;
    double a = 1.0;

    struct Values {
        double f, fp, fpp;
    };

    /// Exact values and derivatives at σ.
    Values at(double sigma) const {
        // Evaluate at |σ| and restore parity, so mirrored nodes agree bit for bit.
        const double s = std::abs(sigma);
        const double sign = sigma < 0.0 ? -1.0 : 1.0;
        switch (kind) {
            case ProfileKind::flat:
                return {1.0, 0.0, 0.0};
            case ProfileKind::cos_band: {
                const double c = std::cos(a * s);
                return {c, -sign * a * std::sin(a * s), -a * a * c};
            }
        }
        return {1.0, 0.0, 0.0};
    }
};

/// Fixed background cylinder g0 = dσ² + f0(σ)² dθ² sampled on n+1 uniform
/// nodes σ_i = -ρ + i·h. All derived fields come from the analytic profile.
struct BaseGeometry {
    Profile profile;
    double rho = 1.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> sigma;
    std::vector<double> f0, f0_prime, f0_second;
    std::vector<double> R0;       ///< -2 f0''/f0
    std::vector<double> log_deriv;///< f0'/f0
    std::vector<double> f0_half;  ///< f0 at cell faces σ_{i+1/2}, size n
    double k0_minus = 0.0;        ///< -f0'(-ρ)/f0(-ρ), outward normal
    double k0_plus = 0.0;         ///<  f0'(ρ)/f0(ρ)

    std::size_t nodes() const { return static_cast<std::size_t>(n) + 1; }
    int middle() const { return n / 2; }
};

/// Builds the sampled background. n must be even (the middle parallel is a
/// node and Simpson quadrature is used) and at least 16.
inline BaseGeometry build_base(Profile profile, double rho, int n) {
    detail::require(rho > 0.0 && std::isfinite(rho), "geometry", "rho must be positive");
    detail::require(n >= 16, "geometry", "n must be at least 16, got " + std::to_string(n));
    detail::require(n % 2 == 0, "geometry",
                    "n must be even so the middle parallel is a grid node, got " + std::to_string(n));
    BaseGeometry g;
    g.profile = profile;
    g.rho = rho;
    g.n = n;
    g.h = 2.0 * rho / n;
    const std::size_t N = g.nodes();
    g.sigma.resize(N);
    g.f0.resize(N);
    g.f0_prime.resize(N);
    g.f0_second.resize(N);
    g.R0.resize(N);
    g.log_deriv.resize(N);
    const double step = rho / n;
    for (std::size_t i = 0; i < N; ++i) {
        // (2i - n) is an exact integer, so σ_{n-i} == -σ_i exactly.
        g.sigma[i] = static_cast<double>(2 * static_cast<long>(i) - n) * step;
        const auto v = profile.at(g.sigma[i]);
        if (!(v.f > 0.0)) {
            detail::fail("geometry", "profile is not positive at node " + std::to_string(i) +
                                         " (sigma = " + std::to_string(g.sigma[i]) + ")");
        }
        g.f0[i] = v.f;
        g.f0_prime[i] = v.fp;
        g.f0_second[i] = v.fpp;
        g.R0[i] = -2.0 * v.fpp / v.f;
        g.log_deriv[i] = v.fp / v.f;
    }
    g.f0_half.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g.f0_half[i] = profile.at(static_cast<double>(2 * i + 1 - n) * step).f;
    g.k0_minus = -g.f0_prime.front() / g.f0.front();
    g.k0_plus = g.f0_prime.back() / g.f0.back();
    return g;
}

/// Conformal state: metric e^{2w} g0 at unnormalized time t_tilde.
struct FlowState {
    std::shared_ptr<const BaseGeometry> base;
    std::vector<double> w;
    double t_tilde = 0.0;

    const BaseGeometry& geometry() const { return *base; }
};

inline FlowState make_state(std::shared_ptr<const BaseGeometry> base, std::vector<double> w,
                            double t_tilde = 0.0) {
    detail::require(base != nullptr, "geometry", "state needs a base geometry");
    detail::require(w.size() == base->nodes(), "geometry",
                    "conformal exponent has " + std::to_string(w.size()) + " values, expected " +
                        std::to_string(base->nodes()));
    for (std::size_t i = 0; i < w.size(); ++i)
        detail::require(std::isfinite(w[i]), "geometry",
                        "conformal exponent not finite at node " + std::to_string(i));
    return FlowState{std::move(base), std::move(w), t_tilde};
}

/// Ghost values just outside σ = ∓ρ.
struct Ghosts {
    double minus = 0.0;
    double plus = 0.0;
};

/// Ghost nodes from the centred discretisation of ∂w/∂η = k0 (e^w - 1),
/// the condition that keeps the boundary geodesic curvature equal to k0.
inline Ghosts robin_ghosts(const BaseGeometry& g, std::span<const double> w) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    return {w[1] + 2.0 * g.h * g.k0_minus * std::expm1(w[0]),
            w[n - 1] + 2.0 * g.h * g.k0_plus * std::expm1(w[n])};
}

/// Δ0 u = u'' + (f0'/f0) u' with centred differences; the boundary rows use
/// the supplied ghost values.
inline ScalarField laplace_base(const BaseGeometry& g, std::span<const double> u, Ghosts ghosts) {
    const std::size_t N = g.nodes();
    ScalarField out(N);
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double inv_2h = 1.0 / (2.0 * g.h);
    for (std::size_t i = 0; i < N; ++i) {
        const double left = (i == 0) ? ghosts.minus : u[i - 1];
        const double right = (i + 1 == N) ? ghosts.plus : u[i + 1];
        out[i] = ((right + left) - 2.0 * u[i]) * inv_h2 + g.log_deriv[i] * ((right - left) * inv_2h);
    }
    return out;
}

/// R = e^{-2w} (R0 - 2 Δ0 w), ghosts from the Robin condition.
inline ScalarField scalar_curvature(const FlowState& s) {
    const auto& g = s.geometry();
    const ScalarField lap = laplace_base(g, s.w, robin_ghosts(g, s.w));
    ScalarField R(g.nodes());
    for (std::size_t i = 0; i < R.size(); ++i) R[i] = std::exp(-2.0 * s.w[i]) * (g.R0[i] - 2.0 * lap[i]);
    return R;
}

struct BoundaryPair {
    double minus = 0.0;
    double plus = 0.0;
};

/// Outward normal derivative ∂w/∂η0 at both ends, second-order one-sided.
inline BoundaryPair outward_derivative(const BaseGeometry& g, std::span<const double> u) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const double inv_2h = 1.0 / (2.0 * g.h);
    return {((3.0 * u[0] - 4.0 * u[1]) + u[2]) * inv_2h,
            ((3.0 * u[n] - 4.0 * u[n - 1]) + u[n - 2]) * inv_2h};
}

/// k_g = e^{-w} (k0 + ∂w/∂η0) at both boundary circles.
inline BoundaryPair boundary_geodesic_curvature(const FlowState& s) {
    const auto& g = s.geometry();
    const auto d = outward_derivative(g, s.w);
    return {std::exp(-s.w.front()) * (g.k0_minus + d.minus), std::exp(-s.w.back()) * (g.k0_plus + d.plus)};
}

namespace detail {

/// Integrand e^{2w} f0 · y (area density per unit dθ times y).
inline std::vector<double> weighted(const FlowState& s, std::span<const double> y) {
    const auto& g = s.geometry();
    std::vector<double> out(g.nodes());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(2.0 * s.w[i]) * g.f0[i] * y[i];
    return out;
}

}  // namespace detail

/// ∫ y dA over the cylinder (Simpson in σ).
inline double integrate(const FlowState& s, std::span<const double> y) {
    return 2.0 * std::numbers::pi * quad::simpson(detail::weighted(s, y), s.geometry().h);
}

inline double area(const FlowState& s) {
    const std::vector<double> one(s.geometry().nodes(), 1.0);
    return integrate(s, one);
}

inline double parallel_length(const FlowState& s, std::size_t node) {
    const auto& g = s.geometry();
    detail::require(node < g.nodes(), "geometry", "parallel index out of range");
    return 2.0 * std::numbers::pi * std::exp(s.w[node]) * g.f0[node];
}

/// Length of a meridian, ∫ e^w dσ (trapezoid).
inline double meridian_distance(const FlowState& s) {
    std::vector<double> ew(s.w.size());
    for (std::size_t i = 0; i < ew.size(); ++i) ew[i] = std::exp(s.w[i]);
    return quad::trapezoid(ew, s.geometry().h);
}

/// The two Gauss–Bonnet terms: ∫K dA = ½∫R dA, and ∮k ds with k the
/// boundary curvature imposed through the ghost nodes.
struct GaussBonnetTerms {
    double interior = 0.0;
    double boundary = 0.0;

    double residual() const { return interior + boundary; }
    double scale() const { return std::abs(interior) + std::abs(boundary); }
    /// Residual relative to the magnitude of the two terms (0 for a flat state).
    double relative() const { return scale() > 0.0 ? residual() / scale() : 0.0; }
};

inline GaussBonnetTerms gauss_bonnet_terms(const FlowState& s) {
    const auto& g = s.geometry();
    const ScalarField R = scalar_curvature(s);
    const Ghosts gh = robin_ghosts(g, s.w);
    const std::size_t n = static_cast<std::size_t>(g.n);
    const double inv_2h = 1.0 / (2.0 * g.h);
    // e^{w} f0 · k = f0 (k0 + ∂w/∂η0) with the centred ghost derivative.
    const double minus = g.f0[0] * (g.k0_minus + (gh.minus - s.w[1]) * inv_2h);
    const double plus = g.f0[n] * (g.k0_plus + (gh.plus - s.w[n - 1]) * inv_2h);
    GaussBonnetTerms t;
    t.interior = 0.5 * integrate(s, R);
    t.boundary = 2.0 * std::numbers::pi * (minus + plus);
    return t;
}

/// Signed residual ∫R/2 dA + ∮k ds (Euler characteristic of the cylinder is 0).
inline double gauss_bonnet_residual(const FlowState& s) { return gauss_bonnet_terms(s).residual(); }

/// Reparametrisation ds² = ds_arc² + f(s)² dθ² of the conformal metric.
struct ArclengthProfile {
    std::vector<double> s;  ///< s(σ_i) = ∫_{-ρ}^{σ_i} e^w dσ
    std::vector<double> f;  ///< e^{w} f0
};

inline ArclengthProfile to_arclength_profile(const FlowState& st) {
    const auto& g = st.geometry();
    ArclengthProfile p;
    p.s.assign(g.nodes(), 0.0);
    p.f.resize(g.nodes());
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        p.f[i] = std::exp(st.w[i]) * g.f0[i];
        if (i > 0) p.s[i] = p.s[i - 1] + 0.5 * g.h * (std::exp(st.w[i - 1]) + std::exp(st.w[i]));
    }
    return p;
}

/// Argmax over nodes; ties go to the smallest index.
inline std::size_t argmax_node(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

/// Where the minimum of a nodal field sits. Codes are stable (serialised).
enum class MinLocation : int { interior = 0, boundary = 1, middle = 2, one_boundary = 3 };

/// `boundary` means the minimum is attained (to rel_tol·max|v|) on both
/// boundary circles; `one_boundary` on exactly one of them.
inline MinLocation classify_min_location(std::span<const double> v, double rel_tol = 1e-10) {
    const double vmin = *std::min_element(v.begin(), v.end());
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    const double tol = rel_tol * scale;
    const bool at_minus = v.front() <= vmin + tol;
    const bool at_plus = v.back() <= vmin + tol;
    if (at_minus && at_plus) return MinLocation::boundary;
    if (at_minus || at_plus) return MinLocation::one_boundary;
    if (v[v.size() / 2] <= vmin + tol) return MinLocation::middle;
    return MinLocation::interior;
}

}  // namespace ricci
