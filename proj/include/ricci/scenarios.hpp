#pragma once

#include "geometry.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

namespace ricci {

enum class InitialExponent { zero, cosine_bump };

/// Initial-data family: a background profile plus a perturbation of w.
struct ScenarioSpec {
    ProfileKind profile = ProfileKind::cos_band;
    double a = 1.0;
    double rho = std::numbers::pi / 4.0;
    int n = 256;
    InitialExponent w0 = InitialExponent::zero;
    double epsilon = 0.0;
    int mode = 1;
};

/// w0(σ) = ε cos(mπ(σ+ρ)/(2ρ)); its σ-derivative vanishes at both ends.
inline double cosine_bump(double sigma, double rho, double epsilon, int mode) {
    return epsilon * std::cos(mode * std::numbers::pi * (sigma + rho) / (2.0 * rho));
}

inline FlowState make_initial(const ScenarioSpec& spec) {
    detail::require(spec.epsilon >= 0.0, "scenarios", "epsilon must be non-negative");
    detail::require(spec.mode >= 1, "scenarios", "mode must be a positive integer");
    if (spec.profile == ProfileKind::cos_band) {
        detail::require(spec.a > 0.0, "scenarios", "cos_band frequency a must be positive");
        detail::require(spec.a * spec.rho < std::numbers::pi / 2.0, "scenarios",
                        "cos_band needs a*rho < pi/2 for a positive profile (a*rho = " +
                            std::to_string(spec.a * spec.rho) + ")");
    }
    auto base = std::make_shared<const BaseGeometry>(build_base(Profile{spec.profile, spec.a}, spec.rho, spec.n));
    std::vector<double> w(base->nodes(), 0.0);
    if (spec.w0 == InitialExponent::cosine_bump) {
        const std::size_t n = static_cast<std::size_t>(spec.n);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = cosine_bump(base->sigma[i], spec.rho, spec.epsilon, spec.mode);
        // For even modes the bump is reflection symmetric; copy the left half so
        // the symmetry is exact in floating point as well.
        if (spec.mode % 2 == 0)
            for (std::size_t i = 0; i < n / 2; ++i) w[n - i] = w[i];
    }
    return make_state(std::move(base), std::move(w), 0.0);
}

struct HypothesisTolerances {
    double curvature = 1e-12;   ///< R ≥ -tol·max|R|
    double geodesic = 1e-12;    ///< k ≤ tol
    double symmetry = 1e-12;    ///< |R(σ) - R(-σ)| ≤ tol·max|R|
    double monotone = 1e-10;    ///< non-increasing from the middle up to tol·max|R|
};

struct HypothesisReport {
    bool r_nonneg = false;
    bool k_nonpos = false;
    bool reflection_symmetric = false;
    bool decreasing_from_middle = false;
    MinLocation min_R_location = MinLocation::interior;
};

namespace detail {

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline bool is_reflection_symmetric(std::span<const double> v, double rel_tol) {
    const double tol = rel_tol * max_abs(v);
    const std::size_t n = v.size() - 1;
    for (std::size_t i = 0; i <= n / 2; ++i)
        if (std::abs(v[i] - v[n - i]) > tol) return false;
    return true;
}

/// Non-increasing from the middle node toward both ends, up to rel_tol·max|v|.
inline bool is_decreasing_from_middle(std::span<const double> v, double rel_tol) {
    const double tol = rel_tol * max_abs(v);
    const std::size_t n = v.size() - 1, m = n / 2;
    for (std::size_t i = m; i < n; ++i)
        if (v[i + 1] > v[i] + tol) return false;
    for (std::size_t i = m; i > 0; --i)
        if (v[i - 1] > v[i] + tol) return false;
    return true;
}

}  // namespace detail

inline HypothesisReport validate_hypotheses(const FlowState& s, const HypothesisTolerances& tol = {}) {
    const ScalarField R = scalar_curvature(s);
    const auto k = boundary_geodesic_curvature(s);
    const double scale = detail::max_abs(R);
    HypothesisReport rep;
    rep.r_nonneg = *std::min_element(R.begin(), R.end()) >= -tol.curvature * scale;
    rep.k_nonpos = k.minus <= tol.geodesic && k.plus <= tol.geodesic;
    rep.reflection_symmetric = detail::is_reflection_symmetric(R, tol.symmetry);
    rep.decreasing_from_middle = detail::is_decreasing_from_middle(R, tol.monotone);
    rep.min_R_location = classify_min_location(R);
    return rep;
}

}  // namespace ricci
