#pragma once

#include "geometry.hpp"
#include "tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ricci {

enum class Scheme { explicit_heun, implicit_euler };

struct StepperConfig {
    Scheme scheme = Scheme::explicit_heun;
    double safety = 0.25;          ///< CFL fraction of the explicit limit
    double newton_tol = 1e-12;
    int newton_max_iter = 30;
    double dt_min = 0.0;           ///< abort threshold; <= 0 means 1e-12 × initial stable dt
    /// Implicit only: step so that normalized time grows by this fraction per
    /// step (never below the explicit stable step).
    double log_step = 0.01;
    double a_target = 1.0;         ///< area convention for the running normalized time
    /// Abort once Ã < area_floor · Ã(0); the flow of positively curved data
    /// shrinks toward zero area.
    double area_floor = 1e-12;
    std::int64_t max_steps = 20'000'000;
};

inline void validate(const StepperConfig& c) {
    detail::require(c.safety > 0.0 && c.safety <= 0.5, "solver", "safety must lie in (0, 0.5]");
    detail::require(c.newton_tol > 0.0, "solver", "newton_tol must be positive");
    detail::require(c.newton_max_iter > 0, "solver", "newton_max_iter must be positive");
    detail::require(c.log_step > 0.0, "solver", "log_step must be positive");
    detail::require(c.a_target > 0.0, "solver", "a_target must be positive");
    detail::require(c.max_steps > 0, "solver", "max_steps must be positive");
}

/// Observables of one recorded step of the unnormalized flow.
struct TraceRecord {
    std::int64_t step = 0;
    double t_tilde = 0.0;
    double dt = 0.0;
    double area = 0.0;
    double total_R = 0.0;   ///< ∫R dA
    double R_max = 0.0;
    double R_min = 0.0;
    double total_R2 = 0.0;  ///< ∫R² dA
    double len_minus = 0.0;
    double len_plus = 0.0;
    double len_mid = 0.0;
    double k_minus = 0.0;
    double k_plus = 0.0;
    double gb_residual = 0.0;
    double meridian = 0.0;
    std::int64_t argmax_node = 0;
    MinLocation rmin_loc = MinLocation::interior;
    double r_boundary = 0.0;  ///< NaN when ∮k ds = 0

    /// Gauss–Bonnet residual over |∫R/2 dA| + |∮k ds|.
    double gb_relative() const {
        const double boundary = -0.5 * total_R + gb_residual;  // ∮k ds
        const double scale = std::abs(0.5 * total_R) + std::abs(boundary);
        return scale > 0.0 ? gb_residual / scale : 0.0;
    }
};

enum class RunStatus { completed, aborted };

struct FlowTrace {
    std::vector<TraceRecord> records;
    RunStatus status = RunStatus::completed;
    std::string diagnostic;
    std::int64_t steps = 0;
    double t_norm_running = 0.0;  ///< ∫ a_target/Ã dt̃ over every accepted step
};

/// r_∂ = ∮kR ds / ∮k ds; empty when ∮k ds vanishes.
inline std::optional<double> boundary_average_curvature(const FlowState& s, std::span<const double> R) {
    const auto k = boundary_geodesic_curvature(s);
    const double lm = parallel_length(s, 0), lp = parallel_length(s, s.w.size() - 1);
    const double denom = k.minus * lm + k.plus * lp;
    if (denom == 0.0) return std::nullopt;
    return (k.minus * R.front() * lm + k.plus * R.back() * lp) / denom;
}

inline std::optional<double> boundary_average_curvature(const FlowState& s) {
    return boundary_average_curvature(s, scalar_curvature(s));
}

inline TraceRecord observe(const FlowState& s, std::int64_t step, double dt) {
    const auto& g = s.geometry();
    const ScalarField R = scalar_curvature(s);
    std::vector<double> R2(R.size());
    for (std::size_t i = 0; i < R.size(); ++i) R2[i] = R[i] * R[i];
    const auto k = boundary_geodesic_curvature(s);
    TraceRecord r;
    r.step = step;
    r.t_tilde = s.t_tilde;
    r.dt = dt;
    r.area = area(s);
    r.total_R = integrate(s, R);
    r.R_max = *std::max_element(R.begin(), R.end());
    r.R_min = *std::min_element(R.begin(), R.end());
    r.total_R2 = integrate(s, R2);
    r.len_minus = parallel_length(s, 0);
    r.len_plus = parallel_length(s, g.nodes() - 1);
    r.len_mid = parallel_length(s, static_cast<std::size_t>(g.middle()));
    r.k_minus = k.minus;
    r.k_plus = k.plus;
    r.gb_residual = gauss_bonnet_residual(s);
    r.meridian = meridian_distance(s);
    r.argmax_node = static_cast<std::int64_t>(argmax_node(R));
    r.rmin_loc = classify_min_location(R);
    r.r_boundary = boundary_average_curvature(s, R).value_or(std::numeric_limits<double>::quiet_NaN());
    return r;
}

/// w_t = -R/2 = e^{-2w}(Δ0 w - R0/2), Robin ghosts eliminated.
inline ScalarField rhs(const FlowState& s) {
    ScalarField R = scalar_curvature(s);
    for (double& x : R) x *= -0.5;
    return R;
}

inline Ghosts apply_boundary(const FlowState& s) { return robin_ghosts(s.geometry(), s.w); }

/// Explicit step limit; the quasilinear diffusion coefficient is e^{-2w}.
inline double stable_dt(const FlowState& s, double safety) {
    const auto& g = s.geometry();
    const double wmin = *std::min_element(s.w.begin(), s.w.end());
    double qmax = 0.0;
    for (double q : g.log_deriv) qmax = std::max(qmax, std::abs(q));
    return safety * g.h * g.h / (2.0 * std::exp(-2.0 * wmin) * (1.0 + qmax * g.h));
}

/// Heun (explicit trapezoid), second order in time.
inline FlowState step_explicit(const FlowState& s, double dt) {
    const ScalarField k1 = rhs(s);
    FlowState mid = s;
    for (std::size_t i = 0; i < mid.w.size(); ++i) mid.w[i] = s.w[i] + dt * k1[i];
    const ScalarField k2 = rhs(mid);
    FlowState out = s;
    for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] = s.w[i] + 0.5 * dt * (k1[i] + k2[i]);
    out.t_tilde = s.t_tilde + dt;
    return out;
}

/// Backward Euler: Newton on w' - w - dt·rhs(w') = 0 with the exact
/// tridiagonal Jacobian (Robin ghosts included). Empty on non-convergence.
inline std::optional<FlowState> step_implicit(const FlowState& s, double dt, double newton_tol = 1e-12,
                                              int newton_max_iter = 30) {
    const auto& g = s.geometry();
    const std::size_t N = g.nodes(), n = N - 1;
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double inv_2h = 1.0 / (2.0 * g.h);
    FlowState x = s;
    x.t_tilde = s.t_tilde + dt;
    TridiagonalSystem sys(N);
    for (int it = 0; it < newton_max_iter; ++it) {
        const ScalarField lap = laplace_base(g, x.w, robin_ghosts(g, x.w));
        for (std::size_t i = 0; i < N; ++i) {
            const double e = std::exp(-2.0 * x.w[i]);
            const double G = e * (lap[i] - 0.5 * g.R0[i]);
            const double c_left = inv_h2 - g.log_deriv[i] * inv_2h;
            const double c_right = inv_h2 + g.log_deriv[i] * inv_2h;
            double d_self = -2.0 * inv_h2;
            double d_left = c_left, d_right = c_right;
            if (i == 0) {
                // ghost = w1 + 2h k0 (e^{w0} - 1)
                d_self += c_left * 2.0 * g.h * g.k0_minus * std::exp(x.w[0]);
                d_right = c_right + c_left;
                d_left = 0.0;
            } else if (i == n) {
                d_self += c_right * 2.0 * g.h * g.k0_plus * std::exp(x.w[n]);
                d_left = c_left + c_right;
                d_right = 0.0;
            }
            sys.diag[i] = 1.0 - dt * (-2.0 * G + e * d_self);
            sys.lower[i] = -dt * e * d_left;
            sys.upper[i] = -dt * e * d_right;
            sys.rhs[i] = -((x.w[i] - s.w[i]) - dt * G);
        }
        const std::vector<double> dx = solve_tridiagonal(sys);
        double step_norm = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < N; ++i) {
            if (!std::isfinite(dx[i])) return std::nullopt;
            x.w[i] += dx[i];
            step_norm = std::max(step_norm, std::abs(dx[i]));
            scale = std::max(scale, std::abs(x.w[i]));
        }
        if (step_norm <= newton_tol * scale) return x;
    }
    return std::nullopt;
}

/// Consistency of two consecutive states with the curvature equations: the
/// interior evolution ∂R/∂t̃ = Δ_g R + R² (evaluated at the midpoint state)
/// and the boundary flux ∂R/∂η = k R.
struct CurvatureResidual {
    double interior = 0.0;
    double boundary_flux = 0.0;
};

inline CurvatureResidual curvature_evolution_residual(const FlowState& prev, const FlowState& next, double dt) {
    const auto& g = prev.geometry();
    const std::size_t N = g.nodes(), n = N - 1;
    FlowState mid = prev;
    for (std::size_t i = 0; i < N; ++i) mid.w[i] = 0.5 * (prev.w[i] + next.w[i]);
    const ScalarField Rp = scalar_curvature(prev), Rn = scalar_curvature(next), Rm = scalar_curvature(mid);
    CurvatureResidual res;
    const double inv_h2 = 1.0 / (g.h * g.h);
    for (std::size_t i = 1; i < n; ++i) {
        // Divergence form (f0 R_σ)_σ / f0 with face values of f0: a second
        // discretisation of Δ_g independent of the stencil that drives w.
        const double flux = g.f0_half[i] * (Rm[i + 1] - Rm[i]) - g.f0_half[i - 1] * (Rm[i] - Rm[i - 1]);
        const double lap_g = std::exp(-2.0 * mid.w[i]) * flux * inv_h2 / g.f0[i];
        const double dRdt = (Rn[i] - Rp[i]) / dt;
        res.interior = std::max(res.interior, std::abs(dRdt - (lap_g + Rm[i] * Rm[i])));
    }
    const auto dR = outward_derivative(g, Rm);
    const auto k = boundary_geodesic_curvature(mid);
    const double flux_minus = std::exp(-mid.w[0]) * dR.minus - k.minus * Rm[0];
    const double flux_plus = std::exp(-mid.w[n]) * dR.plus - k.plus * Rm[n];
    res.boundary_flux = std::max(std::abs(flux_minus), std::abs(flux_plus));
    return res;
}

enum class StopKind { t_tilde, t_norm, area_below, wall_steps };

struct StopRule {
    StopKind kind = StopKind::t_tilde;
    double value = 1.0;
};

/// Called at each recorded step with the state and its record.
using RecordObserver = std::function<void(const FlowState&, const TraceRecord&)>;

namespace detail {

inline bool stop_reached(const StopRule& rule, const FlowState& s, double area_now, double t_norm, std::int64_t steps) {
    switch (rule.kind) {
        case StopKind::t_tilde: return s.t_tilde >= rule.value;
        case StopKind::t_norm: return t_norm >= rule.value;
        case StopKind::area_below: return area_now < rule.value;
        case StopKind::wall_steps: return static_cast<double>(steps) >= rule.value;
    }
    return true;
}

}  // namespace detail

/// Drives the unnormalized flow until the stop rule fires. Records at t̃ = 0,
/// every `record_every` accepted steps, and at the final state. Runtime
/// failures (dt collapse, repeated Newton rejection, area collapse, step
/// budget) end the run with status `aborted` and a diagnostic; the trace up to
/// that point is kept.
inline FlowTrace evolve(const FlowState& initial, const StepperConfig& cfg, const StopRule& stop,
                        std::int64_t record_every = 1, const RecordObserver& observer = {}) {
    validate(cfg);
    detail::require(record_every > 0, "solver", "record_every must be positive");
    FlowTrace trace;
    FlowState state = initial;
    const double dt0 = stable_dt(state, cfg.safety);
    const double dt_min = cfg.dt_min > 0.0 ? cfg.dt_min : 1e-12 * dt0;
    const double area0 = area(state);
    double area_now = area0;
    double t_norm = 0.0;
    double dt_scale = 1.0;
    int rejections = 0;
    std::int64_t steps = 0;
    double last_dt = 0.0;

    auto record = [&](double dt) {
        trace.records.push_back(observe(state, steps, dt));
        if (observer) observer(state, trace.records.back());
    };
    auto abort_run = [&](std::string why) {
        trace.status = RunStatus::aborted;
        trace.diagnostic = std::move(why);
    };

    record(0.0);
    bool recorded_last = true;
    while (!detail::stop_reached(stop, state, area_now, t_norm, steps)) {
        if (steps >= cfg.max_steps) {
            abort_run("step budget of " + std::to_string(cfg.max_steps) + " exhausted at t_tilde = " +
                      std::to_string(state.t_tilde));
            break;
        }
        if (area_now < cfg.area_floor * area0) {
            abort_run("area collapsed to " + std::to_string(area_now) + " at t_tilde = " +
                      std::to_string(state.t_tilde) + "; the flow is extinguishing");
            break;
        }
        double dt = stable_dt(state, cfg.safety);
        if (cfg.scheme == Scheme::implicit_euler)
            dt = std::max(dt, cfg.log_step * t_norm * area_now / cfg.a_target);
        dt *= dt_scale;
        if (stop.kind == StopKind::t_tilde && state.t_tilde + dt > stop.value) dt = stop.value - state.t_tilde;
        if (dt < dt_min && !(stop.kind == StopKind::t_tilde && state.t_tilde + dt >= stop.value)) {
            abort_run(cfg.scheme == Scheme::explicit_heun
                          ? "time step collapsed below dt_min at t_tilde = " + std::to_string(state.t_tilde) +
                                "; the explicit scheme is too stiff here, use scheme = implicit_euler"
                          : "time step collapsed below dt_min at t_tilde = " + std::to_string(state.t_tilde));
            break;
        }
        std::optional<FlowState> next;
        if (cfg.scheme == Scheme::explicit_heun) {
            next = step_explicit(state, dt);
            for (double v : next->w)
                if (!std::isfinite(v)) {
                    next.reset();
                    break;
                }
        } else {
            next = step_implicit(state, dt, cfg.newton_tol, cfg.newton_max_iter);
        }
        if (!next) {
            dt_scale *= 0.5;
            if (++rejections >= 5) {
                abort_run("five consecutive step rejections at t_tilde = " + std::to_string(state.t_tilde));
                break;
            }
            continue;
        }
        if (stop.kind == StopKind::t_tilde && dt == stop.value - state.t_tilde) next->t_tilde = stop.value;
        rejections = 0;
        dt_scale = std::min(1.0, 2.0 * dt_scale);
        const double area_next = area(*next);
        t_norm += 0.5 * dt * (cfg.a_target / area_now + cfg.a_target / area_next);
        state = std::move(*next);
        area_now = area_next;
        ++steps;
        last_dt = dt;
        recorded_last = false;
        if (steps % record_every == 0) {
            record(dt);
            recorded_last = true;
        }
    }
    if (!recorded_last) record(last_dt);
    trace.steps = steps;
    trace.t_norm_running = t_norm;
    return trace;
}

}  // namespace ricci
