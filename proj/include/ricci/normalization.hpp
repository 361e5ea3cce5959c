#pragma once

#include "solver.hpp"
#include "verdict.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ricci {

/// A TraceRecord seen through the area-preserving rescaling g = φ g̃.
struct NormalizedRecord {
    double t = 0.0;
    double phi = 0.0;
    double R_max = 0.0;
    double R_min = 0.0;
    double r = 0.0;        ///< average scalar curvature, ∫R dA / A_target
    double total_R = 0.0;  ///< scale invariant, equals the unnormalized value
    double total_R2 = 0.0;
    double len_minus = 0.0;
    double len_plus = 0.0;
    double len_mid = 0.0;
    double k_minus = 0.0;
    double k_plus = 0.0;
};

struct NormalizedTrace {
    double a_target = 1.0;
    std::vector<NormalizedRecord> records;
};

/// Rescales one record with a given φ and normalized time t.
inline NormalizedRecord normalize_record(const TraceRecord& rec, double phi, double t, double a_target) {
    const double sq = std::sqrt(phi);
    NormalizedRecord n;
    n.t = t;
    n.phi = phi;
    n.R_max = rec.R_max / phi;
    n.R_min = rec.R_min / phi;
    n.total_R = rec.total_R;
    n.r = rec.total_R / a_target;
    n.total_R2 = rec.total_R2 / phi;
    n.len_minus = sq * rec.len_minus;
    n.len_plus = sq * rec.len_plus;
    n.len_mid = sq * rec.len_mid;
    n.k_minus = rec.k_minus / sq;
    n.k_plus = rec.k_plus / sq;
    return n;
}

/// φ = A_target/Ã, t = ∫ φ dt̃ by the trapezoid rule over the records.
inline NormalizedTrace normalize_trace(const FlowTrace& trace, double a_target = 1.0) {
    detail::require(a_target > 0.0, "normalization", "a_target must be positive");
    NormalizedTrace out;
    out.a_target = a_target;
    out.records.reserve(trace.records.size());
    double t = 0.0;
    for (std::size_t j = 0; j < trace.records.size(); ++j) {
        const auto& rec = trace.records[j];
        if (!(rec.area > 0.0))
            detail::fail("normalization", "malformed trace: non-positive area at record " + std::to_string(j));
        const double phi = a_target / rec.area;
        if (j > 0) {
            const auto& prev = trace.records[j - 1];
            if (!(rec.t_tilde > prev.t_tilde))
                detail::fail("normalization",
                             "malformed trace: t_tilde not strictly increasing at record " + std::to_string(j));
            t += 0.5 * (rec.t_tilde - prev.t_tilde) * (phi + a_target / prev.area);
        }
        out.records.push_back(normalize_record(rec, phi, t, a_target));
    }
    return out;
}

/// Inverse rescaling of the geometric fields; time, step and the
/// non-scaling columns are left at their defaults.
inline TraceRecord denormalize(const NormalizedRecord& n, double a_target) {
    const double sq = std::sqrt(n.phi);
    TraceRecord r;
    r.area = a_target / n.phi;
    r.R_max = n.R_max * n.phi;
    r.R_min = n.R_min * n.phi;
    r.total_R = n.total_R;
    r.total_R2 = n.total_R2 * n.phi;
    r.len_minus = n.len_minus / sq;
    r.len_plus = n.len_plus / sq;
    r.len_mid = n.len_mid / sq;
    r.k_minus = n.k_minus * sq;
    r.k_plus = n.k_plus * sq;
    return r;
}

/// log(1 + t) ≤ t̃·A_target/Ã(0): the time-map estimate with t̃ measured in
/// the units in which the initial area equals A_target.
inline BoundCheck time_map_bounds_check(const FlowTrace& trace, const NormalizedTrace& nt, double tol = 1e-12) {
    BoundCheck c;
    c.name = "time_map_bounds";
    detail::require(trace.records.size() == nt.records.size(), "normalization", "traces are not aligned");
    const auto& recs = trace.records;
    std::size_t first = 0;
    while (first < recs.size() && !(recs[first].t_tilde > 0.0)) ++first;
    if (first >= recs.size() || recs.back().t_tilde < 10.0 * recs[first].t_tilde) {
        c.undecided(Verdict::inconclusive, "insufficient span: need t_tilde_2/t_tilde_1 >= 10");
        return c;
    }
    c.window = {first, recs.size()};
    const double unit = nt.a_target / recs.front().area;
    double margin = std::numeric_limits<double>::infinity();
    double worst_gap = 0.0;
    std::size_t worst = first;
    for (std::size_t j = first; j < recs.size(); ++j) {
        const double lhs = std::log1p(nt.records[j].t);
        const double rhs = recs[j].t_tilde * unit;
        const double m = (rhs * (1.0 + tol) - lhs) / rhs;
        if (m < margin) {
            margin = m;
            worst = j;
        }
        worst_gap = std::max(worst_gap, lhs - rhs);
    }
    c.constant_found = worst_gap;
    c.decide(margin);
    c.add_note("worst record " + std::to_string(worst) + " at t_tilde = " + std::to_string(recs[worst].t_tilde) +
               ", t = " + std::to_string(nt.records[worst].t));
    return c;
}

/// max over nodes and records of |e^{2 w_norm} - exp(∫(r - R) dτ)|, with
/// w_norm relative to the A_target-rescaled initial metric and the time
/// integral taken by the trapezoid rule in normalized time.
inline double conformal_factor_residual(const NormalizedTrace& nt, const std::vector<FlowState>& states) {
    detail::require(states.size() == nt.records.size(), "normalization",
                    "need one state per normalized record");
    if (states.empty()) return 0.0;
    const std::size_t N = states.front().w.size();
    std::vector<double> integral(N, 0.0), prev_integrand(N, 0.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < states.size(); ++j) {
        const auto& rec = nt.records[j];
        const ScalarField R = scalar_curvature(states[j]);
        std::vector<double> integrand(N);
        for (std::size_t i = 0; i < N; ++i) integrand[i] = rec.r - R[i] / rec.phi;
        if (j > 0) {
            const double dt = rec.t - nt.records[j - 1].t;
            for (std::size_t i = 0; i < N; ++i) integral[i] += 0.5 * dt * (integrand[i] + prev_integrand[i]);
        }
        prev_integrand = std::move(integrand);
        const double phi_ratio = rec.phi / nt.records.front().phi;
        for (std::size_t i = 0; i < N; ++i) {
            const double u = phi_ratio * std::exp(2.0 * (states[j].w[i] - states.front().w[i]));
            worst = std::max(worst, std::abs(u - std::exp(integral[i])));
        }
    }
    return worst;
}

}  // namespace ricci
