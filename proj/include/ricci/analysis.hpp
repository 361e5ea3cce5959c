#pragma once

#include "fit.hpp"
#include "normalization.hpp"
#include "scenarios.hpp"
#include "solver.hpp"
#include "verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ricci {

struct AnalysisTolerances {
    double exponent_lo = -1.3;        ///< accepted power-law exponent range
    double exponent_hi = -0.7;
    double min_decades = 2.0;         ///< t̃ span required past the transient
    double growth_factor = 1.5;       ///< late max ≤ factor × earlier max
    double tol_rate = 0.25;           ///< (t + ĉ) R_max ≥ 2 (1 - tol_rate)
    double residual_ratio = 3.0;      ///< exponential rms ≥ ratio × power rms
    double boundary_fraction = 0.95;  ///< share of records with min R on both ends
    double boundary_floor = 1e-3;     ///< declared floor of normalized boundary length
    double rmax_slack = 1e-6;         ///< slack in dR_max/dt ≤ R_max (R_max - r)
    double excess_fraction = 0.1;     ///< late ∫|R_max - r| < fraction × early
    double monotone = 1e-10;          ///< relative tolerance of the middle-profile checks
    std::size_t min_window = 10;
};

namespace detail {

/// First record past the initial transient (10% of the records).
inline std::size_t transient_end(std::size_t n) { return (n + 9) / 10; }

/// Splits [begin, coord.size()) at the midpoint of the coordinate range: the
/// late window holds the records in the upper half.
struct Split {
    Window early, late;
};

inline Split split_late(std::span<const double> coord, std::size_t begin) {
    const std::size_t n = coord.size();
    if (begin >= n) return {{n, n}, {n, n}};
    const double mid = 0.5 * (coord[begin] + coord[n - 1]);
    std::size_t j = begin;
    while (j < n && coord[j] < mid) ++j;
    return {{begin, j}, {j, n}};
}

inline std::vector<double> log1p_of(std::span<const double> t) {
    std::vector<double> out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = std::log1p(t[j]);
    return out;
}

/// RMS of (y_fit - y)/y, comparable across models.
inline double relative_rms(const FitResult& f, std::span<const double> t, std::span<const double> y) {
    double ss = 0.0;
    for (std::size_t j = f.window.first; j < f.window.last; ++j) {
        double fit = 0.0;
        switch (f.model) {
            case FitModel::power: fit = f.amplitude * std::pow(t[j], f.rate); break;
            case FitModel::log_inverse: fit = 1.0 / (f.offset + f.rate * std::log1p(t[j])); break;
            case FitModel::exponential: fit = f.amplitude * std::exp(f.rate * t[j]); break;
        }
        const double r = (fit - y[j]) / y[j];
        ss += r * r;
    }
    return std::sqrt(ss / f.window.size());
}

template <class Rec, class F>
std::vector<double> column(const std::vector<Rec>& recs, F get) {
    std::vector<double> out(recs.size());
    for (std::size_t j = 0; j < recs.size(); ++j) out[j] = get(recs[j]);
    return out;
}

}  // namespace detail

/// ∫R̃ dÃ ≤ c/t̃: on the late window (log-t̃ spacing) the product t̃·∫R̃dÃ
/// peaks in the first half and the power-law exponent lies in the accepted
/// range.
inline BoundCheck check_total_curvature_unnormalized(const FlowTrace& trace, const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "total_curvature_unnormalized";
    const auto& recs = trace.records;
    const auto t = detail::column(recs, [](const TraceRecord& r) { return r.t_tilde; });
    const auto y = detail::column(recs, [](const TraceRecord& r) { return r.total_R; });
    std::size_t begin = detail::transient_end(recs.size());
    while (begin < recs.size() && !(t[begin] > 0.0)) ++begin;
    const double decades = begin + 1 < recs.size() ? std::log10(t.back() / t[begin]) : 0.0;
    c.metrics.push_back({"decades", decades});
    if (decades < tol.min_decades) {
        c.undecided(Verdict::inconclusive, "insufficient span: " + std::to_string(decades) + " decades of t_tilde");
        return c;
    }
    for (std::size_t j = begin; j < recs.size(); ++j)
        if (!(y[j] > 0.0)) {
            c.undecided(Verdict::hypotheses_not_met, "total curvature not positive at record " + std::to_string(j));
            return c;
        }
    std::vector<double> logt(recs.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t j = begin; j < recs.size(); ++j) logt[j] = std::log(t[j]);
    const auto split = detail::split_late(logt, begin);
    c.window = split.late;
    if (split.late.size() < tol.min_window) {
        c.undecided(Verdict::inconclusive, "late window has fewer than " + std::to_string(tol.min_window) + " records");
        return c;
    }
    const std::size_t half = split.late.first + split.late.size() / 2;
    double sup_first = 0.0, sup_second = 0.0;
    for (std::size_t j = split.late.first; j < split.late.last; ++j) {
        double& sup = j < half ? sup_first : sup_second;
        sup = std::max(sup, t[j] * y[j]);
    }
    const double sup = std::max(sup_first, sup_second);
    const FitResult fit = fit_rate(t, y, FitModel::power, split.late);
    c.constant_found = sup;
    c.metrics.push_back({"exponent", fit.rate});
    c.metrics.push_back({"sup_first_half", sup_first});
    c.metrics.push_back({"sup_second_half", sup_second});
    const double m_trend = (sup_first - sup_second) / sup;
    const double m_exp = std::min(fit.rate - tol.exponent_lo, tol.exponent_hi - fit.rate);
    if (m_trend < 0.0) c.add_note("sup of t_tilde*total_R attained in the second half of the late window");
    if (m_exp < 0.0) c.add_note("power-law exponent " + std::to_string(fit.rate) + " outside the accepted range");
    c.decide(std::min(m_trend, m_exp));
    return c;
}

/// ∫R dA ≤ c/log(1+t): log(1+t)·r over the late window (log(1+t) spacing)
/// stays below growth_factor × its maximum over the preceding window.
inline BoundCheck check_total_curvature_normalized(const NormalizedTrace& nt, const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "total_curvature_normalized";
    const auto& recs = nt.records;
    const auto t = detail::column(recs, [](const NormalizedRecord& r) { return r.t; });
    const auto r = detail::column(recs, [](const NormalizedRecord& x) { return x.r; });
    const std::size_t begin = detail::transient_end(recs.size());
    const auto split = detail::split_late(detail::log1p_of(t), begin);
    c.window = split.late;
    if (split.late.size() < tol.min_window || split.early.size() == 0) {
        c.undecided(Verdict::inconclusive, "late window has fewer than " + std::to_string(tol.min_window) + " records");
        return c;
    }
    for (std::size_t j = begin; j < recs.size(); ++j)
        if (!(r[j] > 0.0)) {
            c.undecided(Verdict::hypotheses_not_met, "total curvature not positive at record " + std::to_string(j));
            return c;
        }
    double early_max = 0.0, late_max = 0.0;
    for (std::size_t j = begin; j < recs.size(); ++j) {
        double& m = j < split.late.first ? early_max : late_max;
        m = std::max(m, std::log1p(t[j]) * r[j]);
    }
    c.constant_found = std::max(early_max, late_max);
    c.metrics.push_back({"mid_window_max", early_max});
    c.metrics.push_back({"late_window_max", late_max});
    const double limit = tol.growth_factor * early_max;
    if (early_max > 0.0) c.decide((limit - late_max) / limit);
    else c.decide(late_max > 0.0 ? -1.0 : 0.0);
    const double last = std::log1p(t.back()) * r.back();
    if (last < 0.5 * late_max) c.add_note("faster than the 1/log(1+t) bound");
    const FitResult li = fit_rate(t, r, FitModel::log_inverse, split.late);
    const FitResult pw = fit_rate(t, r, FitModel::power, split.late);
    const FitResult ex = fit_rate(t, r, FitModel::exponential, split.late);
    const double e_li = detail::relative_rms(li, t, r), e_pw = detail::relative_rms(pw, t, r),
                 e_ex = detail::relative_rms(ex, t, r);
    c.metrics.push_back({"log_inverse_rel_rms", e_li});
    c.metrics.push_back({"power_rel_rms", e_pw});
    c.metrics.push_back({"exponential_rel_rms", e_ex});
    c.metrics.push_back({"power_exponent", pw.rate});
    c.add_note(e_li <= std::min(e_pw, e_ex) ? "log_inverse fit is the best of the three"
                                            : "log_inverse fit is not the best of the three");
    return c;
}

/// R̃_max ≥ c₂ t̃ and ∫R̃² dÃ ≥ c₁ on the late window, with R̃_max strictly
/// increasing there. Requires k < 0 and a normalized boundary length above the
/// declared floor.
inline BoundCheck check_blowup(const FlowTrace& trace, const NormalizedTrace& nt, const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "blowup";
    const auto& recs = trace.records;
    detail::require(recs.size() == nt.records.size(), "analysis", "traces are not aligned");
    if (recs.empty()) {
        c.undecided(Verdict::inconclusive, "empty trace");
        return c;
    }
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& n : nt.records) floor = std::min({floor, n.len_minus, n.len_plus});
    c.metrics.push_back({"boundary_length_floor", floor});
    for (std::size_t j = 0; j < recs.size(); ++j)
        if (!(recs[j].k_minus < 0.0 && recs[j].k_plus < 0.0)) {
            c.undecided(Verdict::hypotheses_not_met, "boundary curvature not negative at record " + std::to_string(j));
            return c;
        }
    if (floor < tol.boundary_floor) {
        c.undecided(Verdict::hypotheses_not_met, "normalized boundary length " + std::to_string(floor) +
                                                     " below the declared floor");
        return c;
    }
    std::size_t begin = detail::transient_end(recs.size());
    while (begin < recs.size() && !(recs[begin].t_tilde > 0.0)) ++begin;
    std::vector<double> logt(recs.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t j = begin; j < recs.size(); ++j) logt[j] = std::log(recs[j].t_tilde);
    const auto split = detail::split_late(logt, begin);
    c.window = split.late;
    if (split.late.size() < tol.min_window) {
        c.undecided(Verdict::inconclusive, "late window has fewer than " + std::to_string(tol.min_window) + " records");
        return c;
    }
    double c1 = std::numeric_limits<double>::infinity(), c2 = c1, inc = c1;
    for (std::size_t j = split.late.first; j < split.late.last; ++j) {
        c1 = std::min(c1, recs[j].total_R2);
        c2 = std::min(c2, recs[j].R_max / recs[j].t_tilde);
        if (j + 1 < split.late.last) {
            const double d = (recs[j + 1].R_max - recs[j].R_max) / std::abs(recs[j].R_max);
            inc = std::min(inc, d > 0.0 ? d : (d == 0.0 ? -std::numeric_limits<double>::min() : d));
        }
    }
    c.constant_found = c2;
    c.metrics.push_back({"c1", c1});
    c.metrics.push_back({"c2", c2});
    c.metrics.push_back({"min_relative_increment", inc});
    const double overall = recs.back().R_max - recs.front().R_max;
    if (inc <= 0.0) c.add_note("R_max not strictly increasing in the late window");
    if (overall <= 0.0) c.add_note("R_max did not increase overall");
    c.decide(std::min({inc, c1, c2, overall > 0.0 ? 1.0 : -1.0}));
    return c;
}

/// R_max(t) ≥ 2/(t + ĉ) with ĉ = -2 A_target/Ã'(0), and the late decay not
/// exponential. Requires the minimum of R on both boundary circles.
inline BoundCheck check_nonexponential(const FlowTrace& trace, const NormalizedTrace& nt,
                                       const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "nonexponential";
    const auto& recs = trace.records;
    detail::require(recs.size() == nt.records.size(), "analysis", "traces are not aligned");
    if (recs.size() < 2) {
        c.undecided(Verdict::inconclusive, "need at least two records");
        return c;
    }
    std::size_t on_both = 0;
    for (const auto& r : recs) on_both += r.rmin_loc == MinLocation::boundary ? 1 : 0;
    const double share = static_cast<double>(on_both) / recs.size();
    c.metrics.push_back({"boundary_min_share", share});
    if (share < tol.boundary_fraction) {
        c.undecided(Verdict::hypotheses_not_met,
                    "min R on both boundary circles for only " + std::to_string(100.0 * share) + "% of records");
        return c;
    }
    const double slope = (recs[1].area - recs[0].area) / (recs[1].t_tilde - recs[0].t_tilde);
    if (!(slope < 0.0)) {
        c.undecided(Verdict::hypotheses_not_met, "area not decreasing initially");
        return c;
    }
    const double c_hat = -2.0 * nt.a_target / slope;
    c.metrics.push_back({"c_hat", c_hat});
    const auto t = detail::column(nt.records, [](const NormalizedRecord& r) { return r.t; });
    const auto R = detail::column(nt.records, [](const NormalizedRecord& r) { return r.R_max; });
    const auto split = detail::split_late(detail::log1p_of(t), detail::transient_end(recs.size()));
    c.window = split.late;
    if (split.late.size() < tol.min_window) {
        c.undecided(Verdict::inconclusive, "late window has fewer than " + std::to_string(tol.min_window) + " records");
        return c;
    }
    for (std::size_t j = split.late.first; j < split.late.last; ++j)
        if (!(R[j] > 0.0)) {
            c.undecided(Verdict::hypotheses_not_met, "R_max not positive at record " + std::to_string(j));
            return c;
        }
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = split.late.first; j < split.late.last; ++j) inf = std::min(inf, (t[j] + c_hat) * R[j]);
    const FitResult pw = fit_rate(t, R, FitModel::power, split.late);
    const FitResult ex = fit_rate(t, R, FitModel::exponential, split.late);
    c.constant_found = inf;
    c.metrics.push_back({"power_rms", pw.rms});
    c.metrics.push_back({"exponential_rms", ex.rms});
    c.metrics.push_back({"power_exponent", pw.rate});
    const double bound = 2.0 * (1.0 - tol.tol_rate);
    const double m_a = (inf - bound) / bound;
    const double m_b = ex.rms > 0.0 ? (ex.rms - tol.residual_ratio * pw.rms) / ex.rms : -1.0;
    if (m_a < 0.0) c.add_note("(t + c_hat) R_max falls below " + std::to_string(bound));
    if (m_b < 0.0) c.add_note("exponential fit is not clearly worse than the power fit");
    c.decide(std::min(m_a, m_b));
    return c;
}

/// Constants of the length comparison lemmas for one snapshot, in the
/// arclength gauge: α = max(0, -min R), C = max |f_s/f| over parallels
/// (segment slopes of log f and the boundary curvatures), ρ = half the
/// meridian length.
struct LemmaConstants {
    double alpha = 0.0;
    double C = 0.0;
    double rho = 0.0;

    double exponent() const { return 2.0 * rho * (alpha * rho + C); }
};

/// Rounding allowance in log space for the length comparison checks; the
/// flat cylinder attains both bounds with equality.
inline constexpr double kLemmaLogSlack = 1e-12;

inline LemmaConstants lemma_constants(const FlowState& s) {
    const ScalarField R = scalar_curvature(s);
    const auto arc = to_arclength_profile(s);
    const auto k = boundary_geodesic_curvature(s);
    LemmaConstants lc;
    lc.alpha = std::max(0.0, -*std::min_element(R.begin(), R.end()));
    lc.rho = 0.5 * arc.s.back();
    lc.C = std::max(std::abs(k.minus), std::abs(k.plus));
    for (std::size_t i = 0; i + 1 < arc.s.size(); ++i)
        lc.C = std::max(lc.C, std::abs(std::log(arc.f[i + 1] / arc.f[i])) / (arc.s[i + 1] - arc.s[i]));
    return lc;
}

/// L_s e^{-X} ≤ L_q ≤ L_s e^{X}, X = 2ρ(αρ + C), for every pair of parallels;
/// the margin is X minus the spread of log L.
inline BoundCheck check_parallel_bounds(const FlowState& s) {
    BoundCheck c;
    c.name = "parallel_bounds";
    const auto lc = lemma_constants(s);
    const auto arc = to_arclength_profile(s);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double f : arc.f) {
        lo = std::min(lo, std::log(2.0 * std::numbers::pi * f));
        hi = std::max(hi, std::log(2.0 * std::numbers::pi * f));
    }
    c.constant_found = lc.C;
    c.metrics.push_back({"alpha", lc.alpha});
    c.metrics.push_back({"rho", lc.rho});
    c.metrics.push_back({"log_spread", hi - lo});
    c.window = {0, arc.f.size()};
    c.decide(lc.exponent() - (hi - lo) + kLemmaLogSlack);
    return c;
}

/// 2ρ L e^{-X} ≤ A ≤ 2ρ L e^{X} with L the shorter boundary circle and
/// A = 2π∫f ds in the arclength gauge (trapezoid in s).
inline BoundCheck check_area_bounds(const FlowState& s) {
    BoundCheck c;
    c.name = "area_bounds";
    const auto lc = lemma_constants(s);
    const auto arc = to_arclength_profile(s);
    double A = 0.0;
    for (std::size_t i = 0; i + 1 < arc.s.size(); ++i)
        A += 0.5 * (arc.s[i + 1] - arc.s[i]) * (arc.f[i] + arc.f[i + 1]);
    A *= 2.0 * std::numbers::pi;
    const double L = 2.0 * std::numbers::pi * std::min(arc.f.front(), arc.f.back());
    const double ratio = A / (2.0 * lc.rho * L);
    c.constant_found = lc.C;
    c.metrics.push_back({"alpha", lc.alpha});
    c.metrics.push_back({"rho", lc.rho});
    c.metrics.push_back({"area_arclength", A});
    c.metrics.push_back({"log_ratio", std::log(ratio)});
    c.window = {0, arc.f.size()};
    c.decide(lc.exponent() - std::abs(std::log(ratio)) + kLemmaLogSlack);
    return c;
}

/// For symmetric runs whose initial curvature decreases from the middle:
/// at every snapshot the middle node attains max R (up to monotone·max|R|)
/// and R is non-increasing from the middle toward both ends.
inline BoundCheck check_decreasing_from_middle(const std::vector<FlowState>& states,
                                               const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "decreasing_from_middle";
    if (states.empty()) {
        c.undecided(Verdict::inconclusive, "no snapshots");
        return c;
    }
    HypothesisTolerances ht;
    ht.monotone = tol.monotone;
    const auto rep = validate_hypotheses(states.front(), ht);
    if (!rep.reflection_symmetric) {
        c.undecided(Verdict::not_applicable, "initial data not reflection symmetric");
        return c;
    }
    if (!rep.decreasing_from_middle) {
        c.undecided(Verdict::hypotheses_not_met, "initial curvature not decreasing from the middle");
        return c;
    }
    c.window = {0, states.size()};
    double margin = std::numeric_limits<double>::infinity();
    std::size_t worst = 0, off_middle = 0;
    for (std::size_t j = 0; j < states.size(); ++j) {
        const ScalarField R = scalar_curvature(states[j]);
        const double scale = detail::max_abs(R);
        const std::size_t n = R.size() - 1, m = n / 2;
        const double slack = tol.monotone * scale;
        const double rmax = *std::max_element(R.begin(), R.end());
        double mj = scale > 0.0 ? (R[m] - rmax + slack) / scale : 0.0;
        if (R[m] < rmax - slack) ++off_middle;
        for (std::size_t i = m; i < n; ++i) {
            if (scale > 0.0) mj = std::min(mj, (R[i] - R[i + 1] + slack) / scale);
            if (scale > 0.0) mj = std::min(mj, (R[n - i] - R[n - i - 1] + slack) / scale);
        }
        if (mj < margin) {
            margin = mj;
            worst = j;
        }
    }
    c.metrics.push_back({"worst_snapshot", static_cast<double>(worst)});
    c.metrics.push_back({"argmax_off_middle", static_cast<double>(off_middle)});
    c.decide(margin);
    return c;
}

/// max_t |L_mid(t) - L_mid(0)·exp(½∫₀ᵗ (r - R_max) dτ)| in the normalized
/// flow, trapezoid in t. Exact in the continuum when the maximum of R sits on
/// the middle parallel.
inline double middle_parallel_identity(const NormalizedTrace& nt) {
    const auto& recs = nt.records;
    if (recs.empty()) return 0.0;
    double integral = 0.0, worst = 0.0;
    for (std::size_t j = 1; j < recs.size(); ++j) {
        integral += 0.5 * (recs[j].t - recs[j - 1].t) *
                    ((recs[j].r - recs[j].R_max) + (recs[j - 1].r - recs[j - 1].R_max));
        worst = std::max(worst, std::abs(recs[j].len_mid - recs.front().len_mid * std::exp(0.5 * integral)));
    }
    return worst;
}

/// Discrete form of dR_max/dt ≤ R_max (R_max - r): the secant slope between
/// consecutive records against the trapezoid average of the right side.
inline BoundCheck check_rmax_inequality(const NormalizedTrace& nt, const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "rmax_inequality";
    const auto& recs = nt.records;
    if (recs.size() < 2) {
        c.undecided(Verdict::inconclusive, "need at least two records");
        return c;
    }
    c.window = {0, recs.size()};
    double margin = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
        const double dt = recs[j + 1].t - recs[j].t;
        if (!(dt > 0.0)) continue;
        const double lhs = (recs[j + 1].R_max - recs[j].R_max) / dt;
        const double F0 = recs[j].R_max * (recs[j].R_max - recs[j].r);
        const double F1 = recs[j + 1].R_max * (recs[j + 1].R_max - recs[j + 1].r);
        const double m = 0.5 * (F0 + F1) + tol.rmax_slack - lhs;
        if (m < margin) {
            margin = m;
            worst = j;
        }
    }
    c.metrics.push_back({"worst_pair", static_cast<double>(worst)});
    c.decide(margin);
    return c;
}

/// ∫₀ᵗ |R_max - r| dτ levels off: the late-window contribution is below
/// excess_fraction × the contribution before it.
inline BoundCheck check_excess_integral(const NormalizedTrace& nt, const AnalysisTolerances& tol = {}) {
    BoundCheck c;
    c.name = "excess_integral";
    const auto& recs = nt.records;
    const auto t = detail::column(recs, [](const NormalizedRecord& r) { return r.t; });
    const auto split = detail::split_late(detail::log1p_of(t), detail::transient_end(recs.size()));
    c.window = split.late;
    if (split.late.size() < tol.min_window) {
        c.undecided(Verdict::inconclusive, "late window has fewer than " + std::to_string(tol.min_window) + " records");
        return c;
    }
    double early = 0.0, late = 0.0;
    for (std::size_t j = 1; j < recs.size(); ++j) {
        const double inc = 0.5 * (t[j] - t[j - 1]) *
                           (std::abs(recs[j].R_max - recs[j].r) + std::abs(recs[j - 1].R_max - recs[j - 1].r));
        (j <= split.late.first ? early : late) += inc;
    }
    c.constant_found = early + late;
    c.metrics.push_back({"early_integral", early});
    c.metrics.push_back({"late_increment", late});
    const double limit = tol.excess_fraction * early;
    c.decide(limit > 0.0 ? (limit - late) / limit : (late == 0.0 ? 0.0 : -1.0));
    return c;
}

/// max over record pairs of |d/dt̃ log ∫R̃dÃ + r_∂/2| (secant slope against
/// the mean of r_∂); NaN when r_∂ is undefined. With ∂g̃/∂t̃ = -R̃g̃ and k fixed,
/// (∫R̃dÃ)' = ∮kR̃ds̃ = r_∂∮k ds̃ = -½ r_∂ ∫R̃dÃ.
inline double boundary_average_identity_residual(const FlowTrace& trace) {
    const auto& recs = trace.records;
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
        const double dt = recs[j + 1].t_tilde - recs[j].t_tilde;
        if (!(dt > 0.0)) continue;
        if (std::isnan(recs[j].r_boundary) || std::isnan(recs[j + 1].r_boundary))
            return std::numeric_limits<double>::quiet_NaN();
        const double slope = std::log(recs[j + 1].total_R / recs[j].total_R) / dt;
        worst = std::max(worst, std::abs(slope + 0.25 * (recs[j].r_boundary + recs[j + 1].r_boundary)));
    }
    return worst;
}

}  // namespace ricci
