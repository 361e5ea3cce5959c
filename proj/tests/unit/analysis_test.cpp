#include <ricci/analysis.hpp>
#include <ricci/fit.hpp>
#include <ricci/potential.hpp>
#include <ricci/scenarios.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using namespace ricci;

FlowState band(int n) {
    ScenarioSpec s;
    s.n = n;
    return make_initial(s);
}

FlowState flat(int n) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.rho = 1.0;
    s.n = n;
    return make_initial(s);
}

std::vector<FlowState> band_snapshots(int n, double t_stop, std::int64_t every) {
    std::vector<FlowState> out;
    evolve(band(n), StepperConfig{}, StopRule{StopKind::t_tilde, t_stop}, every,
           [&](const FlowState& s, const TraceRecord&) { out.push_back(s); });
    return out;
}

std::vector<double> sample(const std::vector<double>& t, double (*f)(double)) {
    std::vector<double> y(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) y[j] = f(t[j]);
    return y;
}

}  // namespace

TEST(Fit, RecoversPowerLaw) {
    const auto t = oracle::log_spaced(1.0, 1e3, 50);
    const auto y = sample(t, [](double x) { return 7.0 / x; });
    const FitResult f = fit_rate(t, y, FitModel::power, {0, t.size()});
    EXPECT_NEAR(f.rate, -1.0, 1e-10);
    EXPECT_NEAR(f.amplitude, 7.0, 7e-10);
    EXPECT_LT(f.rms, 1e-12);
}

TEST(Fit, RecoversLogInverse) {
    const auto t = oracle::log_spaced(0.1, 1e3, 50);
    const auto y = sample(t, [](double x) { return 3.0 / std::log1p(x); });
    const FitResult f = fit_rate(t, y, FitModel::log_inverse, {0, t.size()});
    EXPECT_NEAR(f.amplitude, 3.0, 3e-10);
    EXPECT_NEAR(f.offset, 0.0, 1e-12);
}

TEST(Fit, RecoversExponential) {
    std::vector<double> t(40);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = 0.1 * j;
    const auto y = sample(t, [](double x) { return 5.0 * std::exp(-2.0 * x); });
    const FitResult f = fit_rate(t, y, FitModel::exponential, {0, t.size()});
    EXPECT_NEAR(f.rate, -2.0, 2e-10);
    EXPECT_NEAR(f.amplitude, 5.0, 5e-10);
}

TEST(Fit, RejectsBadInput) {
    const auto t = oracle::log_spaced(1.0, 10.0, 20);
    std::vector<double> y(t.size(), 1.0);
    y[5] = -1.0;
    EXPECT_THROW(fit_rate(t, y, FitModel::power, {0, t.size()}), Error);
    EXPECT_THROW(fit_rate(t, std::vector<double>(t.size(), 1.0), FitModel::power, {0, 5}), Error);
}

TEST(Checkers, UnnormalizedDecayPassesForInverseTime) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1e-2, 1e3, 200),
                                                 [](TraceRecord& r) { r.total_R = 4.0 / r.t_tilde; });
    const BoundCheck c = check_total_curvature_unnormalized(tr);
    EXPECT_EQ(c.verdict, Verdict::pass) << c.notes;
    EXPECT_NEAR(c.constant_found, 4.0, 1e-12);
}

TEST(Checkers, UnnormalizedDecayFailsForConstant) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1e-2, 1e3, 200),
                                                 [](TraceRecord& r) { r.total_R = 3.0; });
    const BoundCheck c = check_total_curvature_unnormalized(tr);
    EXPECT_EQ(c.verdict, Verdict::fail);
}

TEST(Checkers, UnnormalizedDecayShortSpanIsInconclusive) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1.0, 10.0, 200),
                                                 [](TraceRecord& r) { r.total_R = 4.0 / r.t_tilde; });
    EXPECT_EQ(check_total_curvature_unnormalized(tr).verdict, Verdict::inconclusive);
}

TEST(Checkers, NormalizedDecayPassesForLogInverse) {
    const NormalizedTrace nt = oracle::synthetic_normalized(
        oracle::log_spaced(1e-1, 1e4, 200), [](NormalizedRecord& r) { r.r = 2.0 / std::log1p(r.t); });
    const BoundCheck c = check_total_curvature_normalized(nt);
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_NEAR(c.constant_found, 2.0, 1e-12);
    EXPECT_EQ(c.notes.find("faster than the 1/log(1+t) bound"), std::string::npos);
}

TEST(Checkers, NormalizedDecayFasterThanBoundStillPasses) {
    const NormalizedTrace nt = oracle::synthetic_normalized(
        oracle::log_spaced(1e-1, 1e4, 200), [](NormalizedRecord& r) { r.r = 2.0 / (1.0 + r.t); });
    const BoundCheck c = check_total_curvature_normalized(nt);
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_NE(c.notes.find("faster than the 1/log(1+t) bound"), std::string::npos);
}

TEST(Checkers, NormalizedDecayFailsForGrowth) {
    const NormalizedTrace nt = oracle::synthetic_normalized(
        oracle::log_spaced(1e-1, 1e4, 200), [](NormalizedRecord& r) { r.r = 1.0; });
    EXPECT_EQ(check_total_curvature_normalized(nt).verdict, Verdict::fail);
}

TEST(Checkers, BlowupLinearGrowth) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1e-2, 1e2, 100), [](TraceRecord& r) {
        r.R_max = 0.3 * r.t_tilde;
        r.total_R2 = 1.2;
    });
    const BoundCheck c = check_blowup(tr, normalize_trace(tr));
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_NEAR(c.constant_found, 0.3, 1e-12);
    double c1 = 0.0;
    for (const auto& [k, v] : c.metrics)
        if (k == "c1") c1 = v;
    EXPECT_EQ(c1, 1.2);
}

TEST(Checkers, BlowupNeedsNegativeBoundaryCurvature) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1e-2, 1e2, 100), [](TraceRecord& r) {
        r.R_max = 0.0;
        r.k_minus = r.k_plus = 0.0;
    });
    EXPECT_EQ(check_blowup(tr, normalize_trace(tr)).verdict, Verdict::hypotheses_not_met);
}

namespace {

/// Trace whose initial area slope is -2 (so ĉ = 1) with R_max(t) given.
std::pair<FlowTrace, NormalizedTrace> nonexp_trace(double (*Rmax)(double)) {
    const auto t = [] {
        std::vector<double> v{0.0};
        const auto l = oracle::log_spaced(1e-2, 1e2, 120);
        v.insert(v.end(), l.begin(), l.end());
        return v;
    }();
    FlowTrace tr = oracle::synthetic_trace(t, [](TraceRecord& r) { r.area = 1.0 - 2.0 * r.t_tilde; });
    for (std::size_t j = 2; j < tr.records.size(); ++j) tr.records[j].area = tr.records[1].area;
    NormalizedTrace nt = oracle::synthetic_normalized(t, [&](NormalizedRecord& r) { r.R_max = Rmax(r.t); });
    return {tr, nt};
}

}  // namespace

TEST(Checkers, NonexponentialPassesForHarmonicDecay) {
    const auto [tr, nt] = nonexp_trace([](double t) { return 2.0 / (t + 1.0); });
    const BoundCheck c = check_nonexponential(tr, nt);
    EXPECT_EQ(c.verdict, Verdict::pass) << c.notes;
    double c_hat = 0.0;
    for (const auto& [k, v] : c.metrics)
        if (k == "c_hat") c_hat = v;
    EXPECT_NEAR(c_hat, 1.0, 1e-12);
    EXPECT_NEAR(c.constant_found, 2.0, 1e-12);
}

TEST(Checkers, NonexponentialFailsForExponentialDecay) {
    const auto [tr, nt] = nonexp_trace([](double t) { return std::exp(-t); });
    const BoundCheck c = check_nonexponential(tr, nt);
    EXPECT_EQ(c.verdict, Verdict::fail);
    EXPECT_NE(c.notes.find("falls below"), std::string::npos);
    EXPECT_NE(c.notes.find("not clearly worse"), std::string::npos);
}

TEST(Checkers, NonexponentialNeedsMinimumOnBothBoundaries) {
    auto [tr, nt] = nonexp_trace([](double t) { return 2.0 / (t + 1.0); });
    for (auto& r : tr.records) r.rmin_loc = MinLocation::middle;
    EXPECT_EQ(check_nonexponential(tr, nt).verdict, Verdict::hypotheses_not_met);
}

TEST(Lemmas, FlatCylinderHoldsWithEquality) {
    const FlowState s = flat(64);
    const auto lc = lemma_constants(s);
    EXPECT_EQ(lc.alpha, 0.0);
    EXPECT_EQ(lc.C, 0.0);
    const BoundCheck p = check_parallel_bounds(s), a = check_area_bounds(s);
    EXPECT_EQ(p.verdict, Verdict::pass);
    EXPECT_EQ(p.worst_margin, kLemmaLogSlack);
    EXPECT_EQ(a.verdict, Verdict::pass);
    EXPECT_NEAR(a.worst_margin, kLemmaLogSlack, 1e-15);
}

TEST(Lemmas, SphereBandClosedForm) {
    const FlowState s = band(256);
    const auto lc = lemma_constants(s);
    EXPECT_EQ(lc.alpha, 0.0);
    EXPECT_NEAR(lc.C, std::tan(oracle::pi / 4.0), 1e-12);
    EXPECT_NEAR(lc.rho, oracle::pi / 4.0, 1e-14);
    const BoundCheck p = check_parallel_bounds(s);
    EXPECT_EQ(p.verdict, Verdict::pass);
    // Spread of log L between the middle (2π) and the boundary (π√2).
    EXPECT_NEAR(p.worst_margin, 2.0 * lc.rho * lc.C - std::log(std::sqrt(2.0)), 1e-11);
    EXPECT_EQ(check_area_bounds(s).verdict, Verdict::pass);
}

TEST(Lemmas, HoldAlongEvolution) {
    for (const FlowState& s : band_snapshots(64, 0.3, 200)) {
        EXPECT_GE(check_parallel_bounds(s).worst_margin, 0.0);
        EXPECT_GE(check_area_bounds(s).worst_margin, 0.0);
    }
}

TEST(MiddleProfile, SphereBandStaysDecreasingFromMiddle) {
    const BoundCheck c = check_decreasing_from_middle(band_snapshots(64, 0.3, 100));
    EXPECT_EQ(c.verdict, Verdict::pass) << c.notes;
}

TEST(MiddleProfile, AsymmetricDataIsNotApplicable) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.n = 32;
    s.w0 = InitialExponent::cosine_bump;
    s.epsilon = 0.1;
    s.mode = 1;
    EXPECT_EQ(check_decreasing_from_middle({make_initial(s)}).verdict, Verdict::not_applicable);
}

TEST(MiddleProfile, PerturbedBandDoesNotMeetHypotheses) {
    ScenarioSpec s;
    s.n = 64;
    s.w0 = InitialExponent::cosine_bump;
    s.epsilon = 0.05;
    s.mode = 2;
    EXPECT_EQ(check_decreasing_from_middle({make_initial(s)}).verdict, Verdict::hypotheses_not_met);
}

TEST(MiddleProfile, IdentityVanishesOnFlatTrace) {
    const NormalizedTrace nt =
        oracle::synthetic_normalized(oracle::log_spaced(0.1, 10.0, 20), [](NormalizedRecord& r) { r.len_mid = 3.0; });
    EXPECT_EQ(middle_parallel_identity(nt), 0.0);
}

TEST(MiddleProfile, IdentityMatchesClosedForm) {
    // r - R_max = -2 constant: L = L0 e^{-t}.
    std::vector<double> t(2001);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = 1e-3 * j;
    const NormalizedTrace nt = oracle::synthetic_normalized(t, [](NormalizedRecord& r) {
        r.r = 1.0;
        r.R_max = 3.0;
        r.len_mid = 5.0 * std::exp(-r.t);
    });
    EXPECT_LE(middle_parallel_identity(nt), 1e-12);
}

TEST(MiddleProfile, RmaxInequality) {
    std::vector<double> t(200);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = 0.01 * j;
    // R_max = 1/(1 - t/4) solves R' = R²/4 ≤ R(R - r) with r = 0.
    const NormalizedTrace ok = oracle::synthetic_normalized(t, [](NormalizedRecord& r) {
        r.R_max = 1.0 / (1.0 - 0.25 * r.t);
        r.r = 0.0;
    });
    EXPECT_EQ(check_rmax_inequality(ok).verdict, Verdict::pass);
    const NormalizedTrace bad = oracle::synthetic_normalized(t, [](NormalizedRecord& r) {
        r.R_max = 1.0 + r.t;
        r.r = 1.0 + r.t;
    });
    EXPECT_EQ(check_rmax_inequality(bad).verdict, Verdict::fail);
}

TEST(MiddleProfile, ExcessIntegral) {
    const auto t = oracle::log_spaced(1e-2, 1e4, 200);
    const NormalizedTrace levels = oracle::synthetic_normalized(t, [](NormalizedRecord& r) {
        r.r = 1.0;
        r.R_max = 1.0 + std::exp(-r.t);
    });
    EXPECT_EQ(check_excess_integral(levels).verdict, Verdict::pass);
    const NormalizedTrace grows = oracle::synthetic_normalized(t, [](NormalizedRecord& r) {
        r.r = 1.0;
        r.R_max = 2.0;
    });
    EXPECT_EQ(check_excess_integral(grows).verdict, Verdict::fail);
}

TEST(MiddleProfile, BoundaryAverageIdentityAlongRun) {
    std::vector<double> res;
    for (std::int64_t every : {400, 200}) {
        const FlowTrace tr = evolve(band(32), StepperConfig{}, StopRule{StopKind::t_tilde, 0.2}, every);
        res.push_back(boundary_average_identity_residual(tr));
    }
    EXPECT_LT(res[1], res[0]);
    EXPECT_LT(res[1], 0.05);
    ScenarioSpec f;
    f.profile = ProfileKind::flat;
    f.n = 32;
    EXPECT_TRUE(std::isnan(boundary_average_identity_residual(
        evolve(make_initial(f), StepperConfig{}, StopRule{StopKind::wall_steps, 10}, 1))));
}

TEST(Potential, ConstantCurvatureGivesZero) {
    for (const FlowState& s : {band(64), flat(64)}) {
        const auto f = solve_potential(s);
        for (double x : f) EXPECT_EQ(x, 0.0);
        EXPECT_EQ(h_monitor(s), 0.0);
    }
}

TEST(Potential, DirectSubstitutionOnEvolvedStates) {
    for (const FlowState& s : band_snapshots(64, 0.5, 1000)) {
        const auto f = solve_potential(s);
        const auto R = scalar_curvature(s);
        const double r = volume_average(s, R);
        const auto lap = laplace_metric_fv(s, f);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < R.size(); ++i) {
            num = std::max(num, std::abs(lap[i] - (R[i] - r)));
            den = std::max(den, std::abs(R[i] - r));
        }
        EXPECT_LE(num, 1e-10 * den);
        for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(f[i], f[f.size() - 1 - i]);
    }
}

TEST(Checkers, AreDeterministic) {
    const FlowTrace tr = oracle::synthetic_trace(oracle::log_spaced(1e-2, 1e3, 200),
                                                 [](TraceRecord& r) { r.total_R = 4.0 / r.t_tilde; });
    const BoundCheck a = check_total_curvature_unnormalized(tr), b = check_total_curvature_unnormalized(tr);
    EXPECT_EQ(a.worst_margin, b.worst_margin);
    EXPECT_EQ(a.constant_found, b.constant_found);
    EXPECT_EQ(a.notes, b.notes);
}
