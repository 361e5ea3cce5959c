#include <ricci/scenarios.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

using namespace ricci;

ScenarioSpec perturbed_band() {
    ScenarioSpec s;
    s.profile = ProfileKind::cos_band;
    s.rho = oracle::pi / 4.0;
    s.n = 128;
    s.w0 = InitialExponent::cosine_bump;
    s.epsilon = 0.05;
    s.mode = 2;
    return s;
}

}  // namespace

TEST(Scenarios, MakeInitialIsDeterministic) {
    const ScenarioSpec s = perturbed_band();
    const FlowState a = make_initial(s), b = make_initial(s);
    ASSERT_EQ(a.w.size(), b.w.size());
    for (std::size_t i = 0; i < a.w.size(); ++i) EXPECT_EQ(a.w[i], b.w[i]);
}

TEST(Scenarios, CosineBumpValues) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.rho = 1.0;
    s.n = 64;
    s.w0 = InitialExponent::cosine_bump;
    s.epsilon = 1e-3;
    const FlowState st = make_initial(s);
    for (std::size_t i = 0; i < st.w.size(); ++i)
        EXPECT_NEAR(st.w[i], oracle::heat_mode(st.geometry().sigma[i], 0.0, 1.0, 1e-3), 1e-18);
}

TEST(Scenarios, SphereBandSatisfiesEveryHypothesis) {
    const auto rep = validate_hypotheses(make_initial(ScenarioSpec{}));
    EXPECT_TRUE(rep.r_nonneg);
    EXPECT_TRUE(rep.k_nonpos);
    EXPECT_TRUE(rep.reflection_symmetric);
    EXPECT_TRUE(rep.decreasing_from_middle);
}

TEST(Scenarios, OddModeBumpIsAsymmetric) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.rho = 1.0;
    s.n = 64;
    s.w0 = InitialExponent::cosine_bump;
    s.epsilon = 0.1;
    s.mode = 1;
    EXPECT_FALSE(validate_hypotheses(make_initial(s)).reflection_symmetric);
}

TEST(Scenarios, EvenModeBumpIsExactlySymmetric) {
    const FlowState st = make_initial(perturbed_band());
    const std::size_t n = st.w.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) EXPECT_EQ(st.w[i], st.w[n - i]);
    EXPECT_TRUE(validate_hypotheses(st).reflection_symmetric);
}

TEST(Scenarios, PerturbedBandFlagsMatchDirectScanOfInitialCurvature) {
    // R0 = e^{-2w}(2 - 2(w'' + (f0'/f0) w')) from the analytic bump.
    const ScenarioSpec spec = perturbed_band();
    const FlowState st = make_initial(spec);
    const auto& g = st.geometry();
    const double k = oracle::pi / (2.0 * spec.rho) * spec.mode;
    std::vector<double> R(g.nodes());
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double x = g.sigma[i];
        const double w = spec.epsilon * std::cos(k * (x + spec.rho));
        const double wp = -spec.epsilon * k * std::sin(k * (x + spec.rho));
        const double wpp = -k * k * w;
        R[i] = std::exp(-2.0 * w) * (2.0 - 2.0 * (wpp - std::tan(x) * wp));
    }
    const std::size_t n = R.size() - 1, m = n / 2;
    bool decreasing = true;
    for (std::size_t i = m; i < n; ++i) decreasing = decreasing && R[i + 1] <= R[i] && R[n - i - 1] <= R[n - i];
    const auto rep = validate_hypotheses(st);
    EXPECT_EQ(rep.decreasing_from_middle, decreasing);
    EXPECT_FALSE(rep.decreasing_from_middle);
    EXPECT_TRUE(rep.r_nonneg);
    EXPECT_TRUE(rep.k_nonpos);
    EXPECT_LT(R[m], R[0]);
}

TEST(Scenarios, RejectsInvalidSpecs) {
    ScenarioSpec s;
    s.rho = 1.6;
    EXPECT_THROW(make_initial(s), Error);
    s = ScenarioSpec{};
    s.epsilon = -1.0;
    EXPECT_THROW(make_initial(s), Error);
    s = ScenarioSpec{};
    s.mode = 0;
    EXPECT_THROW(make_initial(s), Error);
    s = ScenarioSpec{};
    s.n = 101;
    EXPECT_THROW(make_initial(s), Error);
}

TEST(Scenarios, FlagsAreDeterministic) {
    const FlowState st = make_initial(perturbed_band());
    const auto a = validate_hypotheses(st), b = validate_hypotheses(st);
    EXPECT_EQ(a.r_nonneg, b.r_nonneg);
    EXPECT_EQ(a.k_nonpos, b.k_nonpos);
    EXPECT_EQ(a.reflection_symmetric, b.reflection_symmetric);
    EXPECT_EQ(a.decreasing_from_middle, b.decreasing_from_middle);
}
