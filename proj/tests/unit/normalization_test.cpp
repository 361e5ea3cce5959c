#include <ricci/normalization.hpp>
#include <ricci/scenarios.hpp>
#include <ricci/solver.hpp>

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

struct RecordedRun {
    FlowTrace trace;
    std::vector<FlowState> states;
};

RecordedRun run_with_states(const FlowState& init, const StopRule& stop, std::int64_t every) {
    RecordedRun r;
    r.trace = evolve(init, StepperConfig{}, stop, every, [&](const FlowState& s, const TraceRecord&) { r.states.push_back(s); });
    return r;
}

}  // namespace

TEST(Normalization, SphereBandAtTimeZero) {
    FlowTrace tr;
    tr.records.push_back(observe(band(256), 0, 0.0));
    const NormalizedTrace nt = normalize_trace(tr, 1.0);
    EXPECT_NEAR(nt.records[0].phi, 1.0 / oracle::kSphereArea, 1e-12);
    EXPECT_NEAR(nt.records[0].phi, 0.112540, 1e-6);
    EXPECT_NEAR(nt.records[0].r, 2.0 * oracle::kSphereArea, 1e-8);
    EXPECT_NEAR(nt.records[0].r, 17.771531, 1e-6);
    EXPECT_EQ(nt.records[0].t, 0.0);
}

TEST(Normalization, FlatCylinderIsStationary) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.n = 32;
    s.rho = 1.0;
    const FlowTrace tr = evolve(make_initial(s), StepperConfig{}, StopRule{StopKind::wall_steps, 200}, 10);
    const NormalizedTrace nt = normalize_trace(tr, 1.0);
    const double A0 = tr.records.front().area;
    for (std::size_t j = 0; j < tr.records.size(); ++j) {
        EXPECT_NEAR(nt.records[j].t, tr.records[j].t_tilde / A0, 1e-15);
        EXPECT_EQ(nt.records[j].len_mid, nt.records[0].len_mid);
        EXPECT_EQ(nt.records[j].R_max, 0.0);
    }
}

TEST(Normalization, ConstantAreaGivesLinearTimeMap) {
    const double A0 = 2.5;
    const auto tt = oracle::log_spaced(1e-2, 10.0, 40);
    std::vector<double> t{0.0};
    t.insert(t.end(), tt.begin(), tt.end());
    const FlowTrace tr = oracle::synthetic_trace(t, [&](TraceRecord& r) { r.area = A0; });
    const NormalizedTrace nt = normalize_trace(tr, 1.0);
    for (std::size_t j = 0; j < t.size(); ++j) EXPECT_NEAR(nt.records[j].t, t[j] / A0, 1e-14 * (1.0 + t[j]));
    const BoundCheck c = time_map_bounds_check(tr, nt);
    EXPECT_EQ(c.verdict, Verdict::pass);
}

TEST(Normalization, TimeMapHoldsOnFlatCylinder) {
    ScenarioSpec s;
    s.profile = ProfileKind::flat;
    s.n = 32;
    const FlowTrace tr = evolve(make_initial(s), StepperConfig{}, StopRule{StopKind::wall_steps, 100}, 1);
    const BoundCheck c = time_map_bounds_check(tr, normalize_trace(tr, 1.0));
    EXPECT_EQ(c.verdict, Verdict::pass);
    EXPECT_GE(c.worst_margin, 0.0);
}

TEST(Normalization, TimeMapShortSpanIsInconclusive) {
    const FlowTrace tr = oracle::synthetic_trace({0.0, 1.0, 2.0, 5.0}, [](TraceRecord&) {});
    EXPECT_EQ(time_map_bounds_check(tr, normalize_trace(tr)).verdict, Verdict::inconclusive);
}

TEST(Normalization, DenormalizeRoundTrip) {
    const FlowTrace tr = evolve(band(32), StepperConfig{}, StopRule{StopKind::t_tilde, 0.2}, 500);
    for (double a_target : {1.0, 3.7}) {
        const NormalizedTrace nt = normalize_trace(tr, a_target);
        for (std::size_t j = 0; j < tr.records.size(); ++j) {
            const TraceRecord back = denormalize(nt.records[j], a_target);
            const TraceRecord& src = tr.records[j];
            EXPECT_NEAR(back.area, src.area, 1e-14 * src.area);
            EXPECT_NEAR(back.R_max, src.R_max, 1e-14 * src.R_max);
            EXPECT_NEAR(back.total_R2, src.total_R2, 1e-14 * src.total_R2);
            EXPECT_NEAR(back.len_mid, src.len_mid, 1e-14 * src.len_mid);
            EXPECT_NEAR(back.k_plus, src.k_plus, 1e-14);
            EXPECT_EQ(nt.records[j].total_R, src.total_R);
        }
    }
}

TEST(Normalization, NormalizedTimeIsConcaveWhileAreaShrinks) {
    const FlowTrace tr = evolve(band(32), StepperConfig{}, StopRule{StopKind::t_tilde, 0.5}, 200);
    const NormalizedTrace nt = normalize_trace(tr, 1.0);
    for (std::size_t j = 1; j < nt.records.size(); ++j) {
        EXPECT_GT(nt.records[j].t, nt.records[j - 1].t);
        EXPECT_GE(nt.records[j].phi, nt.records[j - 1].phi);
    }
}

TEST(Normalization, RejectsMalformedTraces) {
    FlowTrace bad_area = oracle::synthetic_trace({0.0, 1.0}, [](TraceRecord& r) { r.area = 0.0; });
    EXPECT_THROW(normalize_trace(bad_area), Error);
    FlowTrace bad_time = oracle::synthetic_trace({0.0, 1.0, 1.0}, [](TraceRecord&) {});
    EXPECT_THROW(normalize_trace(bad_time), Error);
    EXPECT_THROW(normalize_trace(FlowTrace{}, 0.0), Error);
}

TEST(Normalization, ConformalFactorResidual) {
    ScenarioSpec f;
    f.profile = ProfileKind::flat;
    f.n = 32;
    const RecordedRun flat = run_with_states(make_initial(f), StopRule{StopKind::wall_steps, 200}, 20);
    EXPECT_LE(conformal_factor_residual(normalize_trace(flat.trace), flat.states), 1e-14);

    const RecordedRun one = run_with_states(band(32), StopRule{StopKind::wall_steps, 0}, 1);
    EXPECT_EQ(conformal_factor_residual(normalize_trace(one.trace), one.states), 0.0);

    // The identity is exact in space node by node; what remains is the
    // trapezoid rule over the record spacing.
    std::vector<double> res;
    for (std::int64_t every : {16, 4, 1}) {
        const RecordedRun r = run_with_states(band(64), StopRule{StopKind::t_tilde, 0.05}, every);
        res.push_back(conformal_factor_residual(normalize_trace(r.trace), r.states));
    }
    EXPECT_GT(res[0] / res[1], 4.0);
    EXPECT_GT(res[1] / res[2], 4.0);
    EXPECT_LT(res[2], 1e-6);
}
