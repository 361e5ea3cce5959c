#pragma once

#include "analysis.hpp"
#include "config.hpp"
#include "normalization.hpp"
#include "potential.hpp"
#include "scenarios.hpp"
#include "solver.hpp"
#include "trace_csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <string>
#include <vector>

namespace ricci {

struct RunResult {
    FlowState initial;
    FlowTrace trace;
    NormalizedTrace normalized;
    std::vector<FlowState> snapshots;  ///< one per record when requested
};

inline RunResult simulate(const RunConfig& cfg, bool keep_snapshots = false) {
    validate(cfg);
    RunResult res{make_initial(cfg.scenario), {}, {}, {}};
    StepperConfig sc = cfg.stepper;
    sc.a_target = cfg.a_target;
    RecordObserver obs;
    if (keep_snapshots) obs = [&](const FlowState& s, const TraceRecord&) { res.snapshots.push_back(s); };
    res.trace = evolve(res.initial, sc, cfg.stop, cfg.record_every, obs);
    res.normalized = normalize_trace(res.trace, cfg.a_target);
    return res;
}

inline void save_trace(const RunResult& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) detail::fail("cli_io", "cannot open \"" + path + "\" for writing");
    write_trace_csv(r.trace, r.normalized, f);
    if (!f) detail::fail("cli_io", "failed writing \"" + path + "\"");
}

inline std::string run_summary(const RunResult& r) {
    const auto& last = r.trace.records.back();
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "status=%s steps=%lld records=%zu t_tilde=%.10g t_norm=%.10g area=%.10g total_R=%.10g R_max=%.10g",
                  r.trace.status == RunStatus::completed ? "completed" : "aborted",
                  static_cast<long long>(r.trace.steps), r.trace.records.size(), last.t_tilde,
                  r.normalized.records.back().t, last.area, last.total_R, last.R_max);
    std::string s = buf;
    if (!r.trace.diagnostic.empty()) s += " diagnostic=\"" + r.trace.diagnostic + "\"";
    return s;
}

/// `run`: simulate, write the CSV to cfg.out (stdout when empty), print one
/// summary line to `diag`. Returns the exit status.
inline int command_run(const RunConfig& cfg, std::ostream& out, std::ostream& diag) {
    const RunResult r = simulate(cfg);
    if (cfg.out.empty() || cfg.out == "-") write_trace_csv(r.trace, r.normalized, out);
    else save_trace(r, cfg.out);
    diag << "run: " << run_summary(r) << '\n';
    return r.trace.status == RunStatus::completed ? 0 : 1;
}

enum class Suite { conservation, asymptotic, lemmas, all };

inline Suite parse_suite(const std::string& s) {
    if (s == "conservation") return Suite::conservation;
    if (s == "asymptotic") return Suite::asymptotic;
    if (s == "lemmas") return Suite::lemmas;
    if (s == "all") return Suite::all;
    detail::fail("cli_io", "unknown suite \"" + s + "\" (expected conservation, asymptotic, lemmas or all)");
}

namespace detail {

inline BoundCheck max_below(const std::string& name, double value, double limit) {
    BoundCheck c;
    c.name = name;
    c.constant_found = value;
    c.decide(limit > 0.0 ? (limit - value) / limit : (value <= 0.0 ? 0.0 : -1.0));
    return c;
}

inline bool initially_admissible(const FlowState& s) {
    const auto rep = validate_hypotheses(s);
    return rep.r_nonneg && rep.k_nonpos;
}

}  // namespace detail

/// Gauss–Bonnet, boundary curvature, positivity, area law, monotone total
/// curvature, symmetry and the time-map estimate along a run.
inline std::vector<BoundCheck> conservation_checks(const RunResult& run) {
    std::vector<BoundCheck> out;
    const auto& recs = run.trace.records;
    const auto& g = run.initial.geometry();
    const double grid = std::pow(256.0 / g.n, 2.0);

    double gb = 0.0, drift = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (const auto& r : recs) {
        gb = std::max(gb, std::abs(r.gb_relative()));
        drift = std::max({drift, std::abs(r.k_minus - g.k0_minus), std::abs(r.k_plus - g.k0_plus)});
        rmin = std::min(rmin, r.R_min);
    }
    out.push_back(detail::max_below("gauss_bonnet", gb, 1e-5 * grid));
    out.push_back(detail::max_below("boundary_curvature_drift", drift, 5e-4 * grid));

    BoundCheck pos;
    pos.name = "positivity";
    if (detail::initially_admissible(run.initial)) {
        const double tol_pos = 1e-8 * std::max(0.0, recs.front().R_max);
        pos.constant_found = rmin;
        pos.decide(rmin + tol_pos);
    } else {
        pos.undecided(Verdict::hypotheses_not_met, "initial data needs R >= 0 and k <= 0");
    }
    out.push_back(pos);

    double law = 0.0;
    for (std::size_t j = 0; j + 1 < recs.size(); ++j) {
        const double dt = recs[j + 1].t_tilde - recs[j].t_tilde;
        law = std::max(law, std::abs(recs[j + 1].area - recs[j].area + 0.5 * dt * (recs[j].total_R + recs[j + 1].total_R)));
    }
    out.push_back(detail::max_below("area_law", law / recs.front().area, 1e-6));

    BoundCheck mono;
    mono.name = "total_curvature_monotone";
    if (detail::initially_admissible(run.initial)) {
        double m = std::numeric_limits<double>::infinity();
        const double slack = 1e-10 * std::abs(recs.front().total_R);
        for (std::size_t j = 0; j + 1 < recs.size(); ++j) m = std::min(m, recs[j].total_R + slack - recs[j + 1].total_R);
        mono.decide(recs.size() > 1 ? m : 0.0);
    } else {
        mono.undecided(Verdict::hypotheses_not_met, "initial data needs R >= 0 and k <= 0");
    }
    out.push_back(mono);

    BoundCheck sym;
    sym.name = "symmetry_preserved";
    if (detail::is_reflection_symmetric(run.initial.w, 0.0)) {
        std::size_t broken = 0;
        for (const auto& r : recs) broken += (r.len_minus != r.len_plus || r.k_minus != r.k_plus) ? 1 : 0;
        sym.constant_found = static_cast<double>(broken);
        sym.decide(broken == 0 ? 0.0 : -static_cast<double>(broken));
    } else {
        sym.undecided(Verdict::not_applicable, "initial data not reflection symmetric");
    }
    out.push_back(sym);

    out.push_back(time_map_bounds_check(run.trace, run.normalized));
    return out;
}

inline std::vector<BoundCheck> asymptotic_checks(const RunResult& run, const AnalysisTolerances& tol) {
    std::vector<BoundCheck> out;
    out.push_back(check_total_curvature_unnormalized(run.trace, tol));
    out.push_back(check_total_curvature_normalized(run.normalized, tol));
    out.push_back(check_blowup(run.trace, run.normalized, tol));
    out.push_back(check_nonexponential(run.trace, run.normalized, tol));
    BoundCheck mid = check_decreasing_from_middle(run.snapshots, tol);
    mid.metrics.push_back({"middle_parallel_identity", middle_parallel_identity(run.normalized)});
    out.push_back(mid);
    out.push_back(check_rmax_inequality(run.normalized, tol));
    out.push_back(check_excess_integral(run.normalized, tol));
    return out;
}

/// Relative direct-substitution residual of the potential:
/// ‖Δ_g f - (R - r)‖ / ‖R - r‖ (0 when R ≡ r).
inline double potential_residual(const FlowState& s) {
    const ScalarField f = solve_potential(s);
    const ScalarField R = scalar_curvature(s);
    const double r = volume_average(s, R);
    const ScalarField lap = laplace_metric_fv(s, f);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        num = std::max(num, std::abs(lap[i] - (R[i] - r)));
        den = std::max(den, std::abs(R[i] - r));
    }
    return den > 0.0 ? num / den : num;
}

inline std::vector<BoundCheck> lemma_checks(const RunResult& run, double a_target) {
    std::vector<BoundCheck> out;
    BoundCheck par, ar;
    par.name = "parallel_bounds";
    ar.name = "area_bounds";
    double mp = std::numeric_limits<double>::infinity(), ma = mp, cmax = 0.0;
    double pot = 0.0;
    const std::size_t S = run.snapshots.size();
    const double t_half = S > 0 ? 0.5 * run.normalized.records[S - 1].t : 0.0;
    double h_first = -std::numeric_limits<double>::infinity(), h_second = h_first;
    for (std::size_t j = 0; j < S; ++j) {
        const auto& s = run.snapshots[j];
        const auto p = check_parallel_bounds(s);
        const auto a = check_area_bounds(s);
        mp = std::min(mp, p.worst_margin);
        ma = std::min(ma, a.worst_margin);
        cmax = std::max(cmax, p.constant_found);
        pot = std::max(pot, potential_residual(s));
        double& h = run.normalized.records[j].t <= t_half ? h_first : h_second;
        h = std::max(h, h_monitor_normalized(s, a_target));
    }
    par.window = ar.window = {0, S};
    par.constant_found = ar.constant_found = cmax;
    par.decide(mp);
    ar.decide(ma);
    out.push_back(par);
    out.push_back(ar);
    BoundCheck pc = detail::max_below("potential_substitution", pot, 1e-10);
    pc.window = {0, S};
    out.push_back(pc);
    // Bounded on the run window: finite, and no larger over the second half
    // of the normalized time span than over the first.
    BoundCheck hc;
    hc.name = "h_monitor";
    hc.window = {0, S};
    hc.constant_found = std::max(h_first, h_second);
    hc.metrics.push_back({"h_max_first_half", h_first});
    hc.metrics.push_back({"h_max_second_half", h_second});
    if (S < 2) {
        hc.undecided(Verdict::inconclusive, "need at least two snapshots");
    } else if (!std::isfinite(hc.constant_found)) {
        hc.decide(-1.0);
    } else {
        const double scale = std::max(std::abs(h_first), std::numeric_limits<double>::min());
        hc.decide((h_first - h_second) / scale);
    }
    out.push_back(hc);
    return out;
}

inline std::string format_check(const BoundCheck& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-30s %-18s constant=%-14.8g margin=%-14.6g window=[%zu,%zu)", c.name.c_str(),
                  to_string(c.verdict), c.constant_found, c.worst_margin, c.window.first, c.window.last);
    std::string s = buf;
    for (const auto& [k, v] : c.metrics) {
        std::snprintf(buf, sizeof buf, " %s=%.8g", k.c_str(), v);
        s += buf;
    }
    if (!c.notes.empty()) s += "  # " + c.notes;
    return s;
}

struct VerifyReport {
    RunResult run;
    std::vector<BoundCheck> checks;

    bool any_failed() const {
        for (const auto& c : checks)
            if (c.failed()) return true;
        return false;
    }
    int exit_status() const { return any_failed() || run.trace.status == RunStatus::aborted ? 1 : 0; }
};

inline VerifyReport verify(const RunConfig& cfg, Suite suite) {
    VerifyReport rep;
    rep.run = simulate(cfg, suite != Suite::conservation);
    if (!cfg.out.empty() && cfg.out != "-") save_trace(rep.run, cfg.out);
    auto add = [&](std::vector<BoundCheck> v) { rep.checks.insert(rep.checks.end(), v.begin(), v.end()); };
    if (suite == Suite::conservation || suite == Suite::all) add(conservation_checks(rep.run));
    if (suite == Suite::asymptotic || suite == Suite::all) add(asymptotic_checks(rep.run, cfg.tolerances));
    if (suite == Suite::lemmas || suite == Suite::all) add(lemma_checks(rep.run, cfg.a_target));
    return rep;
}

/// Human-readable report followed by the machine-readable summary
/// (`name,verdict,constant,margin` per check).
inline void print_report(const VerifyReport& rep, std::ostream& out) {
    out << "run: " << run_summary(rep.run) << '\n';
    std::size_t counts[5] = {0, 0, 0, 0, 0};
    for (const auto& c : rep.checks) {
        out << format_check(c) << '\n';
        ++counts[static_cast<int>(c.verdict)];
    }
    out << "summary: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " inconclusive, "
        << counts[3] << " hypotheses not met, " << counts[4] << " not applicable\n";
    out << "name,verdict,constant,margin\n";
    char buf[64];
    for (const auto& c : rep.checks) {
        out << c.name << ',' << to_string(c.verdict);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", c.constant_found, c.worst_margin);
        out << buf;
    }
}

struct ConvergenceRow {
    int n = 0;
    double error_w = std::numeric_limits<double>::quiet_NaN();  ///< vs the next finer level
    double order_w = std::numeric_limits<double>::quiet_NaN();
    double gb_relative = 0.0;
    CurvatureResidual residual;
    double residual_ratio_interior = std::numeric_limits<double>::quiet_NaN();  ///< vs the next finer level
    double residual_ratio_boundary = std::numeric_limits<double>::quiet_NaN();
};

/// Self-convergence over n, 2n, 4n, ... at the configured stop time t̃. The
/// curvature-evolution residual is taken over one extra explicit step from
/// the final state of each level, with dt = stable_dt·2^{-level}.
inline std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg, int levels) {
    detail::require(levels >= 3, "cli_io", "convergence needs at least 3 levels");
    detail::require(cfg.stop.kind == StopKind::t_tilde, "cli_io", "convergence needs stop = t_tilde");
    struct Level {
        FlowState final_state;
        CurvatureResidual residual;
        double gb = 0.0;
    };
    std::vector<std::future<Level>> jobs;
    for (int k = 0; k < levels; ++k) {
        RunConfig c = cfg;
        c.scenario.n = cfg.scenario.n << k;
        c.record_every = std::numeric_limits<std::int64_t>::max();
        jobs.push_back(std::async(std::launch::async, [c, k] {
            FlowState last = make_initial(c.scenario);
            RecordObserver keep = [&](const FlowState& s, const TraceRecord&) { last = s; };
            StepperConfig sc = c.stepper;
            sc.a_target = c.a_target;
            const FlowTrace tr = evolve(last, sc, c.stop, c.record_every, keep);
            if (tr.status != RunStatus::completed) detail::fail("solver", "run aborted: " + tr.diagnostic);
            Level lv{last, {}, tr.records.back().gb_relative()};
            // dt ∝ h³ keeps the time error of the probe step below the O(h²)
            // spatial consistency error being measured.
            const double dt = stable_dt(last, sc.safety) * std::ldexp(1.0, -k);
            const FlowState next = step_explicit(last, dt);
            lv.residual = curvature_evolution_residual(last, next, dt);
            return lv;
        }));
    }
    std::vector<Level> lv;
    for (auto& j : jobs) lv.push_back(j.get());
    std::vector<ConvergenceRow> rows(levels);
    for (int k = 0; k < levels; ++k) {
        rows[k].n = cfg.scenario.n << k;
        rows[k].gb_relative = lv[k].gb;
        rows[k].residual = lv[k].residual;
        if (k + 1 < levels) {
            double e = 0.0;
            const auto& coarse = lv[k].final_state.w;
            const auto& fine = lv[k + 1].final_state.w;
            for (std::size_t i = 0; i < coarse.size(); ++i) e = std::max(e, std::abs(coarse[i] - fine[2 * i]));
            rows[k].error_w = e;
            rows[k].residual_ratio_interior = lv[k].residual.interior / lv[k + 1].residual.interior;
            rows[k].residual_ratio_boundary = lv[k].residual.boundary_flux / lv[k + 1].residual.boundary_flux;
        }
        if (k >= 1 && k + 1 < levels) rows[k - 1].order_w = std::log2(rows[k - 1].error_w / rows[k].error_w);
    }
    return rows;
}

inline void print_convergence(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    out << "n,error_w,order_w,gb_relative,res_interior,res_boundary,ratio_interior,ratio_boundary\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.6e,%.4f,%.6e,%.6e,%.6e,%.4f,%.4f\n", r.n, r.error_w, r.order_w,
                      r.gb_relative, r.residual.interior, r.residual.boundary_flux, r.residual_ratio_interior,
                      r.residual_ratio_boundary);
        out << buf;
    }
}

struct SweepEntry {
    std::string value;
    std::string path;
    std::string summary;
    bool completed = false;
};

/// One run per value of `key`, executed concurrently; traces go to
/// `<stem>_<key>_<i>.csv` and an index to `<stem>_index.csv`, where stem is
/// cfg.out without its extension (default "sweep").
inline std::vector<SweepEntry> sweep(const RunConfig& cfg, const std::string& key,
                                     const std::vector<std::string>& values) {
    detail::require(!values.empty(), "cli_io", "sweep needs at least one value");
    std::string stem = cfg.out.empty() ? "sweep" : cfg.out;
    if (const auto dot = stem.rfind('.'); dot != std::string::npos && stem.find('/', dot) == std::string::npos)
        stem.erase(dot);
    std::vector<RunConfig> configs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig c = cfg;
        if (!set_config_key(c, key, values[i])) detail::fail("cli_io", "unknown key \"" + key + "\"");
        c.out = stem + "_" + key + "_" + std::to_string(i) + ".csv";
        validate(c);
        configs.push_back(std::move(c));
    }
    std::vector<std::future<SweepEntry>> jobs;
    for (std::size_t i = 0; i < configs.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const RunResult r = simulate(configs[i]);
            save_trace(r, configs[i].out);
            return SweepEntry{values[i], configs[i].out, run_summary(r), r.trace.status == RunStatus::completed};
        }));
    std::vector<SweepEntry> entries;
    for (auto& j : jobs) entries.push_back(j.get());
    const std::string index = stem + "_index.csv";
    std::ofstream f(index);
    if (!f) detail::fail("cli_io", "cannot open \"" + index + "\" for writing");
    f << "index,key,value,path,status\n";
    for (std::size_t i = 0; i < entries.size(); ++i)
        f << i << ',' << key << ',' << entries[i].value << ',' << entries[i].path << ','
          << (entries[i].completed ? "completed" : "aborted") << '\n';
    return entries;
}

}  // namespace ricci
