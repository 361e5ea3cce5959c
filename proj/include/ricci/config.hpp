#pragma once

#include "analysis.hpp"
#include "error.hpp"
#include "scenarios.hpp"
#include "solver.hpp"

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace ricci {

/// Everything one run needs: scenario, stepper, stop rule, output and the
/// checker tolerances.
struct RunConfig {
    ScenarioSpec scenario;
    StepperConfig stepper;
    StopRule stop{StopKind::t_tilde, 1.0};
    std::int64_t record_every = 1;
    double a_target = 1.0;
    std::string out;
    AnalysisTolerances tolerances;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        fail("cli_io", "key \"" + key + "\": expected a number, got \"" + v + "\"");
    return x;
}

inline std::int64_t parse_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
        // Accept integral values written in floating notation, e.g. 1e4.
        const double d = parse_double(key, v);
        if (d != std::floor(d) || std::abs(d) > 9e18)
            fail("cli_io", "key \"" + key + "\": expected an integer, got \"" + v + "\"");
        return static_cast<std::int64_t>(d);
    }
    return x;
}

inline int parse_small_int(const std::string& key, const std::string& v) {
    const auto x = parse_int(key, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        fail("cli_io", "key \"" + key + "\": value out of range");
    return static_cast<int>(x);
}

}  // namespace detail

inline Scheme parse_scheme(const std::string& v) {
    if (v == "explicit_heun" || v == "explicit" || v == "heun") return Scheme::explicit_heun;
    if (v == "implicit_euler" || v == "implicit" || v == "backward_euler") return Scheme::implicit_euler;
    detail::fail("cli_io", "unknown scheme \"" + v + "\" (expected explicit_heun or implicit_euler)");
}

inline const char* to_string(Scheme s) { return s == Scheme::explicit_heun ? "explicit_heun" : "implicit_euler"; }

inline StopKind parse_stop(const std::string& v) {
    if (v == "t_tilde" || v == "t_tilde_reached") return StopKind::t_tilde;
    if (v == "t_norm" || v == "normalized_time_reached") return StopKind::t_norm;
    if (v == "area_below") return StopKind::area_below;
    if (v == "wall_steps") return StopKind::wall_steps;
    detail::fail("cli_io", "unknown stop rule \"" + v + "\" (expected t_tilde, t_norm, area_below or wall_steps)");
}

inline const char* to_string(StopKind k) {
    switch (k) {
        case StopKind::t_tilde: return "t_tilde";
        case StopKind::t_norm: return "t_norm";
        case StopKind::area_below: return "area_below";
        case StopKind::wall_steps: return "wall_steps";
    }
    return "?";
}

/// Applies one `key = value` pair. Returns false for an unknown key.
inline bool set_config_key(RunConfig& c, const std::string& key, const std::string& v) {
    using namespace detail;
    if (key == "scenario") {
        if (v == "flat") c.scenario.profile = ProfileKind::flat;
        else if (v == "cos_band") c.scenario.profile = ProfileKind::cos_band;
        else fail("cli_io", "unknown scenario \"" + v + "\" (expected flat or cos_band)");
    } else if (key == "a") c.scenario.a = parse_double(key, v);
    else if (key == "rho") c.scenario.rho = parse_double(key, v);
    else if (key == "n") c.scenario.n = parse_small_int(key, v);
    else if (key == "w0") {
        if (v == "zero") c.scenario.w0 = InitialExponent::zero;
        else if (v == "cosine_bump") c.scenario.w0 = InitialExponent::cosine_bump;
        else fail("cli_io", "unknown w0 \"" + v + "\" (expected zero or cosine_bump)");
    } else if (key == "epsilon") c.scenario.epsilon = parse_double(key, v);
    else if (key == "mode") c.scenario.mode = parse_small_int(key, v);
    else if (key == "scheme") c.stepper.scheme = parse_scheme(v);
    else if (key == "safety") c.stepper.safety = parse_double(key, v);
    else if (key == "stop") c.stop.kind = parse_stop(v);
    else if (key == "stop_value") c.stop.value = parse_double(key, v);
    else if (key == "record_every") c.record_every = parse_int(key, v);
    else if (key == "a_target") c.a_target = c.stepper.a_target = parse_double(key, v);
    else if (key == "out") c.out = v;
    // Stepper and checker tolerance overrides.
    else if (key == "newton_tol") c.stepper.newton_tol = parse_double(key, v);
    else if (key == "newton_max_iter") c.stepper.newton_max_iter = parse_small_int(key, v);
    else if (key == "dt_min") c.stepper.dt_min = parse_double(key, v);
    else if (key == "log_step") c.stepper.log_step = parse_double(key, v);
    else if (key == "area_floor") c.stepper.area_floor = parse_double(key, v);
    else if (key == "max_steps") c.stepper.max_steps = parse_int(key, v);
    else if (key == "tol_rate") c.tolerances.tol_rate = parse_double(key, v);
    else if (key == "exponent_lo") c.tolerances.exponent_lo = parse_double(key, v);
    else if (key == "exponent_hi") c.tolerances.exponent_hi = parse_double(key, v);
    else if (key == "boundary_floor") c.tolerances.boundary_floor = parse_double(key, v);
    else if (key == "rmax_slack") c.tolerances.rmax_slack = parse_double(key, v);
    else return false;
    return true;
}

inline void validate(const RunConfig& c) {
    validate(c.stepper);
    detail::require(c.record_every > 0, "cli_io", "record_every must be a positive integer");
    detail::require(c.a_target > 0.0, "cli_io", "a_target must be positive");
    detail::require(c.stop.value > 0.0, "cli_io", "stop_value must be positive");
}

/// Parses `key = value` lines; `#` starts a comment. scenario, rho and n are
/// required. A repeated key keeps its last value and warns on `diag`.
inline RunConfig parse_config(const std::string& text, std::ostream& diag = std::cerr) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            detail::fail("cli_io", "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!set_config_key(c, key, value)) detail::fail("cli_io", "unknown key \"" + key + "\"");
        if (!seen.insert(key).second)
            diag << "warning: key \"" << key << "\" repeated on line " << lineno << ", last value wins\n";
    }
    for (const char* req : {"scenario", "rho", "n"})
        if (!seen.count(req)) detail::fail("cli_io", std::string("missing required key \"") + req + "\"");
    validate(c);
    return c;
}

}  // namespace ricci
