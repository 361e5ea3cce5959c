#pragma once

#include "error.hpp"
#include "normalization.hpp"
#include "solver.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

/// Column layout of trace files, version 1.
inline constexpr const char* kTraceCsvHeader =
    "step,t_tilde,dt,area,total_R,R_max,R_min,total_R2,len_minus,len_plus,len_mid,k_minus,k_plus,"
    "gb_residual,meridian,argmax_node,rmin_loc,r_boundary,phi,t_norm,R_max_norm,R_min_norm,r_norm,"
    "len_minus_norm,len_plus_norm,len_mid_norm,k_minus_norm,k_plus_norm";

inline constexpr int kTraceCsvVersion = 1;

namespace detail {

inline void put_number(std::string& line, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    line += buf;
}

}  // namespace detail

inline void write_trace_csv(const FlowTrace& trace, const NormalizedTrace& nt, std::ostream& out) {
    detail::require(trace.records.size() == nt.records.size(), "cli_io",
                    "trace and normalized trace are not aligned record for record");
    out << kTraceCsvHeader << '\n';
    std::string line;
    for (std::size_t j = 0; j < trace.records.size(); ++j) {
        const auto& r = trace.records[j];
        const auto& n = nt.records[j];
        line = std::to_string(r.step);
        for (double x : {r.t_tilde, r.dt, r.area, r.total_R, r.R_max, r.R_min, r.total_R2, r.len_minus, r.len_plus,
                         r.len_mid, r.k_minus, r.k_plus, r.gb_residual, r.meridian}) {
            line += ',';
            detail::put_number(line, x);
        }
        line += ',' + std::to_string(r.argmax_node) + ',' + std::to_string(static_cast<int>(r.rmin_loc));
        for (double x : {r.r_boundary, n.phi, n.t, n.R_max, n.R_min, n.r, n.len_minus, n.len_plus, n.len_mid,
                         n.k_minus, n.k_plus}) {
            line += ',';
            detail::put_number(line, x);
        }
        out << line << '\n';
    }
}

/// Inverse of write_trace_csv. The normalized total curvature and ∫R² are
/// rebuilt from the unnormalized columns, exactly as normalize_trace does.
inline std::pair<FlowTrace, NormalizedTrace> read_trace_csv(std::istream& in, double a_target = 1.0) {
    std::string line;
    if (!std::getline(in, line)) detail::fail("cli_io", "trace CSV is empty (no header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceCsvHeader)
        detail::fail("cli_io", "trace CSV header does not match format version " + std::to_string(kTraceCsvVersion));
    FlowTrace trace;
    NormalizedTrace nt;
    nt.a_target = a_target;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 28)
            detail::fail("cli_io", "trace CSV line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                                       " fields, format version " + std::to_string(kTraceCsvVersion) +
                                       " has 28");
        auto num = [&](std::size_t k) {
            char* end = nullptr;
            const double x = std::strtod(f[k].c_str(), &end);
            if (f[k].empty() || *end != '\0')
                detail::fail("cli_io", "trace CSV line " + std::to_string(lineno) + ": bad number \"" + f[k] + "\"");
            return x;
        };
        auto integer = [&](std::size_t k) {
            char* end = nullptr;
            const long long x = std::strtoll(f[k].c_str(), &end, 10);
            if (f[k].empty() || *end != '\0')
                detail::fail("cli_io", "trace CSV line " + std::to_string(lineno) + ": bad integer \"" + f[k] + "\"");
            return static_cast<std::int64_t>(x);
        };
        TraceRecord r;
        r.step = integer(0);
        double* dst[] = {&r.t_tilde, &r.dt,      &r.area,    &r.total_R, &r.R_max,       &r.R_min,   &r.total_R2,
                         &r.len_minus, &r.len_plus, &r.len_mid, &r.k_minus, &r.k_plus, &r.gb_residual, &r.meridian};
        for (std::size_t k = 0; k < 14; ++k) *dst[k] = num(k + 1);
        r.argmax_node = integer(15);
        const auto loc = integer(16);
        if (loc < 0 || loc > 3)
            detail::fail("cli_io", "trace CSV line " + std::to_string(lineno) + ": unknown rmin_loc code");
        r.rmin_loc = static_cast<MinLocation>(loc);
        r.r_boundary = num(17);
        NormalizedRecord n;
        double* ndst[] = {&n.phi, &n.t, &n.R_max, &n.R_min, &n.r, &n.len_minus, &n.len_plus, &n.len_mid,
                          &n.k_minus, &n.k_plus};
        for (std::size_t k = 0; k < 10; ++k) *ndst[k] = num(k + 18);
        n.total_R = r.total_R;
        n.total_R2 = r.total_R2 / n.phi;
        trace.records.push_back(r);
        nt.records.push_back(n);
    }
    trace.steps = trace.records.empty() ? 0 : trace.records.back().step;
    return {std::move(trace), std::move(nt)};
}

}  // namespace ricci
