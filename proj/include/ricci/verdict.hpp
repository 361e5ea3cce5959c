#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace ricci {

enum class Verdict { pass, fail, inconclusive, hypotheses_not_met, not_applicable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::inconclusive: return "INCONCLUSIVE";
        case Verdict::hypotheses_not_met: return "HYPOTHESES_NOT_MET";
        case Verdict::not_applicable: return "NOT_APPLICABLE";
    }
    return "?";
}

/// Half-open record index range [first, last).
struct Window {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const { return last > first ? last - first : 0; }
};

/// Outcome of one checker. `passed` holds exactly when worst_margin >= 0;
/// inconclusive and hypotheses-not-met verdicts carry a NaN margin.
struct BoundCheck {
    std::string name;
    Verdict verdict = Verdict::inconclusive;
    bool passed = false;
    double constant_found = std::numeric_limits<double>::quiet_NaN();
    double worst_margin = std::numeric_limits<double>::quiet_NaN();
    Window window;
    std::string notes;
    /// Named auxiliary measurements (secondary constants, fit exponents).
    std::vector<std::pair<std::string, double>> metrics;

    bool failed() const { return verdict == Verdict::fail; }

    void add_note(const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    }

    /// Sets the verdict from the margin sign.
    void decide(double margin) {
        worst_margin = margin;
        passed = margin >= 0.0;
        verdict = passed ? Verdict::pass : Verdict::fail;
    }

    void undecided(Verdict v, const std::string& why) {
        verdict = v;
        passed = false;
        worst_margin = std::numeric_limits<double>::quiet_NaN();
        add_note(why);
    }
};

}  // namespace ricci
