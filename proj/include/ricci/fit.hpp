#pragma once

#include "error.hpp"
#include "verdict.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace ricci {

enum class FitModel { power, log_inverse, exponential };

inline const char* to_string(FitModel m) {
    switch (m) {
        case FitModel::power: return "power";
        case FitModel::log_inverse: return "log_inverse";
        case FitModel::exponential: return "exponential";
    }
    return "?";
}

/// Least-squares fit in transformed coordinates.
///   power:       log y = log A + p log t          (rate = p)
///   log_inverse: 1/y   = c + log(1 + t) / A       (rate = 1/A, offset = c)
///   exponential: log y = log A + λ t              (rate = λ)
struct FitResult {
    FitModel model = FitModel::power;
    double amplitude = 0.0;
    double rate = 0.0;
    double offset = 0.0;
    Window window;
    double rms = 0.0;  ///< residual in the transformed coordinates
};

inline FitResult fit_rate(std::span<const double> t, std::span<const double> y, FitModel model, Window window) {
    detail::require(t.size() == y.size(), "analysis", "fit series lengths differ");
    detail::require(window.last <= t.size(), "analysis", "fit window out of range");
    detail::require(window.size() >= 10, "analysis",
                    "fit window needs at least 10 records, got " + std::to_string(window.size()));
    const std::size_t m = window.size();
    std::vector<double> X(m), Y(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = window.first + k;
        if (!(y[j] > 0.0))
            detail::fail("analysis", "non-positive value " + std::to_string(y[j]) + " at record " +
                                         std::to_string(j) + " in a " + to_string(model) + " fit");
        switch (model) {
            case FitModel::power:
                detail::require(t[j] > 0.0, "analysis", "power fit needs t > 0");
                X[k] = std::log(t[j]);
                Y[k] = std::log(y[j]);
                break;
            case FitModel::log_inverse:
                detail::require(t[j] > -1.0, "analysis", "log_inverse fit needs t > -1");
                X[k] = std::log1p(t[j]);
                Y[k] = 1.0 / y[j];
                break;
            case FitModel::exponential:
                X[k] = t[j];
                Y[k] = std::log(y[j]);
                break;
        }
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        mx += X[k];
        my += Y[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        sxx += (X[k] - mx) * (X[k] - mx);
        sxy += (X[k] - mx) * (Y[k] - my);
    }
    detail::require(sxx > 0.0, "analysis", "fit abscissa is degenerate");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double r = Y[k] - (intercept + slope * X[k]);
        ss += r * r;
    }
    FitResult f;
    f.model = model;
    f.window = window;
    f.rms = std::sqrt(ss / m);
    f.rate = slope;
    if (model == FitModel::log_inverse) {
        f.amplitude = 1.0 / slope;
        f.offset = intercept;
    } else {
        f.amplitude = std::exp(intercept);
    }
    return f;
}

}  // namespace ricci
