#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ricci::quad {

/// Composite trapezoid rule on a uniform grid.
inline double trapezoid(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    // Pair nodes from both ends so mirror-symmetric data sums identically.
    double sum = 0.5 * (y[0] + y[n - 1]);
    std::size_t i = 1, j = n - 2;
    for (; i < j; ++i, --j) sum += y[i] + y[j];
    if (i == j) sum += y[i];
    return h * sum;
}

/// Composite Simpson rule on a uniform grid; y.size() - 1 must be even.
inline double simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size() - 1;
    double sum = y[0] + y[n];
    std::size_t i = 1, j = n - 1;
    for (; i < j; ++i, --j) {
        const double wgt = (i % 2 == 1) ? 4.0 : 2.0;
        sum += wgt * (y[i] + y[j]);
    }
    if (i == j) sum += ((i % 2 == 1) ? 4.0 : 2.0) * y[i];
    return h * sum / 3.0;
}

/// Running trapezoid integral over a non-uniform abscissa, starting at 0.
inline std::vector<double> cumulative_trapezoid(std::span<const double> x,
                                                std::span<const double> y) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

}  // namespace ricci::quad
