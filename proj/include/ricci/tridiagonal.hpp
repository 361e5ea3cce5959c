#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ricci {

/// Tridiagonal system in row form: lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> lower, diag, upper, rhs;

    explicit TridiagonalSystem(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0) {}
    std::size_t size() const { return diag.size(); }
};

/// Solves a tridiagonal system by eliminating from both ends toward the middle
/// row ("twisted" factorization). For a mirror-symmetric system
/// (lower[n-1-i] == upper[i], diag and rhs palindromic) the arithmetic on the
/// two halves is identical, so the solution is palindromic bit for bit.
/// No pivoting: intended for diagonally dominant systems.
inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<double> x(n, 0.0);
    if (n == 0) return x;
    if (n == 1) {
        x[0] = sys.rhs[0] / sys.diag[0];
        return x;
    }
    const std::size_t m = n / 2;
    // Left sweep: x[i] = dl[i] - cl[i]*x[i+1] for i < m.
    std::vector<double> cl(n, 0.0), dl(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double denom = (i == 0) ? sys.diag[0] : sys.diag[i] - sys.lower[i] * cl[i - 1];
        const double carried = (i == 0) ? sys.rhs[0] : sys.rhs[i] - sys.lower[i] * dl[i - 1];
        cl[i] = sys.upper[i] / denom;
        dl[i] = carried / denom;
    }
    // Right sweep: x[i] = dr[i] - ar[i]*x[i-1] for i > m.
    std::vector<double> ar(n, 0.0), dr(n, 0.0);
    for (std::size_t i = n - 1; i > m; --i) {
        const double denom = (i == n - 1) ? sys.diag[i] : sys.diag[i] - sys.upper[i] * ar[i + 1];
        const double carried = (i == n - 1) ? sys.rhs[i] : sys.rhs[i] - sys.upper[i] * dr[i + 1];
        ar[i] = sys.lower[i] / denom;
        dr[i] = carried / denom;
    }
    // Both neighbour contributions are formed before being combined, so the
    // middle row sees the same rounding from either side.
    double left_c = 0.0, left_d = 0.0, right_c = 0.0, right_d = 0.0;
    if (m > 0) {
        left_c = sys.lower[m] * cl[m - 1];
        left_d = sys.lower[m] * dl[m - 1];
    }
    if (m + 1 < n) {
        right_c = sys.upper[m] * ar[m + 1];
        right_d = sys.upper[m] * dr[m + 1];
    }
    const double denom = sys.diag[m] - (left_c + right_c);
    const double carried = sys.rhs[m] - (left_d + right_d);
    x[m] = carried / denom;
    for (std::size_t i = m; i-- > 0;) x[i] = dl[i] - cl[i] * x[i + 1];
    for (std::size_t i = m + 1; i < n; ++i) x[i] = dr[i] - ar[i] * x[i - 1];
    return x;
}

}  // namespace ricci
