#pragma once

// Tridiagonal linear solve with partial pivoting (one superdiagonal of
// fill-in).  Near-singular pivots are nudged so the solver can be used for
// inverse iteration at an eigenvalue shift.  Internal to the library.

#include <cmath>
#include <vector>

namespace critwave::detail {

// Solves A x = rhs for general (possibly indefinite) tridiagonal A given by
// sub[i] = A(i+1,i), diag[i] = A(i,i), sup[i] = A(i,i+1).  rhs is
// overwritten with the solution.
inline void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag,
                              std::vector<double> sup, std::vector<double>& rhs) {
    const int m = static_cast<int>(diag.size());
    std::vector<double> sup2(static_cast<size_t>(m), 0.0);  // fill-in from row swaps

    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    const double tiny = std::max(scale, 1.0) * 1e-14;

    for (int k = 0; k + 1 < m; ++k) {
        double& dk = diag[static_cast<size_t>(k)];
        double lk = sub[static_cast<size_t>(k)];
        if (std::abs(dk) < std::abs(lk)) {
            std::swap(dk, sub[static_cast<size_t>(k)]);
            std::swap(sup[static_cast<size_t>(k)], diag[static_cast<size_t>(k) + 1]);
            if (k + 2 < m) std::swap(sup2[static_cast<size_t>(k)], sup[static_cast<size_t>(k) + 1]);
            std::swap(rhs[static_cast<size_t>(k)], rhs[static_cast<size_t>(k) + 1]);
            lk = sub[static_cast<size_t>(k)];
        }
        if (std::abs(dk) < tiny) dk = (dk < 0 ? -tiny : tiny);
        const double mfac = lk / dk;
        diag[static_cast<size_t>(k) + 1] -= mfac * sup[static_cast<size_t>(k)];
        if (k + 2 < m) sup[static_cast<size_t>(k) + 1] -= mfac * sup2[static_cast<size_t>(k)];
        rhs[static_cast<size_t>(k) + 1] -= mfac * rhs[static_cast<size_t>(k)];
    }
    if (std::abs(diag[static_cast<size_t>(m) - 1]) < tiny)
        diag[static_cast<size_t>(m) - 1] = tiny;

    rhs[static_cast<size_t>(m) - 1] /= diag[static_cast<size_t>(m) - 1];
    if (m >= 2) {
        rhs[static_cast<size_t>(m) - 2] =
            (rhs[static_cast<size_t>(m) - 2] -
             sup[static_cast<size_t>(m) - 2] * rhs[static_cast<size_t>(m) - 1]) /
            diag[static_cast<size_t>(m) - 2];
    }
    for (int k = m - 3; k >= 0; --k) {
        rhs[static_cast<size_t>(k)] =
            (rhs[static_cast<size_t>(k)] - sup[static_cast<size_t>(k)] * rhs[static_cast<size_t>(k) + 1] -
             sup2[static_cast<size_t>(k)] * rhs[static_cast<size_t>(k) + 2]) /
            diag[static_cast<size_t>(k)];
    }
}

}  // namespace critwave::detail
