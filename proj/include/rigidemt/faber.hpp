#pragma once

#include <vector>

#include "rigidemt/conformal.hpp"
#include "rigidemt/laurent.hpp"

namespace rigidemt {

// Faber polynomials of the map, F_m(z) = sum_n p[m][n] z^n (monic), their
// Grunsky coefficients c_{m,n} (negative-power coefficients of F_m(Phi(w))),
// and the derivative change of basis F_m' = sum_j d[m][j] F_j.
struct FaberTable {
    int order = 0;
    std::vector<std::vector<Complex>> p;       // p[m][n], 0 <= n <= m
    std::vector<std::vector<Complex>> grunsky; // grunsky[m][n-1] = c_{m,n}, n >= 1
    std::vector<std::vector<Complex>> deriv;   // deriv[m][j] = d_{m,j}, 0 <= j < m
    double composition_residual = 0.0;         // largest stray w^j coefficient, relative

    Complex grunsky_coeff(int m, int n) const {
        if (m < 1 || m > order || n < 1) return {0.0, 0.0};
        const auto& row = grunsky[static_cast<size_t>(m)];
        if (n > static_cast<int>(row.size())) return {0.0, 0.0};
        return row[static_cast<size_t>(n - 1)];
    }
};

// Monomial coefficients p[m][n] for F_0 ... F_order via the recurrence
// F_{n+1} = (z - a0) F_n - sum_{k=1}^{n-1} a_k F_{n-k} - (n+1) a_n,
// which matches powers of w in the generating relation w Phi'/(Phi - z).
std::vector<std::vector<Complex>> faber_coefficients(const ExteriorMap& map, int order);

// Triangular change of basis d[m][j] with F_m' = sum_j d[m][j] F_j.
std::vector<std::vector<Complex>> derivative_expansion(const std::vector<std::vector<Complex>>& p,
                                                       int order);

// Full table: runs the composition F_m(Phi(w)) with Laurent windows clipped at
// the given truncation, extracts Grunsky coefficients, and verifies that the
// w^j coefficients for 0 <= j < m vanish and the w^m coefficient is 1.
FaberTable build_faber_table(const ExteriorMap& map, int order, int truncation);

} // namespace rigidemt
