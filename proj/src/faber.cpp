#include "rigidemt/faber.hpp"

#include <algorithm>
#include <cmath>

#include "rigidemt/errors.hpp"

namespace rigidemt {

std::vector<std::vector<Complex>> faber_coefficients(const ExteriorMap& map, int order) {
    if (order < 0) throw ValidationError("faber_coefficients: order must be >= 0");
    const Complex a0 = map.a_coeff(0);
    std::vector<std::vector<Complex>> p(static_cast<size_t>(order) + 1);
    p[0] = {Complex{1.0, 0.0}};
    if (order == 0) return p;
    p[1] = {-a0, Complex{1.0, 0.0}};
    for (int n = 1; n < order; ++n) {
        std::vector<Complex> next(static_cast<size_t>(n) + 2, Complex{});
        // (z - a0) F_n
        for (int j = 0; j <= n; ++j) {
            next[static_cast<size_t>(j + 1)] += p[static_cast<size_t>(n)][static_cast<size_t>(j)];
            next[static_cast<size_t>(j)] -= a0 * p[static_cast<size_t>(n)][static_cast<size_t>(j)];
        }
        for (int k = 1; k <= n - 1; ++k) {
            const Complex ak = map.a_coeff(k);
            if (ak == Complex{}) continue;
            const auto& fk = p[static_cast<size_t>(n - k)];
            for (size_t j = 0; j < fk.size(); ++j) next[j] -= ak * fk[j];
        }
        next[0] -= static_cast<double>(n + 1) * map.a_coeff(n);
        p[static_cast<size_t>(n + 1)] = std::move(next);
    }
    return p;
}

std::vector<std::vector<Complex>> derivative_expansion(const std::vector<std::vector<Complex>>& p,
                                                       int order) {
    std::vector<std::vector<Complex>> d(static_cast<size_t>(order) + 1);
    for (int m = 1; m <= order; ++m) {
        // monomial coefficients of F_m'
        std::vector<Complex> r(static_cast<size_t>(m), Complex{});
        for (int n = 0; n < m; ++n) {
            r[static_cast<size_t>(n)] =
                static_cast<double>(n + 1) * p[static_cast<size_t>(m)][static_cast<size_t>(n + 1)];
        }
        std::vector<Complex> dm(static_cast<size_t>(m), Complex{});
        for (int j = m - 1; j >= 0; --j) {
            const Complex c = r[static_cast<size_t>(j)]; // F_j is monic
            dm[static_cast<size_t>(j)] = c;
            if (c != Complex{}) {
                for (int n = 0; n <= j; ++n) {
                    r[static_cast<size_t>(n)] -= c * p[static_cast<size_t>(j)][static_cast<size_t>(n)];
                }
            }
        }
        d[static_cast<size_t>(m)] = std::move(dm);
    }
    return d;
}

FaberTable build_faber_table(const ExteriorMap& map, int order, int truncation) {
    if (order < 1) throw ValidationError("build_faber_table: order must be >= 1");
    FaberTable table;
    table.order = order;
    table.p = faber_coefficients(map, order);
    table.deriv = derivative_expansion(table.p, order);
    table.grunsky.assign(static_cast<size_t>(order) + 1, {});

    // Composed series F_m(Phi(w)) via the same recurrence, run on Laurent windows.
    const Complex a0 = map.a_coeff(0);
    const LaurentSeries phi_shifted = map.series(truncation) - LaurentSeries::constant(a0, truncation);
    std::vector<LaurentSeries> comp(static_cast<size_t>(order) + 1);
    comp[0] = LaurentSeries::constant(1.0, truncation);
    comp[1] = phi_shifted;

    double worst = 0.0;
    auto harvest = [&](int m) {
        const LaurentSeries& s = comp[static_cast<size_t>(m)];
        const int nmax = std::max(0, -s.lo());
        std::vector<Complex> row(static_cast<size_t>(nmax), Complex{});
        for (int n = 1; n <= nmax; ++n) row[static_cast<size_t>(n - 1)] = s.coeff(-n);
        table.grunsky[static_cast<size_t>(m)] = std::move(row);

        // internal consistency: F_m(Phi(w)) = w^m + negative powers only.
        // Coefficients are compared in the boundary sup scale |c_k| gamma^k.
        double scale = 0.0;
        double gk = std::pow(map.gamma, s.lo());
        for (int k = s.lo(); k <= s.hi(); ++k, gk *= map.gamma) {
            scale = std::max(scale, std::abs(s.coeff(k)) * gk);
        }
        double stray = std::abs(s.coeff(m) - Complex{1.0, 0.0}) * std::pow(map.gamma, m);
        double gj = 1.0;
        for (int j = 0; j < m; ++j, gj *= map.gamma) {
            stray = std::max(stray, std::abs(s.coeff(j)) * gj);
        }
        worst = std::max(worst, stray / std::max(scale, 1e-300));
    };
    harvest(1);

    for (int n = 1; n < order; ++n) {
        LaurentSeries next = mul(phi_shifted, comp[static_cast<size_t>(n)]);
        for (int k = 1; k <= n - 1; ++k) {
            const Complex ak = map.a_coeff(k);
            if (ak == Complex{}) continue;
            next -= ak * comp[static_cast<size_t>(n - k)];
        }
        const Complex an = map.a_coeff(n);
        if (an != Complex{}) next -= LaurentSeries::constant(static_cast<double>(n + 1) * an, truncation);
        comp[static_cast<size_t>(n + 1)] = std::move(next);
        harvest(n + 1);
    }

    table.composition_residual = worst;
    if (worst > 1e-9) {
        throw ConsistencyError("build_faber_table: composed series has nonvanishing low-order "
                               "coefficients (relative " + std::to_string(worst) + ")");
    }
    return table;
}

} // namespace rigidemt
