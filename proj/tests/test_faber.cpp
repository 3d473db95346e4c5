#include <doctest.h>

#include <random>

#include "rigidemt/faber.hpp"
#include "test_helpers.hpp"

using namespace rigidemt;
using rigidemt::testing::random_map;

TEST_CASE("first polynomials match the closed expressions") {
    const Complex a0{0.3, -0.5}, a1{0.2, 0.1};
    ExteriorMap m{1.0, {a0, a1}};
    const auto p = faber_coefficients(m, 2);
    // F0 = 1
    CHECK(p[0][0] == Complex{1.0, 0.0});
    // F1 = z - a0
    CHECK(p[1][1] == Complex{1.0, 0.0});
    CHECK(p[1][0] == -a0);
    // F2 = z^2 - 2 a0 z + a0^2 - 2 a1
    CHECK(p[2][2] == Complex{1.0, 0.0});
    CHECK(std::abs(p[2][1] + 2.0 * a0) < 1e-15);
    CHECK(std::abs(p[2][0] - (a0 * a0 - 2.0 * a1)) < 1e-15);
}

TEST_CASE("identity map gives plain monomials") {
    ExteriorMap ident{1.3, {}};
    const auto p = faber_coefficients(ident, 6);
    for (int m = 0; m <= 6; ++m) {
        for (int n = 0; n <= m; ++n) {
            CHECK(std::abs(p[static_cast<size_t>(m)][static_cast<size_t>(n)] -
                           (n == m ? Complex{1.0, 0.0} : Complex{})) < 1e-15);
        }
    }
}

TEST_CASE("grunsky coefficients of simple maps") {
    ExteriorMap ident{1.0, {}};
    const FaberTable ti = build_faber_table(ident, 6, 24);
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= 6; ++n) CHECK(std::abs(ti.grunsky_coeff(m, n)) < 1e-15);

    const Complex a1{0.4, 0.2};
    ExteriorMap joukowski{1.0, {{0.0, 0.0}, a1}};
    const FaberTable tj = build_faber_table(joukowski, 6, 24);
    CHECK(std::abs(tj.grunsky_coeff(1, 1) - a1) < 1e-14);
    // F2(Phi(w)) = w^2 + a1^2 w^{-2}
    CHECK(std::abs(tj.grunsky_coeff(2, 2) - a1 * a1) < 1e-14);
    CHECK(std::abs(tj.grunsky_coeff(2, 1)) < 1e-14);
}

TEST_CASE("derivative expansion basics") {
    const Complex a0{0.25, 0.1};
    ExteriorMap m{1.0, {a0, {0.3, 0.0}}};
    const auto p = faber_coefficients(m, 3);
    const auto d = derivative_expansion(p, 3);
    // F1' = 1
    CHECK(std::abs(d[1][0] - Complex{1.0, 0.0}) < 1e-15);
    // F2' = 2 F1 (any a0)
    CHECK(std::abs(d[2][1] - Complex{2.0, 0.0}) < 1e-15);
    CHECK(std::abs(d[2][0]) < 1e-15);

    ExteriorMap ident{1.0, {}};
    const auto pi_ = faber_coefficients(ident, 8);
    const auto di = derivative_expansion(pi_, 8);
    for (int k = 1; k <= 8; ++k) {
        for (int j = 0; j < k; ++j) {
            const Complex expect = (j == k - 1) ? Complex{static_cast<double>(k), 0.0} : Complex{};
            CHECK(std::abs(di[static_cast<size_t>(k)][static_cast<size_t>(j)] - expect) < 1e-15);
        }
    }
}

TEST_CASE("table invariants on random maps") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const ExteriorMap m = random_map(rng, 1 + trial % 5);
        const int order = 12;
        const FaberTable t = build_faber_table(m, order, 64);

        for (int k = 0; k <= order; ++k) {
            CHECK(std::abs(t.p[static_cast<size_t>(k)][static_cast<size_t>(k)] -
                           Complex{1.0, 0.0}) < 1e-13);
        }

        CHECK(t.composition_residual < 1e-12);

        double scale = 1e-300;
        for (int i = 1; i <= order; ++i)
            for (int n = 1; n <= order; ++n)
                scale = std::max(scale, std::abs(static_cast<double>(i) * t.grunsky_coeff(i, n)));
        for (int i = 1; i <= order; ++i) {
            for (int n = 1; n <= order; ++n) {
                const Complex lhs = static_cast<double>(n) * t.grunsky_coeff(i, n);
                const Complex rhs = static_cast<double>(i) * t.grunsky_coeff(n, i);
                CHECK(std::abs(lhs - rhs) / scale < 1e-12);
            }
        }

        // sum_j d[m][j] p[j][n] reproduces the monomial coefficients of F_m'
        for (int i = 1; i <= order; ++i) {
            for (int n = 0; n < i; ++n) {
                Complex lhs{0.0, 0.0};
                for (int j = n; j < i; ++j) {
                    lhs += t.deriv[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                           t.p[static_cast<size_t>(j)][static_cast<size_t>(n)];
                }
                const Complex rhs = static_cast<double>(n + 1) *
                                    t.p[static_cast<size_t>(i)][static_cast<size_t>(n + 1)];
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
}
