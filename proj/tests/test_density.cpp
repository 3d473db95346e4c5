#include <doctest.h>

#include <random>

#include "rigidemt/density.hpp"
#include "rigidemt/errors.hpp"
#include "test_helpers.hpp"

using namespace rigidemt;
using rigidemt::testing::kPi;
using rigidemt::testing::random_map;
using rigidemt::testing::random_material;

TEST_CASE("disk densities in closed form") {
    const double gamma = 1.7;
    ExteriorMap disk{gamma, {}};
    const LameMaterial mat = make_material(0.9, 1.4);

    SUBCASE("U1: c1 = gamma/(beta mu), no negative part") {
        const auto dc = solve_first_order(disk, mat, Loading::u1());
        CHECK(std::abs(dc.coeff(1) - Complex{gamma / (mat.beta * mat.mu), 0.0}) < 1e-12);
        CHECK(std::abs(dc.coeff(-1)) < 1e-12);
        CHECK(std::abs(dc.b3) < 1e-13);
    }
    SUBCASE("U2: c1 = 0, c_{-1} = -conj(B) gamma/(alpha mu)") {
        const auto dc = solve_first_order(disk, mat, Loading::u2());
        CHECK(std::abs(dc.coeff(1)) < 1e-12);
        CHECK(std::abs(dc.coeff(-1) - Complex{-gamma / (mat.alpha * mat.mu), 0.0}) < 1e-12);
    }
    SUBCASE("U3: purely imaginary c_{-1}") {
        const auto dc = solve_first_order(disk, mat, Loading::u3());
        CHECK(std::abs(dc.coeff(1)) < 1e-12);
        CHECK(std::abs(dc.coeff(-1) - Complex{0.0, gamma / (mat.alpha * mat.mu)}) < 1e-12);
    }
}

TEST_CASE("degree-1 anchor relation") {
    // c_{-1} = -conj(B) gamma/(alpha mu) - (beta/alpha) a1 conj(c1) / gamma^2
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 4; ++trial) {
        const ExteriorMap m = random_map(rng, 1, false);
        const LameMaterial mat = random_material(rng);
        for (int i = 1; i <= 3; ++i) {
            const Loading ld = Loading::canonical(i);
            const auto dc = solve_first_order(m, mat, ld);
            const Complex a1 = m.a_coeff(1);
            const Complex expect = -std::conj(ld.B) * m.gamma / (mat.alpha * mat.mu) -
                                   (mat.beta / mat.alpha) * a1 * std::conj(dc.coeff(1)) /
                                       (m.gamma * m.gamma);
            CHECK(std::abs(dc.coeff(-1) - expect) < 1e-11 * std::max(1.0, std::abs(expect)));
        }
    }
}

TEST_CASE("dense and back-substitution paths agree per coefficient") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 6; ++trial) {
        const ExteriorMap m = random_map(rng, 1 + trial % 3);
        const LameMaterial mat = random_material(rng);
        for (int i = 1; i <= 3; ++i) {
            const auto a = solve_first_order(m, mat, Loading::canonical(i));
            const auto b = solve_faber_matching(m, mat, Loading::canonical(i));
            double scale = 1e-300;
            for (const auto& [k, v] : a.c) scale = std::max(scale, std::abs(v));
            for (const auto& [k, v] : a.c) {
                CHECK(std::abs(v - b.coeff(k)) / scale < 1e-12);
            }
            CHECK(std::abs(a.b1 - b.b1) < 1e-10 * std::max(1.0, std::abs(a.b1)));
            CHECK(std::abs(a.b3 - b.b3) < 1e-10 * std::max(1.0, std::abs(a.b3)));
        }
    }
}

TEST_CASE("boundary condition is met at 256 samples") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 4; ++trial) {
        const ExteriorMap m = random_map(rng, 1 + trial % 3);
        const LameMaterial mat = random_material(rng);
        for (int i = 1; i <= 3; ++i) {
            const Loading ld = Loading::canonical(i);
            const auto dc = solve_first_order(m, mat, ld);
            CHECK(boundary_residual(dc, m, mat, ld, 256) < 1e-8);
        }
    }
}

TEST_CASE("zero loading gives an identically zero density") {
    ExteriorMap m{1.0, {{0.0, 0.0}, {0.3, 0.1}}};
    const LameMaterial mat = make_material(1.0, 1.0);
    const auto dc = solve_first_order(m, mat, Loading::general({0.0, 0.0}, {0.0, 0.0}));
    for (const auto& [k, v] : dc.c) CHECK(std::abs(v) < 1e-13);
    CHECK(std::abs(dc.b1) < 1e-13);
    CHECK(std::abs(dc.b2) < 1e-13);
    CHECK(std::abs(dc.b3) < 1e-13);
}

TEST_CASE("a rigid-motion loading carries no density") {
    // u = -i z is the rotation R3; in the (A, B) parametrization it needs
    // kappa A - conj(A) = -2 mu i, so A = -2 mu i / (kappa + 1)
    std::mt19937_64 rng(47);
    const ExteriorMap m = random_map(rng, 2);
    const LameMaterial mat = random_material(rng);
    const Complex A = Complex{0.0, -2.0 * mat.mu / (mat.kappa + 1.0)};
    const auto dc = solve_first_order(m, mat, Loading::general(A, {0.0, 0.0}));
    for (const auto& [k, v] : dc.c) CHECK(std::abs(v) < 1e-12);
    CHECK(std::abs(dc.b3 - 1.0) < 1e-12);
}

TEST_CASE("conjugating shape and loading conjugates the density") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 3; ++trial) {
        const ExteriorMap m = random_map(rng, 2);
        const LameMaterial mat = random_material(rng);
        ExteriorMap cm = m;
        for (auto& c : cm.a) c = std::conj(c);
        for (int i = 1; i <= 3; ++i) {
            const Loading ld = Loading::canonical(i);
            const auto a = solve_first_order(m, mat, ld);
            const auto b = solve_first_order(
                cm, mat, Loading::general(std::conj(ld.A), std::conj(ld.B)));
            double scale = 1e-300;
            for (const auto& [k, v] : a.c) scale = std::max(scale, std::abs(v));
            for (const auto& [k, v] : a.c) {
                CHECK(std::abs(std::conj(v) - b.coeff(k)) / scale < 1e-11);
            }
        }
    }
}

TEST_CASE("widened solves leave the structural support") {
    std::mt19937_64 rng(43);
    const ExteriorMap m = random_map(rng, 3);
    const LameMaterial mat = random_material(rng);
    SolveOptions wide;
    wide.wide_support = true;
    for (int i = 1; i <= 3; ++i) {
        const auto dc = solve_first_order(m, mat, Loading::canonical(i), wide);
        double scale = 1e-300;
        for (const auto& [k, v] : dc.c) scale = std::max(scale, std::abs(v));
        CHECK(dc.extra_support / scale < 1e-10);
    }
}

TEST_CASE("exterior single layer") {
    ExteriorMap ell{1.0, {{0.0, 0.0}, {0.5, 0.0}}};
    const LameMaterial mat = make_material(1.0, 1.0);

    SUBCASE("zero density evaluates to zero") {
        DensityCoefficients dc;
        dc.loading = Loading::u1();
        CHECK(std::abs(single_layer_exterior(dc, ell, mat, Complex{2.0, 1.0})) == 0.0);
    }
    SUBCASE("domain error inside the critical circle") {
        const auto dc = solve_first_order(ell, mat, Loading::u1());
        CHECK_THROWS_AS(single_layer_exterior(dc, ell, mat, Complex{0.5, 0.0}),
                        ValidationError);
    }
    SUBCASE("decays like 1/|w|") {
        const auto dc = solve_first_order(ell, mat, Loading::u2());
        const double s3 = std::abs(single_layer_exterior(dc, ell, mat, Complex{1e3, 0.0}));
        const double s4 = std::abs(single_layer_exterior(dc, ell, mat, Complex{1e4, 0.0}));
        CHECK(s3 < 1e-2);
        CHECK(s4 < 0.11 * s3 + 1e-14);
    }
    SUBCASE("total field approaches the loading far away") {
        for (int i = 1; i <= 3; ++i) {
            const Loading ld = Loading::canonical(i);
            const auto dc = solve_first_order(ell, mat, ld);
            const Complex w{7.0e3, 7.0e3};
            const Complex u = total_field(dc, ell, mat, ld, w);
            const Complex h = background_field(ell, mat, ld, ell.map(w));
            CHECK(std::abs(u - h) < 1e-3 * std::abs(h));
        }
    }
    SUBCASE("disk plus U1 perturbation is rotation invariant in magnitude") {
        ExteriorMap disk{1.0, {}};
        const auto dc = solve_first_order(disk, mat, Loading::u1());
        const double r = 2.0;
        double lo = 1e300, hi = 0.0;
        for (int k = 0; k < 16; ++k) {
            const Complex w = std::polar(r, 2.0 * kPi * k / 16.0);
            const double v = std::abs(total_field(dc, disk, mat, Loading::u1(), w) -
                                      background_field(disk, mat, Loading::u1(), disk.map(w)));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK((hi - lo) / hi < 1e-12);
    }
}

TEST_CASE("boundary trace of the total field is the rigid motion") {
    ExteriorMap egg{1.0, {{0.1, -0.2}, {0.2, 0.0}, {0.15, 0.0}}};
    const LameMaterial mat = make_material(2.0, 0.7);
    for (int i = 1; i <= 3; ++i) {
        const Loading ld = Loading::canonical(i);
        const auto dc = solve_first_order(egg, mat, ld);
        CHECK(boundary_residual(dc, egg, mat, ld, 256) < 1e-9);
    }
}
