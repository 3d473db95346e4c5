// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "rigidemt/density.hpp"
#include "rigidemt/effective.hpp"
#include "rigidemt/emt.hpp"
#include "rigidemt/oracle.hpp"
#include "rigidemt/presets.hpp"
#include "test_helpers.hpp"

using namespace rigidemt;
using rigidemt::testing::kPi;
using rigidemt::testing::random_map;
using rigidemt::testing::random_material;
using rigidemt::testing::rel_diff;

namespace {

int failures = 0;

void report(int id, const char* what, bool pass, double value, double limit,
            double seconds = -1.0) {
    if (!pass) ++failures;
    if (seconds >= 0.0) {
        std::printf("[%s] criterion %2d: %s (value=%.3e, limit=%.3e, runtime=%.2fs)\n",
                    pass ? "PASS" : "FAIL", id, what, value, limit, seconds);
    } else {
        std::printf("[%s] criterion %2d: %s (value=%.3e, limit=%.3e)\n",
                    pass ? "PASS" : "FAIL", id, what, value, limit);
    }
    std::fflush(stdout);
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Sample {
    ExteriorMap map;
    LameMaterial mat;
    EmtResult result;
};

} // namespace

int main() {
    std::mt19937_64 rng(20240817);

    std::vector<LameMaterial> materials;
    for (int i = 0; i < 5; ++i) materials.push_back(random_material(rng));

    // ---- criterion 1: closed-form equivalence over randomized shapes/materials
    std::vector<Sample> samples; // thinned subset reused by criteria 5 and 7
    double c1_gap = 0.0, c1_symmetry = 0.0, c1_identity = 0.0, c1_boundary = 0.0;
    int c1_count = 0;
    const double t1_start = now_seconds();
    for (int degree = 1; degree <= 3; ++degree) {
        for (int shape = 0; shape < 20; ++shape) {
            const ExteriorMap m = random_map(rng, degree);
            for (const auto& mat : materials) {
                EmtResult res = emt_first_order(m, mat);
                const EmtTensor cf = closed_form_emt(m, mat);
                c1_gap = std::max(c1_gap, rel_diff(res.tensor, cf));
                c1_symmetry = std::max(c1_symmetry, res.diag.symmetry_residual);
                c1_identity = std::max(c1_identity, res.diag.identity_residual);
                c1_boundary = std::max(c1_boundary, res.diag.max_boundary_residual);
                if (c1_count % 17 == 0) samples.push_back({m, mat, std::move(res)});
                ++c1_count;
            }
        }
    }
    const double t1 = now_seconds() - t1_start;
    report(1, "series pipeline vs closed forms, N = 1..3", c1_gap <= 1e-10 && t1 < 5.0,
           c1_gap, 1e-10, t1);

    // ---- criterion 2: oracle equivalence on the bundled presets
    {
        const double t_start = now_seconds();
        double gap = 0.0;
        for (const auto& p : presets()) {
            for (int i = 0; i < 3; ++i) {
                const EmtResult series = emt_first_order(p.map, materials[static_cast<size_t>(i)]);
                const oracle::OracleEmt o =
                    oracle::emt_by_quadrature(p.map, materials[static_cast<size_t>(i)], 64);
                gap = std::max(gap, rel_diff(series.tensor, o.tensor));
            }
        }
        const double t = now_seconds() - t_start;
        report(2, "collocation oracle vs series EMT at 64 modes", gap <= 1e-6 && t < 30.0,
               gap, 1e-6, t);
    }

    // ---- criterion 3: symmetry of every computed EMT
    report(3, "entrywise tensor symmetry", c1_symmetry <= 1e-12, c1_symmetry, 1e-12);

    // ---- criterion 4: moment-functional identities
    report(4, "moment-functional identities", c1_identity <= 1e-10, c1_identity, 1e-10);

    // ---- criterion 5: translation invariance
    {
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double worst = 0.0;
        for (size_t i = 0; i < samples.size(); i += 7) {
            const auto& s = samples[i];
            const EmtResult moved =
                emt_first_order(translated(s.map, Complex{unif(rng), unif(rng)}), s.mat);
            worst = std::max(worst, rel_diff(s.result.tensor, moved.tensor));
        }
        report(5, "translation invariance of the tensor", worst <= 1e-12, worst, 1e-12);
    }

    // ---- criterion 6: far-field decay of the leading form (ellipse preset)
    {
        const LameMaterial mat = make_material(1.0, 1.0);
        auto decay_ratio = [&](const ExteriorMap& shape, const DensityCoefficients& dc) {
            const EPair ep = e_pairs(dc, shape);
            auto rms = [&](double r) {
                double acc = 0.0;
                for (int k = 0; k < 8; ++k) {
                    const Complex w = std::polar(r, 2.0 * kPi * (k + 0.37) / 8.0);
                    acc += std::norm(single_layer_exterior(dc, shape, mat, w) -
                                     farfield_leading(ep, mat, w));
                }
                return std::sqrt(acc / 8.0);
            };
            const double r10 = rms(10.0), r20 = rms(20.0);
            return (r10 < 1e-13) ? -1.0 : r20 / r10;
        };

        const ExteriorMap ell = *preset_shape("ellipse");
        double lo = 1.0, hi = 0.0;
        for (int i = 1; i <= 3; ++i) {
            const double ratio =
                decay_ratio(ell, solve_first_order(ell, mat, Loading::canonical(i)));
            if (ratio < 0.0) continue;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        report(6, "far-field residual ratio in [0.20, 0.32] on the ellipse",
               lo >= 0.20 && hi <= 0.32, lo, 0.20);
        if (!(lo >= 0.20 && hi <= 0.32)) {
            // context: the nominal 0.25 assumes the residual is quadratically
            // small, but on any degree-1 map the quadratic order vanishes
            // identically and the measured ratio is the cubic-decay value 1/8.
            // The decay law itself is intact; the window is met by shapes and
            // densities with second-order content:
            const ExteriorMap egg = *preset_shape("egg");
            double egg_hi = 0.0;
            for (int i = 1; i <= 3; ++i) {
                egg_hi = std::max(
                    egg_hi, decay_ratio(egg, solve_first_order(egg, mat, Loading::canonical(i))));
            }
            DensityCoefficients generic;
            generic.loading = Loading::u1();
            generic.c[1] = Complex{0.7, 0.1};
            generic.c[-1] = Complex{0.4, -0.3};
            generic.c[2] = Complex{0.5, 0.2};
            generic.c[-2] = Complex{-0.3, 0.6};
            std::printf("       info: ellipse ratio is the cubic-decay value (degree-1 maps"
                        " have no quadratic far-field content)\n");
            std::printf("       info: egg preset ratio = %.4f, ellipse with a generic"
                        " two-mode density = %.4f (both in window)\n",
                        egg_hi, decay_ratio(ell, generic));
        }
    }

    // ---- criterion 7: scaling and rotation covariance
    {
        double worst_scale = 0.0, worst_rot = 0.0;
        for (size_t i = 0; i < samples.size(); i += 11) {
            const auto& s = samples[i];
            for (const double t : {0.5, 2.0}) {
                EmtTensor expect = s.result.tensor;
                expect.m1111 *= t * t; expect.m2222 *= t * t; expect.m1122 *= t * t;
                expect.m1112 *= t * t; expect.m2212 *= t * t; expect.m1212 *= t * t;
                worst_scale = std::max(
                    worst_scale, rel_diff(expect, emt_first_order(scaled(s.map, t), s.mat).tensor));
            }
            const Eigen::Matrix3d M0 = s.result.tensor.mandel();
            const Eigen::Matrix3d M1 =
                emt_first_order(rotated(s.map, kPi / 6.0), s.mat).tensor.mandel();
            const double scale = std::max(M0.norm(), 1e-300);
            worst_rot = std::max(worst_rot, std::abs(M0.trace() - M1.trace()) / scale);
            worst_rot = std::max(worst_rot, std::abs(M0.determinant() - M1.determinant()) /
                                                std::max(std::pow(scale, 3), 1e-300));
        }
        const double worst = std::max(worst_scale, worst_rot);
        report(7, "quadratic scaling and rotation invariants", worst <= 1e-10, worst, 1e-10);
    }

    // ---- criterion 8: pinned spot values
    {
        const LameMaterial mat = make_material(1.0, 1.0);
        const EmtResult disk = emt_first_order(*preset_shape("disk"), mat);
        const EmtResult ell = emt_first_order(*preset_shape("ellipse"), mat);
        const double worst = std::max(
            {std::abs(disk.tensor.m1212 - 1.5 * kPi), std::abs(disk.tensor.m1111 - 4.5 * kPi),
             std::abs(disk.tensor.m1122 - 1.5 * kPi), std::abs(disk.tensor.m1112),
             std::abs(ell.tensor.m1212 - kPi)});
        report(8, "disk 3pi/2, 9pi/2, 3pi/2, 0 and ellipse pi", worst <= 1e-9, worst, 1e-9);
    }

    // ---- criterion 9: effective-tensor contract
    {
        const LameMaterial mat = make_material(1.0, 1.0);
        const EmtTensor M = emt_first_order(*preset_shape("ellipse"), mat).tensor;
        const Eigen::Matrix3d C = background_stiffness(mat);
        const Eigen::Matrix3d expect = C + 0.08 * M.mandel();
        const double exact_gap =
            (effective(mat, M, 0.08).c_star.array() == expect.array()).all() ? 0.0 : 1.0;
        const double zero_gap =
            (effective(mat, M, 0.0).c_star.array() == C.array()).all() ? 0.0 : 1.0;
        const Eigen::Matrix3d s1 = (effective(mat, M, 1e-4).c_star - C) / 1e-4;
        const Eigen::Matrix3d s2 = (effective(mat, M, 2e-4).c_star - C) / 2e-4;
        const double slope_gap =
            std::max((s1 - M.mandel()).norm(), (s2 - M.mandel()).norm()) / M.mandel().norm();
        const bool pass = exact_gap == 0.0 && zero_gap == 0.0 && slope_gap <= 1e-6;
        report(9, "dilute formula: exact S = 0 contract and slope", pass,
               std::max({exact_gap, zero_gap, slope_gap}), 1e-6);
    }

    // ---- criterion 10: boundary condition residual of every solved density
    {
        double worst = 0.0;
        for (const auto& p : presets()) {
            for (int i = 0; i < 3; ++i) {
                const LameMaterial& mat = materials[static_cast<size_t>(i)];
                for (int l = 1; l <= 3; ++l) {
                    const Loading ld = Loading::canonical(l);
                    const auto dc = solve_first_order(p.map, mat, ld);
                    worst = std::max(worst, boundary_residual(dc, p.map, mat, ld, 256));
                }
            }
        }
        worst = std::max(worst, c1_boundary);
        report(10, "rigid boundary condition at 256 samples", worst <= 1e-8, worst, 1e-8);
    }

    if (failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) FAILED\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
