#include "rigidemt/emt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigidemt/errors.hpp"

namespace rigidemt {

namespace {
constexpr double kPi = std::numbers::pi;

int pair_slot(int i, int j) {
    if (i == 1 && j == 1) return 0;
    if (i == 2 && j == 2) return 1;
    if ((i == 1 && j == 2) || (i == 2 && j == 1)) return 2;
    throw ValidationError("EmtTensor: indices must be 1 or 2");
}
} // namespace

EPair e_pairs(const DensityCoefficients& dc, const ExteriorMap& map) {
    const double g = map.gamma;
    EPair ep;
    Complex e1 = g * dc.coeff(-1);
    Complex e2 = g * std::conj(dc.coeff(1));
    for (int m = 1; m < static_cast<int>(map.a.size()); ++m) {
        const Complex am = map.a_coeff(m);
        if (am == Complex{}) continue;
        e1 += am * dc.coeff(m) * std::pow(g, -m);
        e2 += am * std::conj(dc.coeff(-m)) * std::pow(g, -m);
    }
    ep.e1 = 2.0 * kPi * e1;
    ep.e2 = 2.0 * kPi * e2;

    // independent route: trapezoid quadrature of the defining integrals
    int max_mode = 1;
    for (const auto& [m, cm] : dc.c) max_mode = std::max(max_mode, std::abs(m));
    const int n = 8 * (max_mode + static_cast<int>(map.a.size()) + 2);
    Complex q1{0.0, 0.0}, q2{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const double theta = 2.0 * kPi * j / n;
        const Complex z = map.boundary_point(theta);
        Complex p{0.0, 0.0};
        for (const auto& [m, cm] : dc.c) p += cm * std::polar(1.0, m * theta);
        q1 += z * p;
        q2 += z * std::conj(p);
    }
    q1 *= 2.0 * kPi / n;
    q2 *= 2.0 * kPi / n;

    const double scale = std::max({std::abs(ep.e1), std::abs(ep.e2), 1e-300});
    ep.quadrature_mismatch = std::max(std::abs(ep.e1 - q1), std::abs(ep.e2 - q2)) / scale;
    if (ep.quadrature_mismatch > 1e-10) {
        throw ConsistencyError("e_pairs: coefficient formula and quadrature disagree (relative " +
                               std::to_string(ep.quadrature_mismatch) + ")");
    }
    return ep;
}

double EmtTensor::entry(int i, int j, int k, int l) const {
    static constexpr int slot[3][3] = {{0, 2, 3}, {2, 1, 4}, {3, 4, 5}};
    const double v[6] = {m1111, m2222, m1122, m1112, m2212, m1212};
    return v[slot[pair_slot(i, j)][pair_slot(k, l)]];
}

Eigen::Matrix3d EmtTensor::mandel() const {
    const double s = std::sqrt(2.0);
    Eigen::Matrix3d M;
    M << m1111, m1122, s * m1112,
         m1122, m2222, s * m2212,
         s * m1112, s * m2212, 2.0 * m1212;
    return M;
}

Eigen::Matrix3d EmtTensor::voigt() const {
    Eigen::Matrix3d M;
    M << m1111, m1122, m1112,
         m1122, m2222, m2212,
         m1112, m2212, m1212;
    return M;
}

namespace {

struct RawEntries {
    double m1111, m2222, m1122, m2211, m1112, m1211, m2212, m1222, m1212;
};

RawEntries assemble_raw(const std::array<EPair, 3>& e, const LameMaterial& mat) {
    const double k1 = mat.mu / (2.0 * (mat.kappa - 1.0));
    const double k2 = mat.mu / 2.0;
    const double re11 = e[0].e1.real(), im11 = e[0].e1.imag();
    const double re12 = e[1].e1.real(), im12 = e[1].e1.imag();
    const double re13 = e[2].e1.real();
    const double e21 = e[0].e2.real();
    const double e22 = e[1].e2.real();
    const double e23 = e[2].e2.real();
    const double im13 = e[2].e1.imag();

    RawEntries r;
    r.m1111 = k1 * (re11 + e21) - k2 * (re12 + e22);
    r.m2222 = k1 * (-re11 + e21) + k2 * (-re12 + e22);
    r.m1122 = k1 * (-re11 + e21) + k2 * (re12 - e22);
    r.m2211 = k1 * (re11 + e21) + k2 * (re12 + e22);
    r.m1112 = k1 * im11 - k2 * im12;
    r.m1211 = k2 * (re13 + e23);
    r.m2212 = k1 * im11 + k2 * im12;
    r.m1222 = k2 * (-re13 + e23);
    r.m1212 = k2 * im13;
    return r;
}

EmtTensor symmetrize(const RawEntries& r) {
    EmtTensor t;
    t.m1111 = r.m1111;
    t.m2222 = r.m2222;
    t.m1122 = 0.5 * (r.m1122 + r.m2211);
    t.m1112 = 0.5 * (r.m1112 + r.m1211);
    t.m2212 = 0.5 * (r.m2212 + r.m1222);
    t.m1212 = r.m1212;
    return t;
}

double tensor_scale(const RawEntries& r) {
    return std::max({std::abs(r.m1111), std::abs(r.m2222), std::abs(r.m1122),
                     std::abs(r.m2211), std::abs(r.m1112), std::abs(r.m1211),
                     std::abs(r.m2212), std::abs(r.m1222), std::abs(r.m1212), 1e-300});
}

double max_entry_delta(const EmtTensor& a, const EmtTensor& b) {
    return std::max({std::abs(a.m1111 - b.m1111), std::abs(a.m2222 - b.m2222),
                     std::abs(a.m1122 - b.m1122), std::abs(a.m1112 - b.m1112),
                     std::abs(a.m2212 - b.m2212), std::abs(a.m1212 - b.m1212)});
}

EmtResult emt_at_window(const ExteriorMap& map, const LameMaterial& mat, SolveOptions opts) {
    EmtResult res;
    res.densities = solve_canonical(map, mat, opts);
    for (int i = 0; i < 3; ++i) {
        res.e[static_cast<size_t>(i)] = e_pairs(res.densities[static_cast<size_t>(i)], map);
    }
    const RawEntries raw = assemble_raw(res.e, mat);
    res.tensor = symmetrize(raw);

    const double scale = tensor_scale(raw);
    res.diag.symmetry_residual =
        std::max({std::abs(raw.m1122 - raw.m2211), std::abs(raw.m1112 - raw.m1211),
                  std::abs(raw.m2212 - raw.m1222)}) / scale;

    // alternative route to m1122 (kept as a surfaced diagnostic;
    // it differs from the assembled value by mu * Re(e1 of the second loading))
    const double k1 = mat.mu / (2.0 * (mat.kappa - 1.0));
    const double k2 = mat.mu / 2.0;
    const double m1122_variant = k1 * res.e[0].e2.real() - k2 * res.e[1].e1.real();
    res.diag.alt_m1122_gap = std::abs(m1122_variant - res.tensor.m1122) / scale;

    double escale = 1e-300;
    for (const auto& ep : res.e) escale = std::max({escale, std::abs(ep.e1), std::abs(ep.e2)});
    const double r1 = std::abs(res.e[0].e1.real() + (mat.kappa - 1.0) * res.e[1].e2.real());
    const double r2 = std::abs(res.e[2].e1.real() + res.e[1].e1.imag());
    const double r3 = std::abs(res.e[0].e1.imag() - (mat.kappa - 1.0) * res.e[2].e2.real());
    double r4 = 0.0;
    for (const auto& ep : res.e) r4 = std::max(r4, std::abs(ep.e2.imag()));
    res.diag.identity_residual = std::max({r1, r2, r3, r4}) / escale;

    for (const auto& ep : res.e) {
        res.diag.epair_quadrature_mismatch =
            std::max(res.diag.epair_quadrature_mismatch, ep.quadrature_mismatch);
    }
    for (const auto& dc : res.densities) {
        res.diag.max_boundary_residual = std::max(res.diag.max_boundary_residual, dc.residual);
        res.diag.extra_support = std::max(res.diag.extra_support, dc.extra_support);
    }
    res.diag.window = opts.truncation;
    return res;
}

} // namespace

EmtResult emt_first_order(const ExteriorMap& map, const LameMaterial& mat,
                          const SolveOptions& opts) {
    const int N = std::max(map.degree(), 1);
    SolveOptions o = opts;
    o.truncation = std::max(opts.truncation, 4 * N + 32);

    EmtResult coarse = emt_at_window(map, mat, o);
    for (int pass = 0; pass < 3; ++pass) {
        SolveOptions o2 = o;
        o2.truncation = 2 * o.truncation;
        EmtResult fine = emt_at_window(map, mat, o2);
        const double scale = std::max({std::abs(fine.tensor.m1111), std::abs(fine.tensor.m2222),
                                       std::abs(fine.tensor.m1212), 1.0});
        const double delta = max_entry_delta(coarse.tensor, fine.tensor) / scale;
        fine.diag.refinement_delta = delta;
        if (delta < 1e-12) return fine;
        o = o2;
        coarse = std::move(fine);
    }
    throw SolverError("emt_first_order: series budget doubling did not converge");
}

namespace {

EmtTensor example_type(const LameMaterial& mat, double g, Complex a1, double denom,
                       double stiff_num, int gamma_pow) {
    // shared shape of the degree-1 and degree-2 closed forms
    const double alpha = mat.alpha, beta = mat.beta, kappa = mat.kappa;
    const double gp = std::pow(g, gamma_pow); // gamma^2 (N=1) or gamma^4 (N=2)
    const double re = a1.real(), im = a1.imag();
    EmtTensor t;
    const double common = kPi * g * g / alpha + kPi / (kappa - 1.0) * stiff_num -
                          kPi / alpha * (alpha + beta) * gp * im * im / denom;
    t.m1111 = 2.0 * kPi / alpha * re + common;
    t.m2222 = -2.0 * kPi / alpha * re + common;
    t.m1122 = kPi / (kappa - 1.0) * stiff_num - kPi * g * g / alpha +
              kPi / alpha * (alpha + beta) * gp * im * im / denom;
    t.m1212 = kPi * g * g / alpha - kPi / alpha * (alpha + beta) * gp * re * re / denom;
    t.m1112 = kPi / alpha * im * (1.0 + (alpha + beta) * gp * re / denom);
    t.m2212 = kPi / alpha * im * (1.0 - (alpha + beta) * gp * re / denom);
    return t;
}

EmtTensor closed_form_degree3(const ExteriorMap& map, const LameMaterial& mat) {
    const double g = map.gamma;
    const double alpha = mat.alpha, beta = mat.beta, mu = mat.mu;
    const Complex a1 = map.a_coeff(1), a2 = map.a_coeff(2), a3 = map.a_coeff(3);

    std::array<EPair, 3> e;
    for (int i = 1; i <= 3; ++i) {
        const Loading ld = Loading::canonical(i);
        const double x = g * ld.A.real() / (beta * mu);
        const Complex q = (beta / alpha) * a3 / std::pow(g, 4);

        auto solve_at = [&](double y) {
            const Complex c1{x, y};
            const Complex cm2 = -2.0 * (beta / alpha) * a2 * std::conj(c1) / std::pow(g, 3);
            const Complex cm3 = -3.0 * (beta / alpha) * a3 * std::conj(c1) / std::pow(g, 4);
            const Complex T = (g / alpha) *
                              (-std::conj(ld.B) / mu -
                               beta * std::conj(c1) *
                                   (a1 / std::pow(g, 3) + a3 * std::conj(a1) / std::pow(g, 7)));
            const Complex cm1 = (T - q * std::conj(T)) / (1.0 - std::norm(q));
            return std::array<Complex, 4>{c1, cm1, cm2, cm3};
        };
        auto rot = [&](const std::array<Complex, 4>& c) {
            return (g * std::conj(c[0]) + a1 * std::conj(c[1]) / g +
                    a2 * std::conj(c[2]) / (g * g) + a3 * std::conj(c[3]) / (g * g * g))
                .imag();
        };
        const auto s0 = solve_at(0.0);
        const auto s1 = solve_at(1.0);
        const double r0 = rot(s0), slope = rot(s1) - r0;
        const double y = -r0 / slope;
        const auto c = solve_at(y);

        EPair ep;
        ep.e1 = 2.0 * kPi * (g * c[1] + a1 * c[0] / g);
        ep.e2 = 2.0 * kPi * (g * std::conj(c[0]) + a1 * std::conj(c[1]) / g +
                             a2 * std::conj(c[2]) / (g * g) + a3 * std::conj(c[3]) / (g * g * g));
        e[static_cast<size_t>(i - 1)] = ep;
    }
    return symmetrize(assemble_raw(e, mat));
}

} // namespace

EmtTensor closed_form_emt(const ExteriorMap& map, const LameMaterial& mat) {
    ExteriorMap centered = map;
    if (!centered.a.empty()) centered.a[0] = Complex{0.0, 0.0};
    const int N = centered.degree();
    const double g = map.gamma;
    const double alpha = mat.alpha, beta = mat.beta;
    const Complex a1 = centered.a_coeff(1), a2 = centered.a_coeff(2);

    if (N <= 1) {
        const double denom = alpha * std::pow(g, 4) + beta * std::norm(a1);
        const double stiff = (alpha * std::pow(g, 4) - beta * std::norm(a1)) /
                             (alpha * beta * g * g);
        return example_type(mat, g, a1, denom, stiff, 2);
    }
    if (N == 2) {
        const double denom = alpha * std::pow(g, 6) + beta * g * g * std::norm(a1) +
                             2.0 * beta * std::norm(a2);
        const double stiff = (alpha * std::pow(g, 6) - beta * g * g * std::norm(a1) -
                              2.0 * beta * std::norm(a2)) /
                             (alpha * beta * std::pow(g, 4));
        return example_type(mat, g, a1, denom, stiff, 4);
    }
    if (N == 3) return closed_form_degree3(centered, mat);
    throw ValidationError("closed_form_emt: closed forms cover polynomial degree <= 3");
}

Complex farfield_leading(const EPair& ep, const LameMaterial& mat, Complex w) {
    const double alpha = mat.alpha, beta = mat.beta;
    const Complex iw = 1.0 / w;
    const Complex two_s = -(alpha / (2.0 * kPi)) * ep.e1 * iw +
                          ((beta * ep.e2 - alpha * std::conj(ep.e2)) / (2.0 * kPi)) * std::conj(iw) -
                          (beta / (2.0 * kPi)) * std::conj(ep.e1) * w * std::conj(iw * iw);
    return 0.5 * two_s;
}

Eigen::Matrix3d mandel_rotation(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::Matrix2d Q;
    Q << c, -s, s, c;
    const double r = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Matrix2d, 3> basis;
    basis[0] << 1, 0, 0, 0;
    basis[1] << 0, 0, 0, 1;
    basis[2] << 0, r, r, 0;
    Eigen::Matrix3d R;
    for (int a = 0; a < 3; ++a) {
        const Eigen::Matrix2d rotated = Q * basis[static_cast<size_t>(a)] * Q.transpose();
        for (int b = 0; b < 3; ++b) {
            R(b, a) = (rotated.array() * basis[static_cast<size_t>(b)].array()).sum();
        }
    }
    return R;
}

} // namespace rigidemt
