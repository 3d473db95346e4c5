#include "rigidemt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigidemt/errors.hpp"

namespace rigidemt::oracle {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
} // namespace

Discretization discretize(const ExteriorMap& map, int n_points) {
    if (n_points < 8 || n_points % 2 != 0) {
        throw ValidationError("discretize: need an even number of nodes, at least 8");
    }
    Discretization d;
    d.n = n_points;
    d.theta.resize(static_cast<size_t>(n_points));
    d.z.resize(static_cast<size_t>(n_points));
    d.zprime.resize(static_cast<size_t>(n_points));
    d.weight.resize(static_cast<size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double t = 2.0 * kPi * j / n_points;
        const Complex w = std::polar(map.gamma, t);
        d.theta[static_cast<size_t>(j)] = t;
        d.z[static_cast<size_t>(j)] = map.map(w);
        d.zprime[static_cast<size_t>(j)] = map.map_derivative(w) * kI * w;
        d.weight[static_cast<size_t>(j)] =
            (2.0 * kPi / n_points) * std::abs(d.zprime[static_cast<size_t>(j)]);
    }
    return d;
}

Complex log_operator(const Discretization& d, const std::vector<Complex>& psi, Complex target) {
    Complex acc{0.0, 0.0};
    double prev_arg = 0.0;
    double offset = 0.0;
    for (int j = 0; j < d.n; ++j) {
        const Complex diff = target - d.z[static_cast<size_t>(j)];
        if (diff == Complex{}) {
            throw ValidationError("log_operator: target coincides with a quadrature node");
        }
        double a = std::arg(diff);
        if (j > 0) {
            while (a + offset - prev_arg > kPi) offset -= 2.0 * kPi;
            while (a + offset - prev_arg < -kPi) offset += 2.0 * kPi;
        }
        prev_arg = a + offset;
        const Complex lg{std::log(std::abs(diff)), prev_arg};
        acc += lg * psi[static_cast<size_t>(j)] * d.weight[static_cast<size_t>(j)];
    }
    return acc / (2.0 * kPi);
}

Complex cauchy_operator(const Discretization& d, const std::vector<Complex>& psi, Complex target) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < d.n; ++j) {
        const Complex diff = target - d.z[static_cast<size_t>(j)];
        if (diff == Complex{}) {
            throw ValidationError("cauchy_operator: target coincides with a quadrature node");
        }
        acc += psi[static_cast<size_t>(j)] / diff * d.weight[static_cast<size_t>(j)];
    }
    return acc / (2.0 * kPi);
}

Eigen::MatrixXd periodic_log_weights(int n) {
    if (n % 2 != 0) throw ValidationError("periodic_log_weights: n must be even");
    // R(s) = -(2 pi / n) sum_{m=1}^{n/2-1} cos(m s)/m - (2 pi / n^2) cos(n s / 2),
    // exact for trigonometric polynomials of degree < n/2 against
    // 0.5 log(4 sin^2(s/2)).
    Eigen::VectorXd r(n);
    for (int dths = 0; dths < n; ++dths) {
        const double s = 2.0 * kPi * dths / n;
        double acc = 0.0;
        for (int m = 1; m <= n / 2 - 1; ++m) acc += std::cos(m * s) / m;
        r(dths) = -(2.0 * kPi / n) * acc - (2.0 * kPi / (n * static_cast<double>(n))) *
                                               std::cos(0.5 * n * s);
    }
    Eigen::MatrixXd R(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = r(((i - j) % n + n) % n);
    return R;
}

Complex log_operator_boundary(const ExteriorMap& map, const std::function<Complex(double)>& psi,
                              double theta_target, int n_points) {
    if (n_points % 2 != 0) throw ValidationError("log_operator_boundary: n_points must be even");
    const int n = n_points;
    // lay the grid so the target is node 0
    std::vector<double> t(static_cast<size_t>(n));
    std::vector<Complex> z(static_cast<size_t>(n)), zp(static_cast<size_t>(n));
    std::vector<double> h(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        t[static_cast<size_t>(j)] = theta_target + 2.0 * kPi * j / n;
        const Complex w = std::polar(map.gamma, t[static_cast<size_t>(j)]);
        z[static_cast<size_t>(j)] = map.map(w);
        zp[static_cast<size_t>(j)] = map.map_derivative(w) * kI * w;
        h[static_cast<size_t>(j)] = std::abs(zp[static_cast<size_t>(j)]);
    }
    const Eigen::MatrixXd R = periodic_log_weights(n);
    const Complex z0 = z[0];

    // factor the kernel as log(z0 - z(t)) = 0.5 log(4 sin^2(d/2))  [product rule]
    //                                     + i (d/2 - pi/2)         [sawtooth]
    //                                     + log rho(t)             [smooth periodic]
    // with d = t - t0 in (0, 2pi) and rho = (z0 - z(t)) / (1 - e^{i d}),
    // rho(t0) = -i z'(t0). The sawtooth has a jump at the node, so plain
    // trapezoid is not spectral; use its exact rule, integral of
    // i (d/2 - pi/2) e^{i k d} = pi / k.
    std::vector<Complex> saw(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double d = 2.0 * kPi * j / n;
        double s = 0.0;
        for (int k = 1; k <= n / 2 - 1; ++k) s += std::sin(k * d) / k;
        saw[static_cast<size_t>(j)] = -kI * (2.0 * kPi / n) * s +
                                      (2.0 * kPi / (n * static_cast<double>(n))) *
                                          ((j % 2 == 0) ? 1.0 : -1.0);
    }

    Complex acc{0.0, 0.0};
    double prev_arg = 0.0, offset = 0.0;
    for (int j = 0; j < n; ++j) {
        const Complex f = psi(t[static_cast<size_t>(j)]) * h[static_cast<size_t>(j)];
        const double d = 2.0 * kPi * j / n;
        Complex rho;
        if (j == 0) {
            rho = -kI * zp[0];
        } else {
            rho = (z0 - z[static_cast<size_t>(j)]) / (1.0 - std::polar(1.0, d));
        }
        double a = std::arg(rho);
        if (j > 0) {
            while (a + offset - prev_arg > kPi) offset -= 2.0 * kPi;
            while (a + offset - prev_arg < -kPi) offset += 2.0 * kPi;
        }
        prev_arg = a + offset;
        const Complex logrho{std::log(std::abs(rho)), prev_arg};
        acc += R(0, j) * f;
        acc += (2.0 * kPi / n) * logrho * f;
        acc += saw[static_cast<size_t>(j)] * f;
    }
    return acc / (2.0 * kPi);
}

Complex kelvin_single_layer(const Discretization& d, const LameMaterial& mat,
                            const std::vector<Complex>& phi, Complex target) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < d.n; ++j) {
        const Complex diff = target - d.z[static_cast<size_t>(j)];
        const double w = d.weight[static_cast<size_t>(j)];
        const Complex p = phi[static_cast<size_t>(j)];
        acc += w * (mat.alpha / (2.0 * kPi) * std::log(std::abs(diff)) * p -
                    mat.beta / (4.0 * kPi) * (p + diff / std::conj(diff) * std::conj(p)));
    }
    return acc;
}

Complex goursat_single_layer(const Discretization& d, const LameMaterial& mat,
                             const std::vector<Complex>& phi, Complex target) {
    const int n = d.n;
    std::vector<Complex> phibar(static_cast<size_t>(n)), zbarphi(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        phibar[static_cast<size_t>(j)] = std::conj(phi[static_cast<size_t>(j)]);
        zbarphi[static_cast<size_t>(j)] =
            std::conj(d.z[static_cast<size_t>(j)]) * phi[static_cast<size_t>(j)];
    }
    const Complex f = mat.beta * log_operator(d, phi, target);
    const Complex fprime = mat.beta * cauchy_operator(d, phi, target);
    const Complex g = -mat.alpha * log_operator(d, phibar, target) -
                      mat.beta * cauchy_operator(d, zbarphi, target);
    const double kappa = mat.alpha / mat.beta;
    return 0.5 * (kappa * f - target * std::conj(fprime) - std::conj(g));
}

Complex oracle_background(const ExteriorMap& map, const LameMaterial& mat, OracleLoading ld,
                          Complex z) {
    const Complex f1 = z - map.a_coeff(0);
    switch (ld) {
        case OracleLoading::U1:
            return (mat.kappa - 1.0) / (2.0 * mat.mu) * f1;
        case OracleLoading::U2:
            return -std::conj(f1) / (2.0 * mat.mu);
        case OracleLoading::U3:
            return kI * std::conj(f1) / (2.0 * mat.mu);
        case OracleLoading::XE1:
            return Complex{z.real(), 0.0};
        case OracleLoading::XE2:
            return kI * z.real();
        case OracleLoading::YE1:
            return Complex{z.imag(), 0.0};
        case OracleLoading::YE2:
            return kI * z.imag();
        case OracleLoading::R3:
            return -kI * z;
    }
    return {};
}

OracleDensity oracle_solve(const ExteriorMap& map, const LameMaterial& mat, OracleLoading ld,
                           int n_modes, int n_points) {
    if (n_modes < 1) throw ValidationError("oracle_solve: need n_modes >= 1");
    int n = n_points > 0 ? n_points : 2 * n_modes + 64;
    if (n % 2 != 0) ++n;
    if (2 * n + 3 < 2 * (2 * n_modes + 1) + 3) {
        throw ValidationError("oracle_solve: n_points too small for the mode count");
    }
    const Discretization d = discretize(map, n);
    const Eigen::MatrixXd R = periodic_log_weights(n);

    using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    const int nb = 2 * n_modes + 1;

    // kernel blocks: S[phi](z_i) = sum_j Gphi(i,j) phi_j + Gconj(i,j) conj(phi_j)
    CMat gphi(n, n), gconj(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double hj = std::abs(d.zprime[static_cast<size_t>(j)]);
            double log_part;
            Complex q;
            if (i == j) {
                log_part = R(i, j) + (2.0 * kPi / n) * std::log(hj);
                q = d.zprime[static_cast<size_t>(i)] / std::conj(d.zprime[static_cast<size_t>(i)]);
            } else {
                const Complex diff = d.z[static_cast<size_t>(i)] - d.z[static_cast<size_t>(j)];
                const double sinhalf =
                    2.0 * std::abs(std::sin(0.5 * (d.theta[static_cast<size_t>(i)] -
                                                   d.theta[static_cast<size_t>(j)])));
                log_part = R(i, j) + (2.0 * kPi / n) * std::log(std::abs(diff) / sinhalf);
                q = diff / std::conj(diff);
            }
            // d sigma carries h: the log rule is applied to f = phi * h
            gphi(i, j) = mat.alpha / (2.0 * kPi) * log_part * hj -
                         mat.beta / (4.0 * kPi) * d.weight[static_cast<size_t>(j)];
            gconj(i, j) = -mat.beta / (4.0 * kPi) * q * d.weight[static_cast<size_t>(j)];
        }
    }

    CMat E(n, nb), Ebar(n, nb);
    for (int j = 0; j < n; ++j) {
        for (int m = -n_modes; m <= n_modes; ++m) {
            E(j, m + n_modes) = std::polar(1.0, m * d.theta[static_cast<size_t>(j)]);
            Ebar(j, m + n_modes) = std::conj(E(j, m + n_modes));
        }
    }
    const CMat A = gphi * E;    // phi-linear part per basis function
    const CMat B = gconj * Ebar; // conj(phi) part per basis function

    const int rows = 2 * n + 3;
    const int cols = 2 * nb + 3;
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);

    double scale = 1e-300;
    for (int i = 0; i < n; ++i) {
        const Complex h = oracle_background(map, mat, ld, d.z[static_cast<size_t>(i)]);
        scale = std::max(scale, std::abs(h));
        rhs(2 * i) = -h.real();
        rhs(2 * i + 1) = -h.imag();
        for (int m = 0; m < nb; ++m) {
            const Complex cre = A(i, m) + B(i, m);
            const Complex cim = kI * (A(i, m) - B(i, m));
            sys(2 * i, 2 * m) = cre.real();
            sys(2 * i + 1, 2 * m) = cre.imag();
            sys(2 * i, 2 * m + 1) = cim.real();
            sys(2 * i + 1, 2 * m + 1) = cim.imag();
        }
        // rigid unknowns: -(b1 + i b2 + b3 (-i z))
        sys(2 * i, 2 * nb) = -1.0;
        sys(2 * i + 1, 2 * nb + 1) = -1.0;
        const Complex bz = kI * d.z[static_cast<size_t>(i)];
        sys(2 * i, 2 * nb + 2) = bz.real();
        sys(2 * i + 1, 2 * nb + 2) = bz.imag();
    }

    // orthogonality to rigid motions, trapezoid rows
    for (int m = 0; m < nb; ++m) {
        Complex c1{0.0, 0.0}, c3{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double w = d.weight[static_cast<size_t>(j)];
            c1 += w * E(j, m);
            c3 += w * std::conj(d.z[static_cast<size_t>(j)]) * E(j, m);
        }
        // int Re(phi) = 0, int Im(phi) = 0, int Im(conj(z) phi) = 0
        sys(2 * n, 2 * m) = c1.real();
        sys(2 * n, 2 * m + 1) = (kI * c1).real();
        sys(2 * n + 1, 2 * m) = c1.imag();
        sys(2 * n + 1, 2 * m + 1) = (kI * c1).imag();
        sys(2 * n + 2, 2 * m) = c3.imag();
        sys(2 * n + 2, 2 * m + 1) = (kI * c3).imag();
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys);
    const auto& Rq = qr.matrixR();
    const int rdim = std::min<int>(rows, cols);
    const double cond = std::abs(Rq(0, 0)) / std::max(std::abs(Rq(rdim - 1, rdim - 1)), 1e-300);
    if (qr.rank() < cols || cond > 1e13) {
        throw SolverError("oracle_solve: collocation system is rank deficient (cond ~ " +
                          std::to_string(cond) + ")");
    }
    const Eigen::VectorXd x = qr.solve(rhs);

    Eigen::VectorXcd dcoef(nb);
    for (int m = 0; m < nb; ++m) dcoef(m) = Complex{x(2 * m), x(2 * m + 1)};

    OracleDensity out;
    out.n_modes = n_modes;
    out.n_points = n;
    out.b1 = x(2 * nb);
    out.b2 = x(2 * nb + 1);
    out.b3 = x(2 * nb + 2);
    out.phi.resize(static_cast<size_t>(n));
    const Eigen::VectorXcd phivals = E * dcoef;
    for (int j = 0; j < n; ++j) out.phi[static_cast<size_t>(j)] = phivals(j);

    const Eigen::VectorXcd svals = A * dcoef + B * dcoef.conjugate();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Complex u = oracle_background(map, mat, ld, d.z[static_cast<size_t>(i)]) + svals(i);
        const Complex rigid = Complex{out.b1, out.b2} - kI * out.b3 * d.z[static_cast<size_t>(i)];
        worst = std::max(worst, std::abs(u - rigid));
    }
    out.residual = worst / scale;
    return out;
}

OracleEmt emt_by_quadrature(const ExteriorMap& map, const LameMaterial& mat, int n_modes,
                            int n_points) {
    const OracleLoading loadings[2][2] = {{OracleLoading::XE1, OracleLoading::XE2},
                                          {OracleLoading::YE1, OracleLoading::YE2}};
    OracleDensity g[2][2];
    int n = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            g[i][j] = oracle_solve(map, mat, loadings[i][j], n_modes, n_points);
            n = g[i][j].n_points;
        }
    const Discretization d = discretize(map, n);

    double m_full[2][2][2][2];
    OracleEmt out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.max_boundary_residual = std::max(out.max_boundary_residual, g[i][j].residual);
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    double acc = 0.0;
                    for (int p = 0; p < n; ++p) {
                        const Complex zp = d.z[static_cast<size_t>(p)];
                        const double coord = (k == 0) ? zp.real() : zp.imag();
                        const Complex gp = g[i][j].phi[static_cast<size_t>(p)];
                        const double comp = (l == 0) ? gp.real() : gp.imag();
                        acc += d.weight[static_cast<size_t>(p)] * coord * comp;
                    }
                    m_full[i][j][k][l] = acc;
                }
            }
        }
    }
    // average over the symmetry orbit of each canonical slot; report the spread
    auto orbit = [&](std::initializer_list<std::array<int, 4>> idx, double& target) {
        double sum = 0.0, lo = 1e300, hi = -1e300;
        for (const auto& q : idx) {
            const double v = m_full[q[0]][q[1]][q[2]][q[3]];
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        target = sum / static_cast<double>(idx.size());
        return hi - lo;
    };
    EmtTensor t;
    double spread = 0.0;
    spread = std::max(spread, orbit({{0, 0, 0, 0}}, t.m1111));
    spread = std::max(spread, orbit({{1, 1, 1, 1}}, t.m2222));
    spread = std::max(spread, orbit({{0, 0, 1, 1}, {1, 1, 0, 0}}, t.m1122));
    spread = std::max(spread, orbit({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}}, t.m1112));
    spread = std::max(spread, orbit({{1, 1, 0, 1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {1, 0, 1, 1}}, t.m2212));
    spread = std::max(spread, orbit({{0, 1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 1, 0}}, t.m1212));

    double scale = 1e-300;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) scale = std::max(scale, std::abs(m_full[i][j][k][l]));

    out.tensor = t;
    out.symmetry_residual = spread / scale;
    return out;
}

} // namespace rigidemt::oracle
