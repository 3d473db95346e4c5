#include "rigidemt/density.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "rigidemt/errors.hpp"

namespace rigidemt {

namespace {

constexpr double kPi = std::numbers::pi;

int effective_window(const ExteriorMap& map, const SolveOptions& opts) {
    const int N = std::max(map.degree(), 1);
    return std::max(opts.truncation, 4 * N + 32);
}

// Exterior values of the complex log/Cauchy operators on the density basis,
// as Laurent windows in w:
//   L[phi_{-m}] = -(gamma^m / m) w^{-m}
//   L[phi_{+m}] = -gamma^{-m} sum_n (c_{n,m}/n) w^{-n}
//   C[.]        = (1/Phi') d/dw L[.],   C[phi_0] = w^{-1}/Phi'
struct OperatorTable {
    ExteriorMap map;
    double gamma;
    int N;
    int K;
    FaberTable faber;
    LaurentSeries recip;      // 1/Phi'
    LaurentSeries phi_series; // Phi
    LaurentSeries f1_comp;    // F_1(Phi(w)) = Phi - a0
    FourierTrace phi_trace;

    OperatorTable(const ExteriorMap& m, int window)
        : map(m),
          gamma(m.gamma),
          N(m.degree()),
          K(window),
          faber(build_faber_table(m, window, window)),
          recip(reciprocal_derivative(m, window)),
          phi_series(m.series(window)),
          f1_comp(phi_series - LaurentSeries::constant(m.a_coeff(0), window)),
          phi_trace(FourierTrace::of_series(phi_series, m.gamma, window)) {}

    LaurentSeries log_op(int m) const {
        if (m < 0) {
            const int k = -m;
            return LaurentSeries::monomial(-k, -std::pow(gamma, k) / k, K);
        }
        if (m > 0) {
            LaurentSeries s = LaurentSeries::zero(K);
            const double gm = std::pow(gamma, -m);
            for (int n = 1; n <= K; ++n) {
                const Complex c = faber.grunsky_coeff(n, m);
                if (c != Complex{}) s.set_coeff(-n, -gm * c / static_cast<double>(n));
            }
            return s;
        }
        throw ConsistencyError("log_op: the m = 0 basis function has a log trace, use cauchy_op");
    }

    LaurentSeries cauchy_op(int m) const {
        auto it = cauchy_cache_.find(m);
        if (it != cauchy_cache_.end()) return it->second;
        LaurentSeries s = (m == 0) ? mul(LaurentSeries::monomial(-1, 1.0, K), recip)
                                   : mul(log_op(m).derivative(), recip);
        cauchy_cache_.emplace(m, s);
        return s;
    }

    // C[conj(zeta) phi_m]; on the boundary conj(Phi) = gamma^2/s + conj(a0) + sum conj(a_j) gamma^{-2j} s^j,
    // so conj(zeta) phi_m = gamma phi_{m-1} + conj(a0) phi_m + sum_j conj(a_j) gamma^{-j} phi_{m+j}.
    LaurentSeries cauchy_zbar_op(int m) const {
        LaurentSeries s = gamma * cauchy_op(m - 1);
        const Complex a0 = map.a_coeff(0);
        if (a0 != Complex{}) s += std::conj(a0) * cauchy_op(m);
        for (int j = 1; j <= N; ++j) {
            const Complex aj = map.a_coeff(j);
            if (aj != Complex{}) s += std::conj(aj) * std::pow(gamma, -j) * cauchy_op(m + j);
        }
        return s;
    }

private:
    mutable std::unordered_map<int, LaurentSeries> cauchy_cache_;
};

// 2 mu H as a boundary trace: (kappa A - conj A) F1(Phi) - a0 conj(A) - conj(B) conj(F1(Phi))
FourierTrace loading_trace(const OperatorTable& T, const LameMaterial& mat, const Loading& ld) {
    const Complex lead = mat.kappa * ld.A - std::conj(ld.A);
    FourierTrace t = FourierTrace::of_series(lead * T.f1_comp, T.gamma, T.K);
    t.add(0, -T.map.a_coeff(0) * std::conj(ld.A));
    t += (-std::conj(ld.B)) * FourierTrace::of_conj_series(T.f1_comp, T.gamma, T.K);
    return t;
}

struct UnknownColumns {
    // 2S trace contribution of c_m is c_m * u + conj(c_m) * v
    FourierTrace u, v;
};

UnknownColumns columns_for(const OperatorTable& T, const LameMaterial& mat, int m) {
    UnknownColumns col;
    col.u = mat.alpha * FourierTrace::of_series(T.log_op(m), T.gamma, T.K);
    col.u += mat.alpha * FourierTrace::of_conj_series(T.log_op(-m), T.gamma, T.K);
    col.v = (-mat.beta) * product(T.phi_trace,
                                  FourierTrace::of_conj_series(T.cauchy_op(m), T.gamma, T.K));
    col.v += mat.beta * FourierTrace::of_conj_series(T.cauchy_zbar_op(m), T.gamma, T.K);
    return col;
}

std::vector<int> support_indices(int degree, bool wide) {
    const int Q = std::max(degree, 1);
    std::vector<int> s;
    if (wide) {
        for (int m = 1; m <= degree + 3; ++m) s.push_back(m);
        for (int m = 1; m <= Q + 4; ++m) s.push_back(-m);
    } else {
        s.push_back(1);
        for (int m = 1; m <= Q; ++m) s.push_back(-m);
    }
    return s;
}

// trace of 2S[phi] for explicit coefficients
FourierTrace two_s_trace(const OperatorTable& T, const LameMaterial& mat,
                         const std::map<int, Complex>& coeffs) {
    FourierTrace acc(T.K);
    for (const auto& [m, cm] : coeffs) {
        if (cm == Complex{}) continue;
        const UnknownColumns col = columns_for(T, mat, m);
        acc += cm * col.u;
        acc += std::conj(cm) * col.v;
    }
    return acc;
}

// Matrix side of the boundary matching; independent of the loading, so one
// assembly and factorization serves all three canonical solves.
class BoundarySolver {
public:
    BoundarySolver(const ExteriorMap& map, const LameMaterial& mat, int window, bool wide)
        : map_(map), mat_(mat), T_(map, window), support_(support_indices(T_.N, wide)) {
        const int n_unknowns = 2 * static_cast<int>(support_.size()) + 3;
        const int n_modes = 2 * T_.K + 1;
        const int n_rows = 2 * n_modes + 1;

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, n_unknowns);
        auto put = [&](int colidx, const FourierTrace& t, Complex factor) {
            for (int k = -T_.K; k <= T_.K; ++k) {
                const Complex v = factor * t.coeff(k);
                A(2 * (k + T_.K), colidx) += v.real();
                A(2 * (k + T_.K) + 1, colidx) += v.imag();
            }
        };
        cols_.reserve(support_.size());
        for (size_t s = 0; s < support_.size(); ++s) {
            cols_.push_back(columns_for(T_, mat_, support_[s]));
            const UnknownColumns& col = cols_.back();
            put(static_cast<int>(2 * s), col.u + col.v, Complex{mat_.mu, 0.0});
            put(static_cast<int>(2 * s + 1), col.u - col.v, Complex{0.0, mat_.mu});
        }
        const int qcol = 2 * static_cast<int>(support_.size());
        FourierTrace one(T_.K);
        one.add(0, 1.0);
        put(qcol, one, Complex{-1.0, 0.0});
        put(qcol + 1, one, Complex{0.0, -1.0});
        put(qcol + 2, T_.phi_trace, Complex{0.0, -1.0});

        // rotation constraint Im(gamma conj(c1) + sum a_m conj(c_{-m}) gamma^{-m}) = 0
        const int row = n_rows - 1;
        for (size_t s = 0; s < support_.size(); ++s) {
            const int m = support_[s];
            if (m == 1) {
                A(row, static_cast<int>(2 * s + 1)) = -T_.gamma;
            } else if (m < 0) {
                const Complex am = map_.a_coeff(-m);
                const double gm = std::pow(T_.gamma, m);
                A(row, static_cast<int>(2 * s)) += am.imag() * gm;
                A(row, static_cast<int>(2 * s + 1)) += -am.real() * gm;
            }
        }

        qr_.compute(A);
        const auto& R = qr_.matrixR();
        const int rank_dim = std::min<int>(A.rows(), A.cols());
        const double r0 = std::abs(R(0, 0));
        const double rn = std::abs(R(rank_dim - 1, rank_dim - 1));
        if (!(rn > 0.0) || r0 / rn > 1e12) {
            throw SolverError("solve_first_order: boundary-matching system is degenerate "
                              "(condition estimate " + std::to_string(rn > 0 ? r0 / rn : 0.0) +
                              ")");
        }
        rows_ = n_rows;
    }

    const OperatorTable& table() const { return T_; }

    DensityCoefficients solve(const Loading& ld) const {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows_);
        const FourierTrace th = loading_trace(T_, mat_, ld);
        for (int k = -T_.K; k <= T_.K; ++k) {
            rhs(2 * (k + T_.K)) = -th.coeff(k).real();
            rhs(2 * (k + T_.K) + 1) = -th.coeff(k).imag();
        }
        const Eigen::VectorXd x = qr_.solve(rhs);

        std::map<int, Complex> coeffs;
        for (size_t s = 0; s < support_.size(); ++s) {
            coeffs[support_[s]] =
                Complex{x(static_cast<int>(2 * s)), x(static_cast<int>(2 * s + 1))};
        }

        // rigid part and residual from the assembled trace
        FourierTrace total = th;
        for (size_t s = 0; s < support_.size(); ++s) {
            const Complex cm = coeffs[support_[s]];
            if (cm == Complex{}) continue;
            total += (mat_.mu * cm) * cols_[s].u;
            total += (mat_.mu * std::conj(cm)) * cols_[s].v;
        }
        const double q3 = (total.coeff(1) / (Complex{0.0, 1.0} * T_.gamma)).real();
        const Complex q0 = total.coeff(0) - Complex{0.0, 1.0} * q3 * map_.a_coeff(0);
        FourierTrace rigid(T_.K);
        rigid.add(0, q0);
        rigid += Complex{0.0, q3} * T_.phi_trace;

        DensityCoefficients dc;
        dc.loading = ld;
        dc.map_degree = T_.N;
        dc.b1 = q0.real() / (2.0 * mat_.mu);
        dc.b2 = q0.imag() / (2.0 * mat_.mu);
        dc.b3 = -q3 / (2.0 * mat_.mu);
        dc.residual = (total - rigid).max_abs_coeff() / std::max(th.max_abs_coeff(), 1e-300);

        const int Q = std::max(T_.N, 1);
        for (const auto& [m, cm] : coeffs) {
            const bool structural = (m == 1) || (m <= -1 && m >= -Q);
            if (!structural) dc.extra_support = std::max(dc.extra_support, std::abs(cm));
        }
        dc.c = std::move(coeffs);
        return dc;
    }

private:
    ExteriorMap map_;
    LameMaterial mat_;
    OperatorTable T_;
    std::vector<int> support_;
    std::vector<UnknownColumns> cols_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
    int rows_ = 0;
};

struct Finished {
    double b1, b2, b3;
    double residual;
};

// Extract rigid coefficients from the total trace and measure what is left.
Finished finish(const OperatorTable& T, const LameMaterial& mat, const Loading& ld,
                const std::map<int, Complex>& coeffs) {
    FourierTrace total = loading_trace(T, mat, ld);
    total += mat.mu * two_s_trace(T, mat, coeffs);

    const double g = T.gamma;
    const double q3 = (total.coeff(1) / (Complex{0.0, 1.0} * g)).real();
    const Complex q0 = total.coeff(0) - Complex{0.0, 1.0} * q3 * T.map.a_coeff(0);

    FourierTrace rigid(T.K);
    rigid.add(0, q0);
    rigid += Complex{0.0, q3} * T.phi_trace;

    const FourierTrace diff = total - rigid;
    double scale = loading_trace(T, mat, ld).max_abs_coeff();
    scale = std::max(scale, 1e-300);

    Finished out;
    out.b1 = q0.real() / (2.0 * mat.mu);
    out.b2 = q0.imag() / (2.0 * mat.mu);
    out.b3 = -q3 / (2.0 * mat.mu);
    out.residual = diff.max_abs_coeff() / scale;
    return out;
}

DensityCoefficients package(const OperatorTable& T, const LameMaterial& mat, const Loading& ld,
                            std::map<int, Complex> coeffs) {
    DensityCoefficients dc;
    dc.loading = ld;
    dc.map_degree = T.N;
    const Finished fin = finish(T, mat, ld, coeffs);
    dc.b1 = fin.b1;
    dc.b2 = fin.b2;
    dc.b3 = fin.b3;
    dc.residual = fin.residual;

    const int Q = std::max(T.N, 1);
    double extra = 0.0;
    for (const auto& [m, cm] : coeffs) {
        const bool structural = (m == 1) || (m <= -1 && m >= -Q);
        if (!structural) extra = std::max(extra, std::abs(cm));
    }
    dc.extra_support = extra;
    dc.c = std::move(coeffs);
    return dc;
}

} // namespace

DensityCoefficients solve_first_order(const ExteriorMap& map, const LameMaterial& mat,
                                      const Loading& loading, const SolveOptions& opts) {
    int window = effective_window(map, opts);
    for (int attempt = 0;; ++attempt) {
        const BoundarySolver solver(map, mat, window, opts.wide_support);
        DensityCoefficients dc = solver.solve(loading);
        if (dc.residual <= opts.residual_tol) return dc;
        if (attempt >= opts.max_escalations) {
            throw SolverError("solve_first_order: residual " + std::to_string(dc.residual) +
                              " above tolerance after budget escalation");
        }
        window *= 2;
    }
}

std::array<DensityCoefficients, 3> solve_canonical(const ExteriorMap& map,
                                                   const LameMaterial& mat,
                                                   const SolveOptions& opts) {
    int window = effective_window(map, opts);
    for (int attempt = 0;; ++attempt) {
        const BoundarySolver solver(map, mat, window, opts.wide_support);
        std::array<DensityCoefficients, 3> out = {
            solver.solve(Loading::u1()), solver.solve(Loading::u2()),
            solver.solve(Loading::u3())};
        const double worst =
            std::max({out[0].residual, out[1].residual, out[2].residual});
        if (worst <= opts.residual_tol) return out;
        if (attempt >= opts.max_escalations) {
            throw SolverError("solve_canonical: residual " + std::to_string(worst) +
                              " above tolerance after budget escalation");
        }
        window *= 2;
    }
}

DensityCoefficients solve_faber_matching(const ExteriorMap& map, const LameMaterial& mat,
                                         const Loading& loading, const SolveOptions& opts) {
    // The matching relations are translation-equivariant; run them on the
    // centered map, then recover rigid coefficients against the original.
    ExteriorMap centered = map;
    if (!centered.a.empty()) centered.a[0] = Complex{0.0, 0.0};

    const int N = centered.degree();
    const int Q = std::max(N, 1);
    const double g = map.gamma;
    const double alpha = mat.alpha, beta = mat.beta, mu = mat.mu;
    const Complex B = loading.B;

    const auto p = faber_coefficients(centered, Q + 2);
    const auto d = derivative_expansion(p, Q + 2);
    auto dcoef = [&](int m, int j) -> Complex {
        if (m < 1 || m > Q + 2 || j < 0 || j >= m) return {0.0, 0.0};
        return d[static_cast<size_t>(m)][static_cast<size_t>(j)];
    };

    const double x = g * loading.A.real() / (beta * mu); // Re(c1) anchor

    // c_{-j} solve, affine in the three real parameters (1, x, y = Im c1).
    // Equation j (coefficient of conj(F_j) in 2(H/mu + S)):
    //   -(alpha/(j g^j)) c_{-j}
    //   - beta sum_{k=j+2}^{N} sum_{m=1}^{k-j-1} conj(c_{-m}) a_k conj(d_{k-m,j}) / ((k-m) g^{2k-m})
    //   - beta conj(c1) sum_{k=j}^{N} a_k conj(d_{k+1,j}) / ((k+1) g^{2k+1})
    //   - (conj(B)/mu) [j == 1]  = 0
    const int n = 2 * Q;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2); // columns: constant part, y part
    auto ridx = [&](int j) { return 2 * (j - 1); };

    for (int j = 1; j <= Q; ++j) {
        const double diag = -alpha / (j * std::pow(g, j));
        M(ridx(j), ridx(j)) += diag;
        M(ridx(j) + 1, ridx(j) + 1) += diag;

        for (int k = j + 2; k <= N; ++k) {
            const Complex ak = centered.a_coeff(k);
            if (ak == Complex{}) continue;
            for (int m = 1; m <= k - j - 1; ++m) {
                const Complex w = -beta * ak * std::conj(dcoef(k - m, j)) /
                                  ((k - m) * std::pow(g, 2 * k - m));
                // w * conj(c_{-m}) contributes (Re w Re c + Im... as real-linear blocks
                M(ridx(j), ridx(m)) += w.real();
                M(ridx(j), ridx(m) + 1) += w.imag();
                M(ridx(j) + 1, ridx(m)) += w.imag();
                M(ridx(j) + 1, ridx(m) + 1) += -w.real();
            }
        }

        Complex s{0.0, 0.0};
        for (int k = j; k <= N; ++k) {
            const Complex ak = centered.a_coeff(k);
            if (ak == Complex{}) continue;
            s += ak * std::conj(dcoef(k + 1, j)) / ((k + 1) * std::pow(g, 2 * k + 1));
        }
        // -beta conj(c1) s with conj(c1) = x - i y
        const Complex const_part = -beta * s * x;
        const Complex y_part = -beta * s * Complex{0.0, -1.0};
        rhs(ridx(j), 0) -= const_part.real();
        rhs(ridx(j) + 1, 0) -= const_part.imag();
        rhs(ridx(j), 1) -= y_part.real();
        rhs(ridx(j) + 1, 1) -= y_part.imag();

        if (j == 1) {
            const Complex bb = -std::conj(B) / mu;
            rhs(ridx(j), 0) -= bb.real();
            rhs(ridx(j) + 1, 0) -= bb.imag();
        }
    }

    const Eigen::MatrixXd sol = M.fullPivLu().solve(rhs);
    auto cminus = [&](int j, double y) {
        return Complex{sol(ridx(j), 0) + y * sol(ridx(j), 1),
                       sol(ridx(j) + 1, 0) + y * sol(ridx(j) + 1, 1)};
    };

    // rotation constraint fixes y
    auto rot = [&](double y) {
        Complex acc = g * std::conj(Complex{x, y});
        for (int m = 1; m <= Q; ++m) {
            acc += centered.a_coeff(m) * std::conj(cminus(m, y)) * std::pow(g, -m);
        }
        return acc.imag();
    };
    const double r0 = rot(0.0), r1 = rot(1.0);
    const double slope = r1 - r0;
    if (std::abs(slope) < 1e-14 * (std::abs(r0) + 1.0)) {
        throw SolverError("solve_faber_matching: rotation constraint is degenerate");
    }
    const double y = -r0 / slope;

    std::map<int, Complex> coeffs;
    coeffs[1] = Complex{x, y};
    for (int j = 1; j <= Q; ++j) coeffs[-j] = cminus(j, y);

    const OperatorTable T(map, effective_window(map, opts));
    return package(T, mat, loading, std::move(coeffs));
}

Complex SingleLayerSeries::eval_two_s(Complex w) const {
    return alpha * l_phi.eval(w) + alpha * std::conj(l_phibar.eval(w)) -
           beta * map.map(w) * std::conj(c_phi.eval(w)) + beta * std::conj(c_zbar.eval(w));
}

double SingleLayerSeries::truncation_estimate(double r) const {
    const double g = map.gamma;
    if (!(r > g)) return std::numeric_limits<double>::infinity();
    auto tail = [&](const LaurentSeries& s) {
        // |lowest kept coefficient| * r^lo, continued as a geometric tail in g/r
        if (s.empty()) return 0.0;
        const double t = std::abs(s.coeff(s.lo())) * std::pow(r, s.lo());
        return t / (1.0 - g / r);
    };
    return alpha * (tail(l_phi) + tail(l_phibar)) +
           beta * ((std::abs(map.map(Complex{r, 0.0}))) * tail(c_phi) + tail(c_zbar));
}

SingleLayerSeries single_layer_series(const DensityCoefficients& dc, const ExteriorMap& map,
                                      const LameMaterial& mat, const SolveOptions& opts) {
    const OperatorTable T(map, effective_window(map, opts));
    SingleLayerSeries out;
    out.alpha = mat.alpha;
    out.beta = mat.beta;
    out.map = map;
    out.l_phi = LaurentSeries::zero(T.K);
    out.l_phibar = LaurentSeries::zero(T.K);
    out.c_phi = LaurentSeries::zero(T.K);
    out.c_zbar = LaurentSeries::zero(T.K);
    for (const auto& [m, cm] : dc.c) {
        if (cm == Complex{}) continue;
        out.l_phi += cm * T.log_op(m);
        out.l_phibar += std::conj(cm) * T.log_op(-m);
        out.c_phi += cm * T.cauchy_op(m);
        out.c_zbar += cm * T.cauchy_zbar_op(m);
    }
    return out;
}

Complex single_layer_exterior(const DensityCoefficients& dc, const ExteriorMap& map,
                              const LameMaterial& mat, Complex w, const SolveOptions& opts) {
    if (!(std::abs(w) > map.gamma)) {
        throw ValidationError("single_layer_exterior: requires |w| > gamma");
    }
    return 0.5 * single_layer_series(dc, map, mat, opts).eval_two_s(w);
}

Complex background_field(const ExteriorMap& map, const LameMaterial& mat,
                         const Loading& loading, Complex z) {
    const Complex f1 = z - map.a_coeff(0);
    const Complex two_mu_h = (mat.kappa * loading.A - std::conj(loading.A)) * f1 -
                             map.a_coeff(0) * std::conj(loading.A) -
                             std::conj(loading.B * f1);
    return two_mu_h / (2.0 * mat.mu);
}

Complex total_field(const DensityCoefficients& dc, const ExteriorMap& map,
                    const LameMaterial& mat, const Loading& loading, Complex w,
                    const SolveOptions& opts) {
    return background_field(map, mat, loading, map.map(w)) +
           single_layer_exterior(dc, map, mat, w, opts);
}

double boundary_residual(const DensityCoefficients& dc, const ExteriorMap& map,
                         const LameMaterial& mat, const Loading& loading,
                         int n_samples, const SolveOptions& opts) {
    // evaluate in a window twice as wide as the solve used, so the measured
    // mismatch reflects the density itself, not the evaluation truncation
    const OperatorTable T(map, 2 * effective_window(map, opts));
    FourierTrace total = loading_trace(T, mat, loading);
    total += mat.mu * two_s_trace(T, mat, dc.c);

    double worst = 0.0;
    double scale = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double theta = 2.0 * kPi * i / n_samples;
        const Complex z = map.boundary_point(theta);
        const Complex rigid = 2.0 * mat.mu * RigidMotions::combination(dc.b1, dc.b2, dc.b3, z);
        worst = std::max(worst, std::abs(total.eval(theta) - rigid));
        scale = std::max(scale, std::abs(2.0 * mat.mu *
                                         background_field(map, mat, loading, z)));
    }
    return worst / std::max(scale, 1e-300);
}

} // namespace rigidemt
