#include "rigidemt/effective.hpp"

#include <cmath>

#include "rigidemt/errors.hpp"

namespace rigidemt {

Eigen::Matrix3d background_stiffness(const LameMaterial& mat) {
    Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
    c(0, 0) = c(1, 1) = mat.lambda + 2.0 * mat.mu;
    c(0, 1) = c(1, 0) = mat.lambda;
    c(2, 2) = 2.0 * mat.mu;
    return c;
}

EffectiveTensor effective(const LameMaterial& mat, const EmtTensor& emt, double f,
                          const std::optional<Eigen::Matrix3d>& s) {
    if (!(f >= 0.0) || !(f < 1.0)) {
        throw ValidationError("effective: volume fraction must lie in [0, 1)");
    }
    EffectiveTensor out;
    out.f = f;
    out.c_background = background_stiffness(mat);
    out.s_matrix = s;
    const Eigen::Matrix3d M = emt.mandel();
    if (!s.has_value() || s->isZero(0.0)) {
        out.c_star = out.c_background + f * M; // dilute first order, exact
    } else {
        const Eigen::Matrix3d A = Eigen::Matrix3d::Identity() - f * (*s) * M;
        Eigen::FullPivLU<Eigen::Matrix3d> lu(A);
        if (!lu.isInvertible()) {
            throw SolverError("effective: I - f S M is singular, beyond the dilute regime");
        }
        out.c_star = out.c_background + f * M * lu.inverse();
    }
    const double scale = std::max(out.c_star.cwiseAbs().maxCoeff(), 1e-300);
    out.symmetry_violation = (out.c_star - out.c_star.transpose()).cwiseAbs().maxCoeff() / scale;
    return out;
}

double volume_fraction(const ExteriorMap& map, double cell_area) {
    const double a = map.area();
    if (!(cell_area > a)) {
        throw ValidationError("volume_fraction: inclusion area exceeds the unit cell");
    }
    return a / cell_area;
}

double isotropy_deviation(const Eigen::Matrix3d& c) {
    Eigen::Matrix3d b_lambda = Eigen::Matrix3d::Zero();
    b_lambda(0, 0) = b_lambda(0, 1) = b_lambda(1, 0) = b_lambda(1, 1) = 1.0;
    const Eigen::Matrix3d b_mu = 2.0 * Eigen::Matrix3d::Identity();

    Eigen::Matrix2d gram;
    gram << (b_lambda.array() * b_lambda.array()).sum(), (b_lambda.array() * b_mu.array()).sum(),
        (b_mu.array() * b_lambda.array()).sum(), (b_mu.array() * b_mu.array()).sum();
    Eigen::Vector2d rhs;
    rhs << (c.array() * b_lambda.array()).sum(), (c.array() * b_mu.array()).sum();
    const Eigen::Vector2d coef = gram.ldlt().solve(rhs);
    const Eigen::Matrix3d nearest = coef(0) * b_lambda + coef(1) * b_mu;
    const double denom = std::max(c.norm(), 1e-300);
    return (c - nearest).norm() / denom;
}

} // namespace rigidemt
