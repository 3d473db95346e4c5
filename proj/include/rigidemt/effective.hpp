#pragma once

#include <Eigen/Dense>
#include <optional>

#include "rigidemt/conformal.hpp"
#include "rigidemt/elastic.hpp"
#include "rigidemt/emt.hpp"

namespace rigidemt {

// Background stiffness in the Mandel basis:
// [[lambda+2mu, lambda, 0], [lambda, lambda+2mu, 0], [0, 0, 2mu]].
Eigen::Matrix3d background_stiffness(const LameMaterial& mat);

struct EffectiveTensor {
    Eigen::Matrix3d c_background;
    Eigen::Matrix3d c_star;
    double f = 0.0;
    std::optional<Eigen::Matrix3d> s_matrix;
    double symmetry_violation = 0.0; // reported, never repaired
};

// Dilute effective stiffness C* = C + f M (I - f S M)^{-1}; S = 0 (omitted)
// reduces exactly to C + f M. Throws SolverError when I - f S M is singular.
EffectiveTensor effective(const LameMaterial& mat, const EmtTensor& emt, double f,
                          const std::optional<Eigen::Matrix3d>& s = std::nullopt);

double volume_fraction(const ExteriorMap& map, double cell_area);

// Frobenius distance of a Mandel matrix to its nearest isotropic tensor,
// relative to the matrix norm.
double isotropy_deviation(const Eigen::Matrix3d& c);

} // namespace rigidemt
