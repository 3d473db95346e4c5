#pragma once

#include <Eigen/Dense>
#include <array>

#include "rigidemt/density.hpp"

namespace rigidemt {

// The two complex moment functionals of one solved density,
//   e1 = integral of z phi over the boundary = 2 pi (gamma c_{-1} + sum a_m c_m gamma^{-m})
//   e2 = integral of z conj(phi)             = 2 pi (gamma conj(c_1) + sum a_m conj(c_{-m}) gamma^{-m}),
// recomputed by direct quadrature as a cross-check.
struct EPair {
    Complex e1{0.0, 0.0};
    Complex e2{0.0, 0.0};
    double quadrature_mismatch = 0.0;
};

EPair e_pairs(const DensityCoefficients& dc, const ExteriorMap& map);

// Fully symmetric first-order elastic moment tensor, stored by the six
// canonical entries; pair indices 11, 22, (12+21)/sym.
struct EmtTensor {
    double m1111 = 0.0, m2222 = 0.0, m1122 = 0.0;
    double m1112 = 0.0, m2212 = 0.0, m1212 = 0.0;

    double entry(int i, int j, int k, int l) const;

    // orthonormal (Mandel) 3x3 view, basis e1e1, e2e2, (e1e2+e2e1)/sqrt(2)
    Eigen::Matrix3d mandel() const;
    // plain Voigt view (engineering convention, no sqrt(2) scaling)
    Eigen::Matrix3d voigt() const;
};

struct EmtDiagnostics {
    double identity_residual = 0.0;        // moment-functional identities, relative
    double symmetry_residual = 0.0;     // raw pre-symmetrization asymmetry, relative
    double alt_m1122_gap = 0.0;   // alternative m1122 assembly vs the one used
    double epair_quadrature_mismatch = 0.0;
    double max_boundary_residual = 0.0;
    double extra_support = 0.0;
    int window = 0;
    double refinement_delta = 0.0;      // entrywise change in the last budget doubling
};

struct EmtResult {
    EmtTensor tensor;
    std::array<EPair, 3> e;
    std::array<DensityCoefficients, 3> densities;
    EmtDiagnostics diag;
};

// Solve the three canonical loadings and assemble the tensor; doubles the
// series budget until the entries move by less than 1e-12 relative.
EmtResult emt_first_order(const ExteriorMap& map, const LameMaterial& mat,
                          const SolveOptions& opts = {});

// Closed forms for polynomial tails of degree <= 3 (a0 is ignored:
// translation invariance). Throws ValidationError for higher degree.
EmtTensor closed_form_emt(const ExteriorMap& map, const LameMaterial& mat);

// Leading far-field form of the single layer S[phi] built from the moment
// functionals of an arbitrary density; exact up to O(|w|^-2).
Complex farfield_leading(const EPair& ep, const LameMaterial& mat, Complex w);

// Mandel-basis rotation matrix of the in-plane rotation by phi.
Eigen::Matrix3d mandel_rotation(double phi);

} // namespace rigidemt
