#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "rigidemt/conformal.hpp"
#include "rigidemt/elastic.hpp"
#include "rigidemt/emt.hpp"

// Independent numerical route to the same quantities as the series pipeline:
// direct Kelvin-matrix collocation with its own quadrature. Shares only the
// boundary parametrization (the shape definition) with the series code.
namespace rigidemt::oracle {

struct Discretization {
    int n = 0;
    std::vector<double> theta;
    std::vector<Complex> z;       // boundary points
    std::vector<Complex> zprime;  // dz/dtheta
    std::vector<double> weight;   // (2 pi / n) * |z'|, so sums approximate d sigma integrals
};

Discretization discretize(const ExteriorMap& map, int n_points);

// (1/2pi) * integral of log(z - zeta) psi d sigma for an off-boundary target,
// trapezoid with a continuously unwrapped log branch.
Complex log_operator(const Discretization& d, const std::vector<Complex>& psi, Complex target);

// On-boundary target: the grid is laid so the target is a node and the
// logarithmic singularity is handled by the periodic-log product rule.
Complex log_operator_boundary(const ExteriorMap& map, const std::function<Complex(double)>& psi,
                              double theta_target, int n_points);

// (1/2pi) * integral of psi / (z - zeta) d sigma, off-boundary target.
Complex cauchy_operator(const Discretization& d, const std::vector<Complex>& psi, Complex target);

// Single layer with the Kelvin matrix, complex form, off-boundary target.
Complex kelvin_single_layer(const Discretization& d, const LameMaterial& mat,
                            const std::vector<Complex>& phi, Complex target);

// Same value reconstructed through the complex split
//   2 S = (alpha/beta) f - z conj(f') - conj(g),
//   f = beta L[phi], g = -alpha L[conj phi] - beta C[conj(zeta) phi].
Complex goursat_single_layer(const Discretization& d, const LameMaterial& mat,
                             const std::vector<Complex>& phi, Complex target);

// Quadrature weights R(i, j) of the product rule for
// integral of 0.5 log(4 sin^2((theta_i - t)/2)) f(t) dt on n nodes.
Eigen::MatrixXd periodic_log_weights(int n);

enum class OracleLoading { U1, U2, U3, XE1, XE2, YE1, YE2, R3 };

Complex oracle_background(const ExteriorMap& map, const LameMaterial& mat, OracleLoading ld,
                          Complex z);

struct OracleDensity {
    std::vector<Complex> phi; // samples at the nodes
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    double residual = 0.0;    // max collocation mismatch / loading scale
    int n_modes = 0;
    int n_points = 0;
};

// Least-squares collocation: unknown Fourier density (modes -n_modes..n_modes)
// plus the rigid coefficients, with the three orthogonality constraints
// appended as rows. n_points = 0 picks 2*n_modes + 32.
OracleDensity oracle_solve(const ExteriorMap& map, const LameMaterial& mat, OracleLoading ld,
                           int n_modes, int n_points = 0);

struct OracleEmt {
    EmtTensor tensor;
    double symmetry_residual = 0.0;
    double max_boundary_residual = 0.0;
};

// EMT straight from the defining boundary integrals of the four coordinate
// loadings, trapezoid quadrature.
OracleEmt emt_by_quadrature(const ExteriorMap& map, const LameMaterial& mat, int n_modes,
                            int n_points = 0);

} // namespace rigidemt::oracle
