#pragma once

#include <array>
#include <map>

#include "rigidemt/conformal.hpp"
#include "rigidemt/elastic.hpp"
#include "rigidemt/faber.hpp"

namespace rigidemt {

struct SolveOptions {
    int truncation = 64;       // Faber order / Fourier window request
    double residual_tol = 1e-10;
    bool wide_support = false; // solve with extra coefficients beyond the structural support
    int max_escalations = 3;   // budget doublings before giving up
};

// Layer-density expansion sum_m c_m e^{i m theta} / h for one loading,
// plus the rigid-motion coefficients recovered from the matching.
struct DensityCoefficients {
    std::map<int, Complex> c;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    Loading loading;
    int map_degree = 0;
    double residual = 0.0;      // relative boundary-matching residual
    double extra_support = 0.0; // largest |c_m| outside the structural support

    Complex coeff(int m) const {
        auto it = c.find(m);
        return it == c.end() ? Complex{0.0, 0.0} : it->second;
    }
};

// Laurent pieces of the exterior single layer of one density:
//   2 S[phi](Phi(w)) = alpha*Lphi(w) + alpha*conj(Lphibar(w))
//                      - beta*Phi(w)*conj(Cphi(w)) + beta*conj(Czbar(w)).
struct SingleLayerSeries {
    LaurentSeries l_phi, l_phibar, c_phi, c_zbar;
    double alpha = 0.0, beta = 0.0;
    ExteriorMap map;

    Complex eval_two_s(Complex w) const;
    // coarse bound on the dropped tail at |w| = r
    double truncation_estimate(double r) const;
};

// Dense real-linear boundary matching: all Fourier modes of
// 2mu(H + S[phi]) - (rigid trace) vanish, plus the L^2_Psi rotation
// constraint Im(gamma conj(c1) + sum a_m conj(c_{-m}) gamma^{-m}) = 0.
DensityCoefficients solve_first_order(const ExteriorMap& map, const LameMaterial& mat,
                                      const Loading& loading, const SolveOptions& opts = {});

// The three canonical loadings share one assembled and factorized system
// (the matrix side does not depend on the loading).
std::array<DensityCoefficients, 3> solve_canonical(const ExteriorMap& map,
                                                   const LameMaterial& mat,
                                                   const SolveOptions& opts = {});

// Hand back-substitution route: the per-Faber-order matching relations
// (top order determines c_{-N} from conj(c1), and so on down), the
// Re(c1) = gamma Re(A)/(beta mu) anchor, and the rotation constraint.
DensityCoefficients solve_faber_matching(const ExteriorMap& map, const LameMaterial& mat,
                                         const Loading& loading, const SolveOptions& opts = {});

SingleLayerSeries single_layer_series(const DensityCoefficients& dc, const ExteriorMap& map,
                                      const LameMaterial& mat, const SolveOptions& opts = {});

// S[phi] at z = Phi(w); throws ValidationError for |w| <= gamma.
Complex single_layer_exterior(const DensityCoefficients& dc, const ExteriorMap& map,
                              const LameMaterial& mat, Complex w, const SolveOptions& opts = {});

// Background field H(z) of the loading.
Complex background_field(const ExteriorMap& map, const LameMaterial& mat,
                         const Loading& loading, Complex z);

// u = H + S[phi] at z = Phi(w).
Complex total_field(const DensityCoefficients& dc, const ExteriorMap& map,
                    const LameMaterial& mat, const Loading& loading, Complex w,
                    const SolveOptions& opts = {});

// max_theta |2mu(H + S) - 2mu(rigid)| / max_theta |2mu H| over equispaced samples
double boundary_residual(const DensityCoefficients& dc, const ExteriorMap& map,
                         const LameMaterial& mat, const Loading& loading,
                         int n_samples = 256, const SolveOptions& opts = {});

} // namespace rigidemt
