#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rigidemt/laurent.hpp"

namespace rigidemt {

// Exterior conformal map Phi(w) = w + a0 + a1/w + a2/w^2 + ... from
// {|w| > gamma} onto the exterior of the inclusion, derivative 1 at infinity.
struct ExteriorMap {
    double gamma = 1.0;
    std::vector<Complex> a; // a[k] holds a_k, starting at a_0

    // degree of the polynomial tail (index of the last non-negligible a_m, m >= 1)
    int degree() const;

    Complex a_coeff(int m) const {
        return (m >= 0 && m < static_cast<int>(a.size())) ? a[static_cast<size_t>(m)]
                                                          : Complex{0.0, 0.0};
    }

    Complex map(Complex w) const;        // Phi(w)
    Complex map_derivative(Complex w) const; // Phi'(w)

    Complex boundary_point(double theta) const; // Phi(gamma e^{i theta})

    // scale factor h(theta) with d sigma = h d theta, i.e. gamma |Phi'(gamma e^{i theta})|
    double scale_factor(double theta) const;

    // |D| = pi (gamma^2 - sum_m m |a_m|^2 gamma^{-2m}); throws on nonpositive area
    double area() const;

    LaurentSeries series(int truncation) const;            // Phi as a Laurent window
    LaurentSeries derivative_series(int truncation) const; // Phi'

    // Invert z = Phi(w) by Newton from w ~ z - a0; nullopt when the iteration
    // leaves the exterior or fails to converge (interior / near-boundary points).
    std::optional<Complex> invert(Complex z) const;
};

// 1 / Phi'(w) as a Laurent window (Phi' has unit leading coefficient).
LaurentSeries reciprocal_derivative(const ExteriorMap& map, int truncation);

struct MapReport {
    bool sufficient_condition = false; // sum m |a_m| gamma^{-(m+1)} <= 1
    double condition_sum = 0.0;
    bool boundary_simple = true;       // sampled boundary free of self-intersections
    std::optional<std::pair<double, double>> intersection; // (theta_i, theta_j) of first hit
    bool accepted = false;
    std::string message;
};

// Univalence sanity check: the sufficient coefficient condition, then a
// sampled self-intersection scan as fallback.
MapReport validate(const ExteriorMap& map, int samples = 8192);

// Shape transforms used by the covariance checks.
ExteriorMap translated(const ExteriorMap& map, Complex shift);
ExteriorMap rotated(const ExteriorMap& map, double phi); // D -> e^{i phi} D
ExteriorMap scaled(const ExteriorMap& map, double t);    // D -> t D, t > 0

} // namespace rigidemt
