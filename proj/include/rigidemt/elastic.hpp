#pragma once

#include <array>
#include <complex>
#include <string>

namespace rigidemt {

using Complex = std::complex<double>;

enum class KappaConvention { PlaneStrain, PlaneStress };

// Background Lame constants with the derived Kelvin constants
//   alpha = (1/mu + 1/(2mu+lambda))/2,  beta = (1/mu - 1/(2mu+lambda))/2
// and the Kolosov constant kappa. Plane strain gives kappa = (lambda+3mu)/(lambda+mu),
// which equals alpha/beta; that identity is what makes the complex single-layer
// split consistent, so plane strain is the default.
struct LameMaterial {
    double lambda = 1.0;
    double mu = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double kappa = 0.0;
    KappaConvention convention = KappaConvention::PlaneStrain;
};

LameMaterial make_material(double lambda, double mu,
                           KappaConvention convention = KappaConvention::PlaneStrain);

// First-order background loadings, parametrized by (A, B) through
//   2 mu H(z) = (kappa A - conj(A)) F_1(z) - a0 conj(A) - conj(B F_1(z)).
// Canonical tags: U1 = (1, 0), U2 = (0, 1), U3 = (0, i).
struct Loading {
    enum class Tag { U1, U2, U3, General };
    Tag tag = Tag::U1;
    Complex A{1.0, 0.0};
    Complex B{0.0, 0.0};

    static Loading u1() { return {Tag::U1, {1.0, 0.0}, {0.0, 0.0}}; }
    static Loading u2() { return {Tag::U2, {0.0, 0.0}, {1.0, 0.0}}; }
    static Loading u3() { return {Tag::U3, {0.0, 0.0}, {0.0, 1.0}}; }
    static Loading general(Complex A, Complex B) { return {Tag::General, A, B}; }
    static Loading canonical(int i); // 1, 2, 3

    std::string name() const;
};

// Rigid displacements R1 = (1,0), R2 = (0,1), R3 = (x2, -x1).
struct RigidMotions {
    static std::array<double, 2> r1(double, double) { return {1.0, 0.0}; }
    static std::array<double, 2> r2(double, double) { return {0.0, 1.0}; }
    static std::array<double, 2> r3(double x1, double x2) { return {x2, -x1}; }

    // complex forms under (v1, v2) -> v1 + i v2; R3 becomes -i z
    static Complex r1_complex(Complex) { return {1.0, 0.0}; }
    static Complex r2_complex(Complex) { return {0.0, 1.0}; }
    static Complex r3_complex(Complex z) { return Complex{0.0, -1.0} * z; }

    static Complex combination(double b1, double b2, double b3, Complex z) {
        return Complex{b1, b2} + b3 * r3_complex(z);
    }
};

} // namespace rigidemt
