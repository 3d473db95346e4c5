#pragma once

#include <complex>
#include <vector>

namespace rigidemt {

using Complex = std::complex<double>;

// Finite window of a Laurent series in w: coeff(k) multiplies w^k for
// k in [lo, hi]. Arithmetic silently drops exponents below -truncation
// (and above +truncation) and records that clipping happened.
class LaurentSeries {
public:
    LaurentSeries() = default;
    LaurentSeries(int lo, std::vector<Complex> coeffs, int truncation);

    static LaurentSeries zero(int truncation);
    static LaurentSeries constant(Complex value, int truncation);
    static LaurentSeries monomial(int exponent, Complex value, int truncation);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    int truncation() const { return trunc_; }
    bool empty() const { return c_.empty(); }
    bool clipped() const { return clipped_; }

    Complex coeff(int k) const;
    void set_coeff(int k, Complex value);

    LaurentSeries& operator+=(const LaurentSeries& rhs);
    LaurentSeries& operator-=(const LaurentSeries& rhs);
    LaurentSeries& operator*=(Complex scalar);

    friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
    friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
    friend LaurentSeries operator*(LaurentSeries a, Complex s) { return a *= s; }
    friend LaurentSeries operator*(Complex s, LaurentSeries a) { return a *= s; }

    // d/dw
    LaurentSeries derivative() const;

    Complex eval(Complex w) const;
    double max_abs() const;

    // drop negligible outer coefficients (relative to max_abs)
    void compress(double rel_eps = 0.0);

private:
    void mark_clipped() { clipped_ = true; }
    friend LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b);

    int lo_ = 0;
    int trunc_ = 0;
    std::vector<Complex> c_;
    bool clipped_ = false;
};

// Cauchy product, window clipped to [-truncation, +truncation].
LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b);

// Inverse of a series whose highest exponent is 0 with coefficient ~1
// (the shape of Phi'). Exact coefficient recurrence down to -truncation.
LaurentSeries reciprocal(const LaurentSeries& s);

// Fourier coefficients of a function on the boundary circle |w| = gamma:
// f(theta) = sum_{k=-K}^{K} coeff(k) e^{i k theta}.
class FourierTrace {
public:
    FourierTrace() = default;
    explicit FourierTrace(int max_mode);

    // trace of s(gamma e^{i theta})
    static FourierTrace of_series(const LaurentSeries& s, double gamma, int max_mode);
    // trace of conj(s(gamma e^{i theta}))
    static FourierTrace of_conj_series(const LaurentSeries& s, double gamma, int max_mode);

    int max_mode() const { return K_; }
    Complex coeff(int k) const;
    void add(int k, Complex v);

    FourierTrace conj() const;
    FourierTrace& operator+=(const FourierTrace& rhs);
    FourierTrace& operator-=(const FourierTrace& rhs);
    FourierTrace& operator*=(Complex s);
    friend FourierTrace operator+(FourierTrace a, const FourierTrace& b) { return a += b; }
    friend FourierTrace operator-(FourierTrace a, const FourierTrace& b) { return a -= b; }
    friend FourierTrace operator*(FourierTrace a, Complex s) { return a *= s; }
    friend FourierTrace operator*(Complex s, FourierTrace a) { return a *= s; }

    // pointwise product, convolution clipped to [-K, K]
    friend FourierTrace product(const FourierTrace& a, const FourierTrace& b);

    Complex eval(double theta) const;
    double max_abs_coeff() const;

private:
    int K_ = 0;
    std::vector<Complex> c_; // index k + K_
};

} // namespace rigidemt
