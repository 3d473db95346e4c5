#include "rigidemt/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rigidemt/errors.hpp"

namespace rigidemt {

LaurentSeries::LaurentSeries(int lo, std::vector<Complex> coeffs, int truncation)
    : lo_(lo), trunc_(truncation), c_(std::move(coeffs)) {
    if (lo_ < -trunc_) {
        const int drop = -trunc_ - lo_;
        if (drop >= static_cast<int>(c_.size())) {
            c_.clear();
        } else {
            c_.erase(c_.begin(), c_.begin() + drop);
        }
        lo_ = -trunc_;
        clipped_ = true;
    }
    if (hi() > trunc_) {
        c_.resize(std::max(0, trunc_ - lo_ + 1));
        clipped_ = true;
    }
}

LaurentSeries LaurentSeries::zero(int truncation) {
    return LaurentSeries(0, {}, truncation);
}

LaurentSeries LaurentSeries::constant(Complex value, int truncation) {
    return LaurentSeries(0, {value}, truncation);
}

LaurentSeries LaurentSeries::monomial(int exponent, Complex value, int truncation) {
    return LaurentSeries(exponent, {value}, truncation);
}

Complex LaurentSeries::coeff(int k) const {
    if (k < lo_ || k > hi()) return {0.0, 0.0};
    return c_[static_cast<size_t>(k - lo_)];
}

void LaurentSeries::set_coeff(int k, Complex value) {
    if (k < -trunc_ || k > trunc_) {
        clipped_ = true;
        return;
    }
    if (c_.empty()) {
        lo_ = k;
        c_.assign(1, value);
        return;
    }
    if (k < lo_) {
        c_.insert(c_.begin(), static_cast<size_t>(lo_ - k), Complex{});
        lo_ = k;
    } else if (k > hi()) {
        c_.resize(static_cast<size_t>(k - lo_ + 1), Complex{});
    }
    c_[static_cast<size_t>(k - lo_)] = value;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& rhs) {
    trunc_ = std::max(trunc_, rhs.trunc_);
    clipped_ = clipped_ || rhs.clipped_;
    for (int k = rhs.lo(); k <= rhs.hi(); ++k) {
        const Complex v = rhs.coeff(k);
        if (v != Complex{}) set_coeff(k, coeff(k) + v);
    }
    return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& rhs) {
    trunc_ = std::max(trunc_, rhs.trunc_);
    clipped_ = clipped_ || rhs.clipped_;
    for (int k = rhs.lo(); k <= rhs.hi(); ++k) {
        const Complex v = rhs.coeff(k);
        if (v != Complex{}) set_coeff(k, coeff(k) - v);
    }
    return *this;
}

LaurentSeries& LaurentSeries::operator*=(Complex scalar) {
    for (auto& v : c_) v *= scalar;
    return *this;
}

LaurentSeries LaurentSeries::derivative() const {
    LaurentSeries out = zero(trunc_);
    out.clipped_ = clipped_;
    for (int k = lo_; k <= hi(); ++k) {
        if (k == 0) continue;
        const Complex v = coeff(k);
        if (v != Complex{}) out.set_coeff(k - 1, static_cast<double>(k) * v);
    }
    return out;
}

Complex LaurentSeries::eval(Complex w) const {
    // Horner over the contiguous window: s(w) = w^lo * sum c_j (w)^j
    Complex acc{0.0, 0.0};
    for (size_t j = c_.size(); j-- > 0;) {
        acc = acc * w + c_[j];
    }
    return acc * std::pow(w, lo_);
}

double LaurentSeries::max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

void LaurentSeries::compress(double rel_eps) {
    const double cut = rel_eps * max_abs();
    size_t lead = 0;
    while (lead < c_.size() && std::abs(c_[lead]) <= cut) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        lo_ = 0;
        return;
    }
    size_t tail = c_.size();
    while (tail > lead && std::abs(c_[tail - 1]) <= cut) --tail;
    c_ = std::vector<Complex>(c_.begin() + static_cast<long>(lead),
                              c_.begin() + static_cast<long>(tail));
    lo_ += static_cast<int>(lead);
}

LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) {
    const int trunc = std::max(a.truncation(), b.truncation());
    if (a.empty() || b.empty()) return LaurentSeries::zero(trunc);
    const int lo = std::max(a.lo() + b.lo(), -trunc);
    const int hi = std::min(a.hi() + b.hi(), trunc);
    LaurentSeries out = LaurentSeries::zero(trunc);
    out.clipped_ = a.clipped() || b.clipped() ||
                   (a.lo() + b.lo() < -trunc) || (a.hi() + b.hi() > trunc);
    if (lo > hi) return out;
    std::vector<Complex> acc(static_cast<size_t>(hi - lo + 1), Complex{});
    for (int i = a.lo(); i <= a.hi(); ++i) {
        const Complex ai = a.coeff(i);
        if (ai == Complex{}) continue;
        const int jlo = std::max(b.lo(), lo - i);
        const int jhi = std::min(b.hi(), hi - i);
        for (int j = jlo; j <= jhi; ++j) {
            acc[static_cast<size_t>(i + j - lo)] += ai * b.coeff(j);
        }
    }
    out.lo_ = lo;
    out.c_ = std::move(acc);
    return out;
}

LaurentSeries reciprocal(const LaurentSeries& s) {
    const int trunc = s.truncation();
    const Complex c0 = s.coeff(0);
    if (s.hi() != 0 || c0 == Complex{}) {
        throw ConsistencyError("reciprocal: series must have highest exponent 0 with nonzero coefficient");
    }
    // r * s = 1; march exponents downward from 0.
    LaurentSeries r = LaurentSeries::zero(trunc);
    r.set_coeff(0, 1.0 / c0);
    for (int k = -1; k >= -trunc; --k) {
        Complex acc{0.0, 0.0};
        for (int j = std::max(s.lo(), k); j <= -1; ++j) {
            acc += s.coeff(j) * r.coeff(k - j);
        }
        r.set_coeff(k, -acc / c0);
    }
    return r;
}

FourierTrace::FourierTrace(int max_mode)
    : K_(max_mode), c_(static_cast<size_t>(2 * max_mode + 1), Complex{}) {}

FourierTrace FourierTrace::of_series(const LaurentSeries& s, double gamma, int max_mode) {
    FourierTrace t(max_mode);
    const int klo = std::max(s.lo(), -max_mode);
    const int khi = std::min(s.hi(), max_mode);
    double gk = std::pow(gamma, klo);
    for (int k = klo; k <= khi; ++k, gk *= gamma) {
        t.add(k, s.coeff(k) * gk);
    }
    return t;
}

FourierTrace FourierTrace::of_conj_series(const LaurentSeries& s, double gamma, int max_mode) {
    FourierTrace t(max_mode);
    const int klo = std::max(s.lo(), -max_mode);
    const int khi = std::min(s.hi(), max_mode);
    double gk = std::pow(gamma, klo);
    for (int k = klo; k <= khi; ++k, gk *= gamma) {
        t.add(-k, std::conj(s.coeff(k)) * gk);
    }
    return t;
}

Complex FourierTrace::coeff(int k) const {
    if (std::abs(k) > K_) return {0.0, 0.0};
    return c_[static_cast<size_t>(k + K_)];
}

void FourierTrace::add(int k, Complex v) {
    if (std::abs(k) > K_) return;
    c_[static_cast<size_t>(k + K_)] += v;
}

FourierTrace FourierTrace::conj() const {
    FourierTrace t(K_);
    for (int k = -K_; k <= K_; ++k) t.add(k, std::conj(coeff(-k)));
    return t;
}

FourierTrace& FourierTrace::operator+=(const FourierTrace& rhs) {
    if (rhs.K_ > K_) {
        FourierTrace grown(rhs.K_);
        for (int k = -K_; k <= K_; ++k) grown.add(k, coeff(k));
        *this = grown;
    }
    for (int k = -rhs.K_; k <= rhs.K_; ++k) add(k, rhs.coeff(k));
    return *this;
}

FourierTrace& FourierTrace::operator-=(const FourierTrace& rhs) {
    return *this += (rhs * Complex{-1.0, 0.0});
}

FourierTrace& FourierTrace::operator*=(Complex s) {
    for (auto& v : c_) v *= s;
    return *this;
}

FourierTrace product(const FourierTrace& a, const FourierTrace& b) {
    const int K = std::max(a.K_, b.K_);
    FourierTrace t(K);
    for (int i = -a.K_; i <= a.K_; ++i) {
        const Complex ai = a.coeff(i);
        if (ai == Complex{}) continue;
        for (int j = std::max(-b.K_, -K - i); j <= std::min(b.K_, K - i); ++j) {
            t.add(i + j, ai * b.coeff(j));
        }
    }
    return t;
}

Complex FourierTrace::eval(double theta) const {
    Complex acc{0.0, 0.0};
    for (int k = -K_; k <= K_; ++k) {
        const Complex v = coeff(k);
        if (v != Complex{}) acc += v * std::polar(1.0, k * theta);
    }
    return acc;
}

double FourierTrace::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

} // namespace rigidemt
