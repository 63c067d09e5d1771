#pragma once

#include <complex>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace whh {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q" or a finite decimal such as "-1.25".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
long double to_long_double(const Rational& q);

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions).
Rational rationalize(long double x, long long max_den);

/// Exact Gaussian rational re + i*im. Canonical by construction: both parts
/// are reduced cpp_rational values.
class ComplexRational {
public:
    ComplexRational() = default;
    ComplexRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
    ComplexRational(int re) : re_(re), im_(0) {}

    static ComplexRational i() { return {0, 1}; }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    ComplexRational conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }

    std::complex<long double> to_complex() const {
        return {to_long_double(re_), to_long_double(im_)};
    }

    ComplexRational operator-() const { return {-re_, -im_}; }
    ComplexRational& operator+=(const ComplexRational& o) { re_ += o.re_; im_ += o.im_; return *this; }
    ComplexRational& operator-=(const ComplexRational& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    ComplexRational& operator*=(const ComplexRational& o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    /// Throws std::domain_error on division by zero.
    ComplexRational& operator/=(const ComplexRational& o);

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
    friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    ComplexRational pow(int e) const;

private:
    Rational re_{0};
    Rational im_{0};
};

std::string to_string(const ComplexRational& z);

} // namespace whh
