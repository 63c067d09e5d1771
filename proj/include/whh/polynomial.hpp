#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "whh/rational.hpp"

namespace whh {

/// Polynomial with exact Gaussian-rational coefficients, ascending degree.
/// Trailing zero coefficients are always stripped, so the zero polynomial has
/// no coefficients and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<ComplexRational> coeffs);
    Polynomial(std::initializer_list<ComplexRational> coeffs);
    Polynomial(const ComplexRational& constant);
    Polynomial(int constant) : Polynomial(ComplexRational(constant)) {}

    /// The monic linear factor (t - root).
    static Polynomial linear(const ComplexRational& root);
    static Polynomial monomial(int degree, const ComplexRational& coef = 1);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<ComplexRational>& coefficients() const { return coeffs_; }
    ComplexRational coef(int k) const;
    ComplexRational leading() const { return is_zero() ? ComplexRational(0) : coeffs_.back(); }

    ComplexRational operator()(const ComplexRational& t) const;
    std::complex<long double> operator()(std::complex<long double> t) const;

    Polynomial derivative() const;
    /// p(-t)
    Polynomial reflected() const;
    /// Coefficients conjugated; equals conj(p(t)) for real t.
    Polynomial conjugated() const;
    Polynomial monic() const;
    /// Real and imaginary coefficient parts: p = re + i*im with real-coefficient re, im.
    std::pair<Polynomial, Polynomial> real_imag_parts() const;
    bool has_real_coefficients() const;

    Polynomial pow(unsigned e) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const ComplexRational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
    friend Polynomial operator*(Polynomial a, const ComplexRational& c) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Euclidean division over Q(i); throws std::domain_error for a zero divisor.
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
    /// Monic greatest common divisor (zero if both are zero).
    static Polynomial gcd(Polynomial a, Polynomial b);

    std::string to_string() const;

private:
    void trim();
    std::vector<ComplexRational> coeffs_;
};

} // namespace whh
