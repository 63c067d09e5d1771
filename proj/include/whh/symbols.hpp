#pragma once

#include <complex>
#include <optional>
#include <string>

#include "json.hpp"
#include "whh/polynomial.hpp"
#include "whh/rational.hpp"

namespace whh {

/// num/den with den != 0, gcd(num, den) = 1 and monic den.
class RationalFn {
public:
    RationalFn() : num_(0), den_(1) {}
    RationalFn(Polynomial num, Polynomial den);
    RationalFn(const Polynomial& p) : RationalFn(p, Polynomial(1)) {}
    RationalFn(const ComplexRational& c) : RationalFn(Polynomial(c), Polynomial(1)) {}
    RationalFn(int c) : RationalFn(ComplexRational(c)) {}

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    /// Finite limit at infinity; requires deg num <= deg den.
    ComplexRational at_infinity() const;

    ComplexRational operator()(const ComplexRational& t) const;
    std::complex<long double> operator()(std::complex<long double> t) const;

    RationalFn reflected() const;
    RationalFn conjugated() const;
    RationalFn inverse() const;
    RationalFn pow(int e) const;

    friend RationalFn operator*(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) { return a * b.inverse(); }
    friend RationalFn operator+(const RationalFn& a, const RationalFn& b);
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b);
    friend bool operator==(const RationalFn& a, const RationalFn& b) = default;

    std::string to_string() const;

private:
    Polynomial num_;
    Polynomial den_;
};

/// A symbol a(t) = exp(i*delta*t) * rat(t) from the computable subclass of G:
/// one exponential frequency, a rational part bounded at infinity, no real poles.
class SymbolExpr {
public:
    SymbolExpr() : delta_(0), rat_(1) {}
    /// Throws NotInG (deg num > deg den) or PoleOnAxis (real pole).
    SymbolExpr(Rational delta, RationalFn rat);
    SymbolExpr(RationalFn rat) : SymbolExpr(0, std::move(rat)) {}

    static SymbolExpr constant(const ComplexRational& c) { return trusted(0, RationalFn(c)); }
    static SymbolExpr exponential(const Rational& delta) { return trusted(delta, RationalFn(1)); }
    /// ((t - i)/(t + i))^power
    static SymbolExpr cayley(int power = 1);

    const Rational& delta() const { return delta_; }
    const RationalFn& rat() const { return rat_; }

    friend bool operator==(const SymbolExpr& a, const SymbolExpr& b) = default;

    std::string to_string() const;

private:
    friend SymbolExpr multiply(const SymbolExpr&, const SymbolExpr&);
    friend SymbolExpr invert(const SymbolExpr&);
    friend SymbolExpr reflect(const SymbolExpr&);
    friend SymbolExpr conjugate(const SymbolExpr&);
    static SymbolExpr trusted(Rational delta, RationalFn rat);

    Rational delta_;
    RationalFn rat_;
};

/// e^{i delta t} rat(t) in floating point; throws PoleOnAxis at a real pole.
std::complex<double> evaluate(const SymbolExpr& s, double t);
/// Exact value for delta = 0 and rational t.
ComplexRational evaluate_exact(const SymbolExpr& s, const Rational& t);

SymbolExpr reflect(const SymbolExpr& s);
SymbolExpr conjugate(const SymbolExpr& s);
SymbolExpr multiply(const SymbolExpr& a, const SymbolExpr& b);
/// Throws NotInvertibleInG with a witness.
SymbolExpr invert(const SymbolExpr& s);

inline SymbolExpr operator*(const SymbolExpr& a, const SymbolExpr& b) { return multiply(a, b); }

struct InvertibilityReport {
    bool invertible = false;
    /// "t=<value>" for a real zero, "infinity" when the symbol vanishes there.
    std::string witness;
};

InvertibilityReport is_invertible_in_G(const SymbolExpr& s);
void require_invertible(const SymbolExpr& s);

/// Mean motion: the exponential frequency.
Rational nu_index(const SymbolExpr& s);
/// Winding number of the rational part along the real line, oriented so that
/// the Cayley factor has index +1.
int n_index(const SymbolExpr& s);

bool is_matching_pair(const SymbolExpr& a, const SymbolExpr& b);
/// g * g~ == 1
bool is_matching_function(const SymbolExpr& g);

struct MatchingPair {
    SymbolExpr a;
    SymbolExpr b;
    /// Throws NotMatching.
    MatchingPair(SymbolExpr a_, SymbolExpr b_);
};

struct SubordinatedPair {
    SymbolExpr c;
    SymbolExpr d;
};

/// c = b~ a~^{-1}, d = b a~^{-1}. Throws NotInvertibleInG if a is not invertible.
SubordinatedPair subordinated_pair(const MatchingPair& p);

/// {"delta": "p/q", "num": [["re", "im"], ...], "den": [...]}, coefficients
/// ascending by degree, every number an exact rational string.
nlohmann::json to_json(const SymbolExpr& s);
/// Inverse of to_json; integers are accepted in place of strings. Throws Parse.
SymbolExpr symbol_from_json(const nlohmann::json& j);

} // namespace whh
