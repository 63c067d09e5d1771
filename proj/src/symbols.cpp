#include "whh/symbols.hpp"

#include <cmath>
#include <sstream>

#include "whh/errors.hpp"
#include "whh/roots.hpp"

namespace whh {

RationalFn::RationalFn(Polynomial num, Polynomial den)
{
    if (den.is_zero())
        throw std::domain_error("RationalFn: zero denominator");
    if (num.is_zero()) {
        num_ = Polynomial();
        den_ = Polynomial(1);
        return;
    }
    Polynomial g = Polynomial::gcd(num, den);
    if (g.degree() > 0) {
        num = Polynomial::divmod(num, g).first;
        den = Polynomial::divmod(den, g).first;
    }
    ComplexRational lead = den.leading();
    ComplexRational inv = ComplexRational(1) / lead;
    num_ = num * inv;
    den_ = den * inv;
}

ComplexRational RationalFn::at_infinity() const
{
    if (num_.degree() > den_.degree())
        throw Error(ErrorCode::NotInG, "rational part unbounded at infinity: " + to_string());
    if (num_.degree() < den_.degree())
        return 0;
    return num_.leading() / den_.leading();
}

ComplexRational RationalFn::operator()(const ComplexRational& t) const
{
    ComplexRational d = den_(t);
    if (d.is_zero())
        throw Error(ErrorCode::PoleOnAxis, "evaluation at a pole", whh::to_string(t));
    return num_(t) / d;
}

std::complex<long double> RationalFn::operator()(std::complex<long double> t) const
{
    return num_(t) / den_(t);
}

RationalFn RationalFn::reflected() const { return {num_.reflected(), den_.reflected()}; }

RationalFn RationalFn::conjugated() const { return {num_.conjugated(), den_.conjugated()}; }

RationalFn RationalFn::inverse() const
{
    if (num_.is_zero())
        throw std::domain_error("RationalFn: inverse of zero");
    return {den_, num_};
}

RationalFn RationalFn::pow(int e) const
{
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    RationalFn base = e < 0 ? inverse() : *this;
    return {base.num_.pow(n), base.den_.pow(n)};
}

RationalFn operator*(const RationalFn& a, const RationalFn& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }

RationalFn operator+(const RationalFn& a, const RationalFn& b)
{
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

RationalFn operator-(const RationalFn& a, const RationalFn& b)
{
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

std::string RationalFn::to_string() const
{
    if (den_.degree() == 0)
        return "(" + num_.to_string() + ")";
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

SymbolExpr::SymbolExpr(Rational delta, RationalFn rat) : delta_(std::move(delta)), rat_(std::move(rat))
{
    if (rat_.num().degree() > rat_.den().degree())
        throw Error(ErrorCode::NotInG, "deg num > deg den in " + rat_.to_string());
    if (auto w = real_root_witness(rat_.den())) {
        std::ostringstream os;
        os.precision(12);
        os << "t=" << *w;
        throw Error(ErrorCode::PoleOnAxis, "real pole in " + rat_.to_string(), os.str());
    }
}

SymbolExpr SymbolExpr::trusted(Rational delta, RationalFn rat)
{
    SymbolExpr s;
    s.delta_ = std::move(delta);
    s.rat_ = std::move(rat);
    return s;
}

SymbolExpr SymbolExpr::cayley(int power)
{
    RationalFn c(Polynomial::linear(ComplexRational::i()), Polynomial::linear(-ComplexRational::i()));
    return trusted(0, c.pow(power));
}

std::string SymbolExpr::to_string() const
{
    if (delta_ == 0)
        return rat_.to_string();
    return "exp(i*" + whh::to_string(delta_) + "*t)*" + rat_.to_string();
}

std::complex<double> evaluate(const SymbolExpr& s, double t)
{
    std::complex<long double> tt(t, 0);
    std::complex<long double> d = s.rat().den()(tt);
    if (std::abs(d) == 0)
        throw Error(ErrorCode::PoleOnAxis, "evaluation at a pole", std::to_string(t));
    long double phase = to_long_double(s.delta()) * t;
    std::complex<long double> v = s.rat().num()(tt) / d * std::polar(1.0L, phase);
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

ComplexRational evaluate_exact(const SymbolExpr& s, const Rational& t)
{
    if (s.delta() != 0)
        throw std::domain_error("evaluate_exact: symbol has an exponential factor");
    return s.rat()(ComplexRational(t));
}

SymbolExpr reflect(const SymbolExpr& s) { return SymbolExpr::trusted(-s.delta(), s.rat().reflected()); }

SymbolExpr conjugate(const SymbolExpr& s) { return SymbolExpr::trusted(-s.delta(), s.rat().conjugated()); }

SymbolExpr multiply(const SymbolExpr& a, const SymbolExpr& b)
{
    return SymbolExpr::trusted(a.delta() + b.delta(), a.rat() * b.rat());
}

InvertibilityReport is_invertible_in_G(const SymbolExpr& s)
{
    const auto& r = s.rat();
    if (r.num().is_zero())
        return {false, "identically zero"};
    if (r.num().degree() < r.den().degree())
        return {false, "infinity"};
    if (auto w = real_root_witness(r.num())) {
        std::ostringstream os;
        os.precision(12);
        os << "t=" << *w;
        return {false, os.str()};
    }
    return {true, {}};
}

void require_invertible(const SymbolExpr& s)
{
    auto rep = is_invertible_in_G(s);
    if (!rep.invertible)
        throw Error(ErrorCode::NotInvertibleInG, s.to_string() + " vanishes at " + rep.witness, rep.witness);
}

SymbolExpr invert(const SymbolExpr& s)
{
    require_invertible(s);
    return SymbolExpr::trusted(-s.delta(), s.rat().inverse());
}

Rational nu_index(const SymbolExpr& s)
{
    require_invertible(s);
    return s.delta();
}

int n_index(const SymbolExpr& s)
{
    require_invertible(s);
    int zeros_up = count_half_planes(s.rat().num()).first;
    int poles_up = count_half_planes(s.rat().den()).first;
    return zeros_up - poles_up;
}

bool is_matching_pair(const SymbolExpr& a, const SymbolExpr& b)
{
    // Exponential factors cancel in a*a~ and b*b~; compare the rational parts
    // by cross-multiplication.
    RationalFn lhs = a.rat() * a.rat().reflected();
    RationalFn rhs = b.rat() * b.rat().reflected();
    return lhs.num() * rhs.den() == rhs.num() * lhs.den();
}

bool is_matching_function(const SymbolExpr& g)
{
    RationalFn prod = g.rat() * g.rat().reflected();
    return prod.num() == prod.den();
}

MatchingPair::MatchingPair(SymbolExpr a_, SymbolExpr b_) : a(std::move(a_)), b(std::move(b_))
{
    if (!is_matching_pair(a, b))
        throw Error(ErrorCode::NotMatching, "a*a~ != b*b~ for a=" + a.to_string() + ", b=" + b.to_string());
}

SubordinatedPair subordinated_pair(const MatchingPair& p)
{
    SymbolExpr a_ref_inv = invert(reflect(p.a));
    SubordinatedPair out{multiply(reflect(p.b), a_ref_inv), multiply(p.b, a_ref_inv)};
    if (!is_matching_function(out.c) || !is_matching_function(out.d))
        throw std::logic_error("subordinated pair is not a pair of matching functions");
    return out;
}

namespace {

nlohmann::json poly_json(const Polynomial& p)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : p.coefficients())
        out.push_back({to_string(c.re()), to_string(c.im())});
    return out;
}

Rational rational_field(const nlohmann::json& j, const std::string& where)
{
    try {
        if (j.is_string())
            return parse_rational(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(j.get<long long>());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Parse, where + ": " + e.what());
    }
    throw Error(ErrorCode::Parse, where + ": expected a rational string such as \"3/4\"");
}

Polynomial poly_field(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_array() || j.empty())
        throw Error(ErrorCode::Parse, where + ": expected a non-empty coefficient array");
    std::vector<ComplexRational> coeffs;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string at = where + "[" + std::to_string(k) + "]";
        const auto& c = j[k];
        if (!c.is_array() || c.size() != 2)
            throw Error(ErrorCode::Parse, at + ": expected [re, im]");
        coeffs.emplace_back(rational_field(c[0], at), rational_field(c[1], at));
    }
    return Polynomial(std::move(coeffs));
}

} // namespace

nlohmann::json to_json(const SymbolExpr& s)
{
    return {{"delta", to_string(s.delta())}, {"num", poly_json(s.rat().num())}, {"den", poly_json(s.rat().den())}};
}

SymbolExpr symbol_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::Parse, "symbol: expected an object");
    for (const char* key : {"num", "den"})
        if (!j.contains(key))
            throw Error(ErrorCode::Parse, std::string("symbol: missing \"") + key + "\"");
    Rational delta = j.contains("delta") ? rational_field(j["delta"], "delta") : Rational(0);
    Polynomial num = poly_field(j["num"], "num");
    Polynomial den = poly_field(j["den"], "den");
    if (den.is_zero())
        throw Error(ErrorCode::Parse, "den: zero polynomial");
    return SymbolExpr(std::move(delta), RationalFn(std::move(num), std::move(den)));
}

} // namespace whh
