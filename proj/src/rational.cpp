#include "whh/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "whh/errors.hpp"

namespace whh {

const char* error_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NotInvertibleInG: return "NotInvertibleInG";
    case ErrorCode::NotInG: return "NotInG";
    case ErrorCode::RootOnAxis: return "RootOnAxis";
    case ErrorCode::PoleOnAxis: return "PoleOnAxis";
    case ErrorCode::NotMatching: return "NotMatching";
    case ErrorCode::NotRightInvertible: return "NotRightInvertible";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::CaseUnsupported: return "CaseUnsupported";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::FactorNotExact: return "FactorNotExact";
    case ErrorCode::Parse: return "ParseError";
    }
    return "Unknown";
}

Rational parse_rational(const std::string& text)
{
    auto fail = [&] { return Error(ErrorCode::Parse, "malformed rational '" + text + "'"); };
    if (text.empty())
        throw fail();
    try {
        auto slash = text.find('/');
        if (slash != std::string::npos) {
            Integer num(text.substr(0, slash));
            Integer den(text.substr(slash + 1));
            if (den == 0)
                throw fail();
            return Rational(num, den);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos)
            return Rational(Integer(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t scale = text.size() - dot - 1;
        if (digits == "-" || digits == "+" || digits.empty())
            throw fail();
        Integer den = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(scale));
        return Rational(Integer(digits), den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw fail();
    }
}

std::string to_string(const Rational& q)
{
    auto num = boost::multiprecision::numerator(q);
    auto den = boost::multiprecision::denominator(q);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

long double to_long_double(const Rational& q)
{
    return q.convert_to<long double>();
}

Rational rationalize(long double x, long long max_den)
{
    if (!std::isfinite(x))
        throw std::domain_error("rationalize: non-finite value");
    bool neg = x < 0;
    long double v = std::fabs(x);
    // Convergents h/k of the continued fraction of v.
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    long double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        long double a_ld = std::floor(frac);
        if (a_ld > 1e18L)
            break;
        Integer a = static_cast<long long>(a_ld);
        Integer h2 = a * h1 + h0;
        Integer k2 = a * k1 + k0;
        if (k2 > max_den)
            break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        long double rem = frac - a_ld;
        if (rem < 1e-30L)
            break;
        frac = 1.0L / rem;
    }
    if (k1 == 0)
        return 0;
    Rational r(h1, k1);
    return neg ? Rational(-r) : r;
}

ComplexRational& ComplexRational::operator/=(const ComplexRational& o)
{
    Rational n = o.norm();
    if (n == 0)
        throw std::domain_error("ComplexRational: division by zero");
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    im_ = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    return *this;
}

ComplexRational ComplexRational::pow(int e) const
{
    ComplexRational base = e < 0 ? ComplexRational(1) / *this : *this;
    unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
    ComplexRational out(1);
    while (n) {
        if (n & 1u)
            out *= base;
        base *= base;
        n >>= 1u;
    }
    return out;
}

std::string to_string(const ComplexRational& z)
{
    if (z.im() == 0)
        return to_string(z.re());
    if (z.re() == 0)
        return to_string(z.im()) + "i";
    std::string im = to_string(z.im());
    return "(" + to_string(z.re()) + (im[0] == '-' ? "" : "+") + im + "i)";
}

} // namespace whh
