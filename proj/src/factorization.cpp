#include "whh/factorization.hpp"

#include <stdexcept>

#include "whh/errors.hpp"
#include "whh/roots.hpp"

namespace whh {

namespace {

void check_purity(const SymbolExpr& s, bool want_upper, const char* label)
{
    for (const Polynomial* p : {&s.rat().num(), &s.rat().den()}) {
        auto [up, low] = count_half_planes(*p);
        if ((want_upper && low != 0) || (!want_upper && up != 0))
            throw std::logic_error(std::string("factorization: ") + label + " has roots in the wrong half-plane");
    }
}

} // namespace

SymbolExpr Factorization::reassemble() const
{
    return g_minus * SymbolExpr::exponential(nu) * SymbolExpr::cayley(n) * g_plus;
}

Factorization wiener_hopf_factorize(const SymbolExpr& g)
{
    require_invertible(g);
    HalfPlaneSplit num = split_half_planes(g.rat().num());
    HalfPlaneSplit den = split_half_planes(g.rat().den());

    Factorization f;
    f.nu = g.delta();
    f.n = num.upper_count - den.upper_count;

    // Upper part has degree n; balance it with (t - i)^n so g_minus is bounded
    // and nonzero at infinity.
    const ComplexRational i = ComplexRational::i();
    RationalFn t_minus_i(Polynomial::linear(i));
    RationalFn minus_raw = RationalFn(num.upper, den.upper) * t_minus_i.pow(-f.n);
    ComplexRational at_zero = minus_raw(ComplexRational(0));
    f.g_minus = SymbolExpr(RationalFn(minus_raw.num() * (ComplexRational(1) / at_zero), minus_raw.den()));

    SymbolExpr rest = SymbolExpr(g.rat()) * invert(f.g_minus * SymbolExpr::cayley(f.n));
    f.g_plus = rest;

    if (f.reassemble() != g)
        throw std::logic_error("factorization: reassembly mismatch");
    check_purity(f.g_plus, false, "g_plus");
    check_purity(f.g_minus, true, "g_minus");
    return f;
}

int sigma_from_value(const SymbolExpr& g, int n)
{
    ComplexRational v = g.rat()(ComplexRational(0));
    if (n % 2 != 0)
        v = -v;
    if (v == ComplexRational(1))
        return 1;
    if (v == ComplexRational(-1))
        return -1;
    throw std::logic_error("sigma is not +-1; symbol is not a matching function");
}

Factorization matching_factorize(const SymbolExpr& g)
{
    if (!is_matching_function(g))
        throw Error(ErrorCode::NotMatching, "g*g~ != 1 for g=" + g.to_string());
    Factorization f = wiener_hopf_factorize(g);
    int sigma = sigma_from_value(g, f.n);
    // Second route: g_minus * g_plus~ must be the constant sigma.
    SymbolExpr ratio = f.g_minus * reflect(f.g_plus);
    if (ratio != SymbolExpr::constant(sigma))
        throw std::logic_error("sigma mismatch between (-1)^n g(0) and g_minus * g_plus~");
    f.sigma = sigma;
    return f;
}

SplitSymbols split_symbols(const Factorization& f)
{
    if (!f.sigma)
        throw std::invalid_argument("split_symbols: factorization has no sigma");
    SymbolExpr outer = SymbolExpr::constant(*f.sigma) * invert(reflect(f.g_plus));
    return {outer * SymbolExpr::cayley(f.n) * f.g_plus, outer * SymbolExpr::exponential(f.nu) * f.g_plus};
}

nlohmann::json to_json(const Factorization& f)
{
    return {{"g_minus", to_json(f.g_minus)},
            {"g_plus", to_json(f.g_plus)},
            {"nu", to_string(f.nu)},
            {"n", f.n},
            {"sigma", f.sigma ? nlohmann::json(*f.sigma) : nlohmann::json(nullptr)}};
}

} // namespace whh
