#pragma once

// Shared generators and independent numeric oracles for the test suites.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "whh/symbols.hpp"

namespace whh::testing {

inline ComplexRational gq(int re_num, int re_den, int im_num, int im_den)
{
    return {Rational(re_num, re_den), Rational(im_num, im_den)};
}

inline ComplexRational gi(int re, int im) { return {Rational(re), Rational(im)}; }

/// (t - z)
inline Polynomial lin(const ComplexRational& z) { return Polynomial::linear(z); }

inline SymbolExpr rat_symbol(const Polynomial& num, const Polynomial& den, Rational delta = 0)
{
    return SymbolExpr(std::move(delta), RationalFn(num, den));
}

/// Random Gaussian rational with |Im| in [1/2, 4] (either sign), |Re| <= 3 and
/// small denominators.
inline ComplexRational random_offaxis(std::mt19937& rng)
{
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> re(-6, 6);
    std::uniform_int_distribution<int> im(1, 8);
    std::bernoulli_distribution sgn(0.5);
    Rational imag(im(rng), 2);
    return {Rational(re(rng), 2 * den(rng)), sgn(rng) ? imag : Rational(-imag)};
}

/// Random invertible rational symbol of the given degree (deg num = deg den),
/// roots off the axis, nonzero Gaussian-rational scale.
inline SymbolExpr random_symbol(std::mt19937& rng, int degree, Rational delta = 0)
{
    Polynomial num(1), den(1);
    for (int k = 0; k < degree; ++k) {
        num *= lin(random_offaxis(rng));
        den *= lin(random_offaxis(rng));
    }
    std::uniform_int_distribution<int> sc(1, 3);
    return rat_symbol(num * ComplexRational(Rational(sc(rng)), Rational(sc(rng) - 2)), den, delta);
}

/// Random matching function: product of factors (t - z)/(t + z) and a sign.
inline SymbolExpr random_matching_function(std::mt19937& rng, int factors, Rational delta = 0)
{
    Polynomial num(1), den(1);
    for (int k = 0; k < factors; ++k) {
        ComplexRational z = random_offaxis(rng);
        num *= lin(z);
        den *= lin(-z);
    }
    std::bernoulli_distribution sgn(0.5);
    return rat_symbol(num * ComplexRational(sgn(rng) ? 1 : -1), den, delta);
}

/// Matching function e^{i nu t} s prod (t - z)/(t + z) with n(g) = n and
/// `extra` additional cancelling pairs.
inline SymbolExpr matching_with(std::mt19937& rng, Rational nu, int n, int extra, int s)
{
    Polynomial num(1), den(1);
    auto push = [&](bool upper) {
        ComplexRational z = random_offaxis(rng);
        if ((z.im() > 0) != upper)
            z = -z;
        num *= lin(z);
        den *= lin(-z);
    };
    for (int k = 0; k < std::abs(n); ++k)
        push(n > 0);
    for (int k = 0; k < extra; ++k) {
        push(true);
        push(false);
    }
    return rat_symbol(num * ComplexRational(s), den, nu);
}

/// Random rational symbol with n(g) = n: |n| unbalanced factors plus `extra`
/// balanced ones.
inline SymbolExpr symbol_with_n(std::mt19937& rng, int n, int extra, Rational delta = 0)
{
    Polynomial num(1), den(1);
    auto oriented = [&](bool upper) {
        ComplexRational z = random_offaxis(rng);
        if ((z.im() > 0) != upper)
            z = -z;
        return z;
    };
    for (int k = 0; k < std::abs(n); ++k) {
        num *= lin(oriented(n > 0));
        den *= lin(oriented(n < 0));
    }
    for (int k = 0; k < extra; ++k) {
        ComplexRational z = random_offaxis(rng);
        num *= lin(z);
        den *= lin(oriented(z.im() > 0));
    }
    return rat_symbol(num, den, delta);
}

/// Roots whose Cayley images stay well inside the disc (|C(z)| <= 0.45), so
/// ψ-coordinates of kernel elements decay fast enough for N = 48..64 sections.
inline ComplexRational nice_point(int idx, bool upper)
{
    static const ComplexRational pts[] = {gi(0, 2), gq(0, 1, 1, 2), gi(1, 1), gi(-1, 2), gq(1, 2, 3, 2), gq(-1, 2, 1, 1)};
    ComplexRational z = pts[idx % 6];
    return upper ? z : z.conj();
}

struct SuitePair {
    SymbolExpr a;
    SymbolExpr b;
    int nu_n;  // n(c)
    int nb;    // n(b)
};

/// Case I pairs a = b u with n(u) in [-2, 2] and n(b) in [-2, 1]: kappa1 = -n(u),
/// kappa2 = -n(u) - 2 n(b). Covers both parities, both signs of u(0) and the
/// reduction case kappa1 < 0 < kappa2.
inline std::vector<SuitePair> case_one_suite()
{
    std::vector<SuitePair> out;
    const int combos[][2] = {{0, 0}, {1, 0}, {-1, 0}, {2, 0}, {-2, 0}, {0, 1}, {0, -1}, {1, -1},
                             {2, -2}, {1, -2}, {-1, 1}, {2, -1}, {-2, -1}, {1, 1}};
    int idx = 0;
    for (const auto& cb : combos) {
        const int nu_n = cb[0], nb = cb[1];
        Polynomial un(1), ud(1);
        for (int k = 0; k < std::abs(nu_n); ++k) {
            ComplexRational z = nice_point(idx++, nu_n > 0);
            un *= lin(z);
            ud *= lin(-z);
        }
        if (idx % 3 == 0) {
            ComplexRational z = nice_point(idx++, true);
            un *= lin(z.conj());
            ud *= lin(-z.conj());
            un *= lin(z);
            ud *= lin(-z);
        }
        const int s = (out.size() % 2) ? -1 : 1;
        Polynomial bn(1), bd(1);
        for (int k = 0; k < std::abs(nb); ++k) {
            bn *= lin(nice_point(idx++, nb > 0));
            bd *= lin(nice_point(idx++, nb < 0));
        }
        if (nb == 0) {
            bn *= lin(nice_point(idx++, true));
            bd *= lin(nice_point(idx++, true));
        }
        SymbolExpr b = rat_symbol(bn * gi(2, (int)out.size() % 3 - 1), bd);
        SymbolExpr u = rat_symbol(un * ComplexRational(s), ud);
        out.push_back({b * u, b, nu_n, nb});
    }
    return out;
}

/// Winding number of r along the real line by phase accumulation on the
/// compactified line t = tan(theta/2). Independent of the root finder.
inline double winding_oracle(const SymbolExpr& s, int samples = 200000)
{
    using cl = std::complex<long double>;
    auto numeric = [](const Polynomial& p) {
        std::vector<cl> c;
        for (const auto& x : p.coefficients())
            c.push_back(x.to_complex());
        return c;
    };
    const std::vector<cl> num = numeric(s.rat().num());
    const std::vector<cl> den = numeric(s.rat().den());
    auto horner = [](const std::vector<cl>& c, long double t) {
        cl v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            v = v * t + *it;
        return v;
    };
    auto r = [&](long double t) { return horner(num, t) / horner(den, t); };

    double total = 0;
    cl prev = r(-1e12L);
    for (int k = 1; k <= samples; ++k) {
        long double theta = -std::numbers::pi_v<long double> + 2 * std::numbers::pi_v<long double> * k / samples;
        long double t = k == samples ? 1e12L : std::tan(theta / 2);
        cl cur = r(t);
        total += static_cast<double>(std::arg(cur / prev));
        prev = cur;
    }
    return total / (2 * std::numbers::pi);
}

} // namespace whh::testing
