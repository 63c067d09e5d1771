#pragma once

#include <optional>

#include "whh/symbols.hpp"

namespace whh {

/// g = g_minus * exp(i*nu*t) * cayley^n * g_plus with g_minus(0) = 1, all
/// zeros/poles of g_plus in the lower half-plane and those of g_minus in the
/// upper half-plane. For matching g, sigma = (-1)^n g(0) and
/// g_minus = sigma * (g_plus~)^{-1}.
struct Factorization {
    SymbolExpr g_minus;
    Rational nu;
    int n = 0;
    SymbolExpr g_plus;
    std::optional<int> sigma;

    /// g_minus * exp(i nu t) * cayley^n * g_plus, recomputed exactly.
    SymbolExpr reassemble() const;
};

/// Throws NotInvertibleInG, RootOnAxis, or FactorNotExact when the half-plane
/// factors of the rational part are not defined over Q(i).
Factorization wiener_hopf_factorize(const SymbolExpr& g);

/// As wiener_hopf_factorize, plus sigma; throws NotMatching unless g*g~ = 1.
Factorization matching_factorize(const SymbolExpr& g);

/// sigma computed from (-1)^n g(0) alone.
int sigma_from_value(const SymbolExpr& g, int n);

/// The two split symbols for nu < 0, n < 0:
/// g1 = sigma g_plus~^{-1} cayley^n g_plus,  g2 = sigma g_plus~^{-1} exp(i nu t) g_plus.
struct SplitSymbols {
    SymbolExpr g1;
    SymbolExpr g2;
};

SplitSymbols split_symbols(const Factorization& f);

/// {"g_minus": symbol, "g_plus": symbol, "nu": "p/q", "n": int, "sigma": int|null}
nlohmann::json to_json(const Factorization& f);

} // namespace whh
