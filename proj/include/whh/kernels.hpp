#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "whh/factorization.hpp"
#include "whh/funcspace.hpp"

namespace whh {

/// Non-negative integer or infinity.
struct Dimension {
    long long value = 0;
    bool infinite = false;

    static Dimension inf() { return {0, true}; }
    std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
    friend bool operator==(const Dimension&, const Dimension&) = default;
    friend Dimension operator+(Dimension a, Dimension b)
    {
        if (a.infinite || b.infinite)
            return inf();
        return {a.value + b.value, false};
    }
};

/// Infinite-dimensional part of a kernel: h = W(post) W(cayley^pre) phi with phi
/// supported on (0, window) and int phi t^j e^{-t} dt = 0 for j in moment_powers.
struct FreePart {
    long double window = 0;
    SymbolExpr post_factor;
    std::vector<int> moment_powers;
    std::optional<int> pre_cayley;
};

/// Result of forcing the moment conditions on a user function: phi = f - sum c_j t^j e^{-t} on the window.
struct MomentProjection {
    PiecewiseExpPoly phi;
    std::vector<cplx> removed;
};

/// Action of P(g) on the free summand: P(g) h = sigma W(outer) W(g_+^{-1}) R_window phi.
struct FreeAction {
    int sigma = 1;
    long double window = 0;
    SymbolExpr inner;  // g_+^{-1}
    SymbolExpr outer;  // 1, or cayley^{|n|} for nu < 0, n < 0
};

struct ProjectionSplit {
    std::vector<PiecewiseExpPoly> plus_basis;
    std::vector<PiecewiseExpPoly> minus_basis;
    std::optional<FreeAction> free_action;
};

struct KernelDescription {
    SymbolExpr symbol;
    Factorization factorization;
    std::vector<PiecewiseExpPoly> finite_basis;
    std::optional<FreePart> free;
    std::optional<ProjectionSplit> split;

    Dimension dimension() const;
};

/// Kernel of W(g) for a matching g (NotMatching otherwise).
KernelDescription kernel_W(const SymbolExpr& g);

/// Orthogonal projection of f|window onto the complement of {t^j e^{-t}}.
MomentProjection impose_moments(const PiecewiseExpPoly& f, long double window, const std::vector<int>& powers);

/// Concrete kernel element generated by f on (0, window); the moment
/// projection applied to f is written to `projection` when requested.
PiecewiseExpPoly free_element(const FreePart& part, const PiecewiseExpPoly& f, MomentProjection* projection = nullptr);

/// J Q W0(g) P h; throws NotInKernel when W(g) h is not small relative to h.
PiecewiseExpPoly projection_P(const SymbolExpr& g, const PiecewiseExpPoly& h, long double tol = 1e-8L);

ProjectionSplit projection_split(const SymbolExpr& g, const KernelDescription& kd);

/// P(g) h for the free element generated by phi (already moment-projected), by the closed formula.
PiecewiseExpPoly free_projection(const FreeAction& action, const PiecewiseExpPoly& phi);

/// (dim im P+(g), dim im P-(g)) without building bases.
std::pair<Dimension, Dimension> dim_split(const SymbolExpr& g);

/// Relative residual |W(g) h| / |h| (0 for h = 0).
long double annihilation_residual(const SymbolExpr& g, const PiecewiseExpPoly& h);

/// Smallest over largest singular value of the Gram matrix (1 for an empty list).
long double gram_conditioning(const std::vector<PiecewiseExpPoly>& basis);

nlohmann::json to_json(const FreePart& part);
nlohmann::json to_json(const KernelDescription& kd, const std::vector<long double>& grid);

} // namespace whh
