#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "json.hpp"
#include "whh/symbols.hpp"

namespace whh {

using cplx = std::complex<long double>;

inline constexpr long double kInf = std::numeric_limits<long double>::infinity();

/// coef * t^power * exp(rate * t), with t the global variable (not local to a piece).
struct ExpPolyTerm {
    cplx coef;
    int power = 0;
    cplx rate;
};

/// The function is sum(terms) on [t0, t1). t0 may be -inf and t1 may be +inf.
struct Piece {
    long double t0;
    long double t1;
    std::vector<ExpPolyTerm> terms;
};

/// Finite sums of piecewise exponential-polynomials on the line. Values are
/// kept canonical: sorted disjoint pieces, like terms merged, tiny terms
/// dropped, adjacent equal pieces fused, and the zero function has no pieces.
class PiecewiseExpPoly {
public:
    PiecewiseExpPoly() = default;
    explicit PiecewiseExpPoly(std::vector<Piece> pieces);

    /// Single term on [t0, t1).
    static PiecewiseExpPoly term(long double t0, long double t1, cplx coef, int power, cplx rate);

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    /// Value at t; pieces are closed on the left.
    cplx operator()(long double t) const;

    /// Smallest and largest points of the support (0, 0 for the zero function).
    long double support_min() const;
    long double support_max() const;

    friend PiecewiseExpPoly operator+(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
    friend PiecewiseExpPoly operator-(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
    friend PiecewiseExpPoly operator*(cplx c, const PiecewiseExpPoly& f);

private:
    std::vector<Piece> pieces_;
};

/// Laguerre functions: sqrt(2) e^{-t} L_j(2t) on t > 0 for j >= 0, and
/// psi_j(t) = -psi_{-j-1}(-t) for j < 0.
PiecewiseExpPoly psi(int j);

/// Closed-form Fourier transform lambda -> int f(t) e^{i lambda t} dt.
class FourierImage {
public:
    explicit FourierImage(PiecewiseExpPoly f) : f_(std::move(f)) {}
    cplx operator()(long double lambda) const;

private:
    PiecewiseExpPoly f_;
};

FourierImage fourier(const PiecewiseExpPoly& f);

PiecewiseExpPoly add(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
PiecewiseExpPoly scale(cplx c, const PiecewiseExpPoly& f);
/// (Jf)(t) = f(-t)
PiecewiseExpPoly reflect_J(const PiecewiseExpPoly& f);
/// t -> f(t - delta)
PiecewiseExpPoly shift(const PiecewiseExpPoly& f, long double delta);
/// f restricted to [a, b)
PiecewiseExpPoly restrict_to(const PiecewiseExpPoly& f, long double a, long double b);
PiecewiseExpPoly restrict_plus(const PiecewiseExpPoly& f);
PiecewiseExpPoly restrict_minus(const PiecewiseExpPoly& f);

/// Convolution operator with symbol a: the exponential acts as a shift and
/// the rational part as c*I plus convolution with the inverse transform of
/// its partial fractions (lower half-plane poles give kernels on s > 0, upper
/// ones on s < 0). Repeated poles are supported up to multiplicity 6.
PiecewiseExpPoly apply_W0(const SymbolExpr& a, const PiecewiseExpPoly& f);
/// P W0(a) P
PiecewiseExpPoly wh_apply(const SymbolExpr& a, const PiecewiseExpPoly& f);
/// P W0(b) Q J
PiecewiseExpPoly hankel_apply(const SymbolExpr& b, const PiecewiseExpPoly& f);

/// int f conj(g); throws DivergentIntegral on a non-decaying unbounded piece.
cplx inner_product(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
long double l2_norm(const PiecewiseExpPoly& f);
long double l2_distance(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);

/// f(L - t) on (0, L), zero elsewhere.
PiecewiseExpPoly reflect_window(const PiecewiseExpPoly& f, long double L);

std::vector<cplx> sample(const PiecewiseExpPoly& f, const std::vector<long double>& grid);

/// Polynomial sum_k c_k t^k on [t0, t1).
PiecewiseExpPoly polynomial_on(const std::vector<cplx>& coeffs, long double t0, long double t1);

nlohmann::json to_json(const PiecewiseExpPoly& f);
PiecewiseExpPoly piecewise_from_json(const nlohmann::json& j);

} // namespace whh
