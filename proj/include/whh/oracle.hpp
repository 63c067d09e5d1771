#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "whh/funcspace.hpp"
#include "whh/symbols.hpp"

namespace whh {

using MatrixXcd = Eigen::MatrixXcd;

/// Laguerre-Galerkin matrix of W(a) + sign H(b): entry (k, j) = <T psi_j, psi_k>.
/// `entries` is the square N x N section; `section` keeps rows 0..2N-1 and is
/// what the defect counts use, so that a column is not lost only because its
/// image leaves the first N coordinates.
struct GalerkinMatrix {
    int N = 0;
    MatrixXcd entries;
    MatrixXcd section;
    SymbolExpr a;
    SymbolExpr b;
    int sign = 1;
};

/// Coefficients c_m, m in [lo, hi], of a(lambda) = sum_m c_m z^m with
/// z = (lambda - i)/(lambda + i) on the unit circle. Exponentials use
/// e^{i delta lambda} = e^{-|delta|} sum_m L_m^{(-1)}(2|delta|) z^{+-m};
/// the rational part is sampled on the circle and transformed.
std::vector<std::complex<double>> circle_coefficients(const SymbolExpr& a, int lo, int hi);

/// e^{-delta} L_m^{(-1)}(2 delta), m = 0..count-1, for delta >= 0.
std::vector<double> exponential_coefficients(double delta, int count);

GalerkinMatrix galerkin_matrix(const SymbolExpr& a, const SymbolExpr& b, int sign, int N);

/// Same N x N section assembled with closed-form wh_apply/hankel_apply and
/// inner products. Only usable for small N (the Laguerre polynomials in
/// monomial form lose all digits past N of about 16).
MatrixXcd galerkin_matrix_closed_form(const SymbolExpr& a, const SymbolExpr& b, int sign, int N);

/// Number of singular values of the 2N x N section <= tol * largest.
int numeric_defect(const GalerkinMatrix& m, double tol = 1e-7);

/// Right singular vectors spanning the numeric null space (N x nullity).
MatrixXcd numeric_null_space(const GalerkinMatrix& m, double tol = 1e-7);

struct NumericDefects {
    int kernel = 0;
    int cokernel = 0;
};

/// Kernel from W(a) + sign H(b), cokernel from the adjoint W(conj a) + sign H(conj b~).
NumericDefects numeric_defects(const SymbolExpr& a, const SymbolExpr& b, int sign, int N, double tol = 1e-7);

/// Cut used when looking for nullity growth. Approximate null vectors of an
/// infinite-dimensional kernel only reach 1e-7 slowly (W(e^{-it}) gives 0/0/1
/// at N = 16/32/64 there, 1/2/4 at this cut).
inline constexpr double kGrowthTol = 1e-3;

/// Numeric nullity at each N; strictly growing counts signal an infinite-dimensional kernel.
std::vector<int> nullity_growth(const SymbolExpr& a, const SymbolExpr& b, int sign, const std::vector<int>& sizes,
                                double tol = kGrowthTol);

/// |W(a) h + sign H(b) h|
long double residual_norm(const SymbolExpr& a, const SymbolExpr& b, int sign, const PiecewiseExpPoly& h);

/// <h, psi_k>, k < N, for functions supported on [0, inf), computed from the
/// Fourier image on the circle. Column i holds basis[i].
MatrixXcd psi_coordinates(const std::vector<PiecewiseExpPoly>& basis, int N);

/// Largest principal angle between the column spans; throws DegenerateBasis
/// when either set of columns is numerically dependent. Spans of different
/// dimension are at angle pi/2.
double subspace_angle(const MatrixXcd& A, const MatrixXcd& B);

nlohmann::json to_json(const GalerkinMatrix& m);
/// N as little-endian int64, then the N x N entries row-major as (re, im) float64 pairs.
void write_binary(const GalerkinMatrix& m, std::ostream& out);

} // namespace whh
