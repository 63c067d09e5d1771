#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "whh/kernels.hpp"

namespace whh {

/// Indices of the subordinated pair and the route taken for the kernel.
///  A: W(c) right-invertible, kernel = phi(im P(d)) + im P(c)
///  B: nu(c) = 0 < n(c): reduce by cayley^k, then intersect with im W(cayley^k)
///  C: nu(c) > 0: reduce by e^{i nu t/2} cayley^k, then intersect
///  D: nu(c) = nu(d) = 0, kappa1 < 0, kappa2 <= 0: trivial kernel
struct CaseTag {
    Rational nu_c;
    Rational nu_d;
    int n_c = 0;
    int n_d = 0;
    std::optional<int> kappa1;
    std::optional<int> kappa2;
    std::string side_class;
    std::string case_label;
    std::optional<int> aux_k;
    std::optional<int> aux_m;
    char branch = 'A';
};

CaseTag classify(const SymbolExpr& a, const SymbolExpr& b);

/// Infinite-dimensional summand: `generate` maps a function on (0, source.window)
/// to a kernel element.
struct FreeSummand {
    std::string description;
    FreePart source;
    std::function<PiecewiseExpPoly(const PiecewiseExpPoly&)> generate;
};

struct WHHKernel {
    std::vector<PiecewiseExpPoly> finite_basis;
    std::vector<FreeSummand> free;
    /// Branches B and C: elements of the reduced kernel before the final
    /// W(cayley^{-k}) (and back-shift), with the k and shift used.
    std::vector<PiecewiseExpPoly> reduced_elements;
    int reduction_k = 0;
    long double reduction_shift = 0;

    Dimension dimension() const;
};

/// (W(a) + sign H(b)) h
PiecewiseExpPoly whh_apply(const SymbolExpr& a, const SymbolExpr& b, int sign, const PiecewiseExpPoly& h);

/// W(c_+^{-1}) M W(c_-^{-1}) f with M a right inverse of W(e^{i nu t} cayley^n);
/// for n > 0 (nu < 0) M is the right shift corrected on (0, |nu|) so that the
/// first n Laguerre moments vanish. Throws NotRightInvertible.
PiecewiseExpPoly right_inverse_apply(const Factorization& cf, const PiecewiseExpPoly& f);

/// phi_sign(s) for s in ker W(d); throws NotInKernel, NotRightInvertible.
PiecewiseExpPoly phi_pm(const SymbolExpr& a, const SymbolExpr& b, const Factorization& cf, const PiecewiseExpPoly& s,
                        int sign);

/// ker(W(a) + sign H(b)); throws NotMatching, NotInvertibleInG, CaseUnsupported.
WHHKernel kernel_WplusH(const SymbolExpr& a, const SymbolExpr& b, int sign);

/// Kernel of the adjoint W(conj a) + sign H(conj b~).
WHHKernel cokernel_WplusH(const SymbolExpr& a, const SymbolExpr& b, int sign);

/// (dim ker, dim coker) of W(a) + sign H(b).
std::pair<Dimension, Dimension> defect_numbers(const SymbolExpr& a, const SymbolExpr& b, int sign);

struct Residual {
    std::string what;
    long double value;
};

struct WHHKernelReport {
    int sign = 1;
    CaseTag tag;
    CaseTag adjoint_tag;
    WHHKernel kernel;
    WHHKernel cokernel;
    Dimension dim_ker;
    Dimension dim_coker;
    std::vector<Residual> diagnostics;
};

/// Kernel and cokernel with relative residuals of every finite basis element
/// and of free elements generated from a few fixed test functions.
WHHKernelReport analyze(const SymbolExpr& a, const SymbolExpr& b, int sign);

nlohmann::json to_json(const CaseTag& tag);
nlohmann::json to_json(const WHHKernel& k, const std::vector<long double>& grid);
nlohmann::json to_json(const WHHKernelReport& r, const std::vector<long double>& grid);

} // namespace whh
