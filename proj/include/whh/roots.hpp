#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "whh/polynomial.hpp"

namespace whh {

using ComplexLD = std::complex<long double>;

/// A root with its multiplicity. `exact` is set when the root is a Gaussian
/// rational and that was confirmed by exact evaluation.
struct Root {
    ComplexLD value;
    int multiplicity = 1;
    std::optional<ComplexRational> exact;
};

/// Relative tolerance under which a numerically computed root counts as lying
/// on the real axis: |Im z| < kAxisTolerance * (1 + |z|).
inline constexpr long double kAxisTolerance = 1e-9L;

/// Yun's square-free decomposition: p = lc * prod_k s_k^k. Pairs (s_k, k) with
/// monic, pairwise coprime, square-free s_k of positive degree.
std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p);

/// Aberth-Ehrlich iteration followed by Newton polishing; intended for
/// square-free input.
std::vector<ComplexLD> aberth_roots(const Polynomial& p);

/// All roots with multiplicities (square-free parts are solved separately so
/// repeated roots keep full accuracy).
std::vector<Root> find_roots(const Polynomial& p);

/// Location of some real root of p decided exactly (gcd of real and imaginary
/// parts, then Sturm counting); empty if p has no real root.
std::optional<long double> real_root_witness(const Polynomial& p);

bool near_axis(ComplexLD z);

/// p = leading * upper * lower with monic `upper` (roots in Im > 0) and monic
/// `lower` (roots in Im < 0), both exact. Throws RootOnAxis for a root within
/// the axis tolerance and FactorNotExact when a half-plane factor has
/// coefficients outside Q(i).
struct HalfPlaneSplit {
    ComplexRational leading;
    Polynomial upper;
    Polynomial lower;
    int upper_count = 0;
    int lower_count = 0;
};

HalfPlaneSplit split_half_planes(const Polynomial& p);

/// Number of roots (with multiplicity) in the upper and lower half-planes.
/// Throws RootOnAxis like split_half_planes, but does not need exact factors.
std::pair<int, int> count_half_planes(const Polynomial& p);

} // namespace whh
