#include "whh/whh.hpp"

#include <memory>

#include <Eigen/Dense>

#include "whh/errors.hpp"

namespace whh {

namespace {

using MatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using VectorC = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

// Reduced kernel elements whose defect (window mass plus moments) is below this
// relative norm are kept in the intersection.
constexpr long double kIntersectTol = 1e-7L;

bool right_invertible(const Rational& nu, int n) { return nu < 0 || (nu == 0 && n <= 0); }

char side(const Rational& nu, int n) { return right_invertible(nu, n) ? 'r' : 'l'; }

PiecewiseExpPoly laguerre_weight(int j, long double t0, long double t1)
{
    return PiecewiseExpPoly::term(t0, t1, 1, j, -1);
}

// Coefficients beta with <z + sum beta_i t^i e^{-t} 1_(0,L), t^j e^{-t}> = 0 for j < n.
PiecewiseExpPoly moment_correction(const PiecewiseExpPoly& z, long double L, int n)
{
    MatrixC G(n, n);
    VectorC r(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            G(j, i) = inner_product(laguerre_weight(i, 0, L), laguerre_weight(j, 0, L));
        r(j) = -inner_product(z, laguerre_weight(j, 0, kInf));
    }
    VectorC beta = G.fullPivLu().solve(r);
    PiecewiseExpPoly w;
    for (int i = 0; i < n; ++i)
        w = w + scale(beta(i), laguerre_weight(i, 0, L));
    return w;
}

// J Q W0(g) P h
PiecewiseExpPoly jqw(const SymbolExpr& g, const PiecewiseExpPoly& h)
{
    return reflect_J(restrict_minus(apply_W0(g, restrict_plus(h))));
}

void append(std::vector<PiecewiseExpPoly>& dst, const std::vector<PiecewiseExpPoly>& src)
{
    dst.insert(dst.end(), src.begin(), src.end());
}

// Kernel when W(c) is right-invertible: phi_sign(im P^sign(d)) + im P^{-sign}(c).
WHHKernel right_invertible_kernel(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    const SubordinatedPair sp = subordinated_pair(MatchingPair(a, b));
    auto cf = std::make_shared<const Factorization>(matching_factorize(sp.c));
    const KernelDescription kd = kernel_W(sp.d);
    const KernelDescription kc = kernel_W(sp.c);
    WHHKernel out;

    if (kd.split)
        for (const auto& x : sign > 0 ? kd.split->plus_basis : kd.split->minus_basis)
            out.finite_basis.push_back(phi_pm(a, b, *cf, x, sign));
    if (kc.split)
        append(out.finite_basis, sign > 0 ? kc.split->minus_basis : kc.split->plus_basis);

    if (kd.free) {
        FreePart part = *kd.free;
        FreeAction action = *kd.split->free_action;
        out.free.push_back({sign > 0 ? "phi_+(im P+(d))" : "phi_-(im P-(d))", part,
                            [a, b, cf, part, action, sign](const PiecewiseExpPoly& f) {
                                MomentProjection mp;
                                PiecewiseExpPoly h = free_element(part, f, &mp);
                                PiecewiseExpPoly ph = free_projection(action, mp.phi);
                                PiecewiseExpPoly s = scale(0.5L, h + scale(static_cast<long double>(sign), ph));
                                return phi_pm(a, b, *cf, s, sign);
                            }});
    }
    if (kc.free) {
        FreePart part = *kc.free;
        FreeAction action = *kc.split->free_action;
        out.free.push_back({sign > 0 ? "im P-(c)" : "im P+(c)", part, [part, action, sign](const PiecewiseExpPoly& f) {
                                MomentProjection mp;
                                PiecewiseExpPoly h = free_element(part, f, &mp);
                                PiecewiseExpPoly ph = free_projection(action, mp.phi);
                                return scale(0.5L, h - scale(static_cast<long double>(sign), ph));
                            }});
    }
    return out;
}

// W(a) +- H(b) = (W(a') +- H(b')) W(e^{i nu t/2} cayley^k) with a' = a e^{-i nu t/2} cayley^{-k},
// b' = b e^{i nu t/2} cayley^k; the right factor is injective, so the kernel is its
// preimage of ker(W(a') +- H(b')) restricted to its image.
WHHKernel reduced_kernel(const SymbolExpr& a, const SymbolExpr& b, int sign, const Rational& nu, int k)
{
    const Rational half = nu / 2;
    const SymbolExpr a2 = a * SymbolExpr::exponential(-half) * SymbolExpr::cayley(-k);
    const SymbolExpr b2 = b * SymbolExpr::exponential(half) * SymbolExpr::cayley(k);
    WHHKernel inner = right_invertible_kernel(a2, b2, sign);
    if (!inner.free.empty())
        throw Error(ErrorCode::CaseUnsupported,
                    "intersection of an infinite-dimensional kernel with im W(e^{i nu t/2} cayley^k) is not implemented",
                    "nu(c) = " + to_string(nu) + ", k = " + std::to_string(k));

    const long double s = to_long_double(half);
    WHHKernel out;
    out.reduction_k = k;
    out.reduction_shift = s;

    std::vector<PiecewiseExpPoly> u;
    for (const auto& v : inner.finite_basis) {
        long double nv = l2_norm(v);
        if (nv > 0)
            u.push_back(scale(1.0L / nv, v));
    }
    const int r = static_cast<int>(u.size());
    if (r == 0)
        return out;

    // Quadratic form |u|_(0,s)|^2 + sum_j |<S^{-1} u, t^j e^{-t}>|^2 on the coefficients.
    MatrixC H = MatrixC::Zero(r, r);
    if (s > 0) {
        std::vector<PiecewiseExpPoly> head;
        for (const auto& v : u)
            head.push_back(restrict_to(v, 0, s));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                H(i, j) += inner_product(head[j], head[i]);
    }
    if (k > 0) {
        MatrixC M(k, r);
        for (int i = 0; i < r; ++i) {
            PiecewiseExpPoly back = restrict_plus(shift(u[i], -s));
            for (int j = 0; j < k; ++j)
                M(j, i) = inner_product(back, laguerre_weight(j, 0, kInf));
        }
        H += M.adjoint() * M;
    }
    Eigen::SelfAdjointEigenSolver<MatrixC> eig(H);
    const auto& values = eig.eigenvalues();
    for (int i = 0; i < r; ++i) {
        if (values(i) > kIntersectTol * kIntersectTol)
            continue;
        PiecewiseExpPoly v;
        for (int j = 0; j < r; ++j)
            v = v + scale(eig.eigenvectors()(j, i), u[j]);
        out.reduced_elements.push_back(v);
        PiecewiseExpPoly back = restrict_plus(shift(v, -s));
        out.finite_basis.push_back(wh_apply(SymbolExpr::cayley(-k), back));
    }
    return out;
}

SymbolExpr adjoint_b(const SymbolExpr& b) { return conjugate(reflect(b)); }

std::vector<PiecewiseExpPoly> test_functions(long double window)
{
    return {polynomial_on({1}, 0, window), polynomial_on({0, 1}, 0, window),
            PiecewiseExpPoly::term(0, window, 1, 3, -0.5L)};
}

void residuals(const SymbolExpr& a, const SymbolExpr& b, int sign, const WHHKernel& k, const std::string& label,
               std::vector<Residual>& out)
{
    auto rel = [&](const PiecewiseExpPoly& h) {
        long double nh = l2_norm(h);
        return nh == 0 ? 0.0L : l2_norm(whh_apply(a, b, sign, h)) / nh;
    };
    for (std::size_t i = 0; i < k.finite_basis.size(); ++i)
        out.push_back({label + ".basis[" + std::to_string(i) + "]", rel(k.finite_basis[i])});
    for (std::size_t i = 0; i < k.free.size(); ++i) {
        auto fs = test_functions(k.free[i].source.window);
        for (std::size_t j = 0; j < fs.size(); ++j)
            out.push_back({label + ".free[" + std::to_string(i) + "].sample[" + std::to_string(j) + "]",
                           rel(k.free[i].generate(fs[j]))});
    }
}

nlohmann::json opt_json(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

} // namespace

CaseTag classify(const SymbolExpr& a, const SymbolExpr& b)
{
    const SubordinatedPair sp = subordinated_pair(MatchingPair(a, b));
    CaseTag tag;
    tag.nu_c = nu_index(sp.c);
    tag.nu_d = nu_index(sp.d);
    tag.n_c = n_index(sp.c);
    tag.n_d = n_index(sp.d);
    if (tag.nu_c == 0)
        tag.kappa1 = -tag.n_c;
    if (tag.nu_d == 0)
        tag.kappa2 = -tag.n_d;
    tag.side_class = std::string("(") + side(tag.nu_c, tag.n_c) + "," + side(tag.nu_d, tag.n_d) + ")";
    const int zeros = (tag.nu_c == 0) + (tag.nu_d == 0);
    tag.case_label = zeros == 2 ? "I" : (zeros == 0 ? "II" : "III");

    if (tag.kappa1 && *tag.kappa1 < 0)
        tag.aux_k = (1 - *tag.kappa1) / 2;
    else if (tag.nu_c > 0 && tag.n_c > 0)
        tag.aux_k = (tag.n_c + 1) / 2;
    if (tag.kappa2 && *tag.kappa2 > 0)
        tag.aux_m = (*tag.kappa2 + 1) / 2;

    if (right_invertible(tag.nu_c, tag.n_c))
        tag.branch = 'A';
    else if (tag.nu_c > 0)
        tag.branch = 'C';
    else if (tag.kappa2 && *tag.kappa2 <= 0)
        tag.branch = 'D';
    else
        tag.branch = 'B';
    return tag;
}

Dimension WHHKernel::dimension() const
{
    if (!free.empty())
        return Dimension::inf();
    return {static_cast<long long>(finite_basis.size()), false};
}

PiecewiseExpPoly whh_apply(const SymbolExpr& a, const SymbolExpr& b, int sign, const PiecewiseExpPoly& h)
{
    return wh_apply(a, h) + scale(static_cast<long double>(sign), hankel_apply(b, h));
}

PiecewiseExpPoly right_inverse_apply(const Factorization& cf, const PiecewiseExpPoly& f)
{
    if (!right_invertible(cf.nu, cf.n))
        throw Error(ErrorCode::NotRightInvertible, "W(c) is not right-invertible",
                    "nu = " + to_string(cf.nu) + ", n = " + std::to_string(cf.n));
    PiecewiseExpPoly x = wh_apply(invert(cf.g_minus), restrict_plus(f));
    if (cf.n <= 0) {
        x = wh_apply(SymbolExpr::exponential(-cf.nu) * SymbolExpr::cayley(-cf.n), x);
    } else {
        const long double L = to_long_double(-cf.nu);
        PiecewiseExpPoly z = shift(x, L);
        z = z + moment_correction(z, L, cf.n);
        x = wh_apply(SymbolExpr::cayley(-cf.n), z);
    }
    return wh_apply(invert(cf.g_plus), x);
}

PiecewiseExpPoly phi_pm(const SymbolExpr& a, const SymbolExpr& b, const Factorization& cf, const PiecewiseExpPoly& s,
                        int sign)
{
    const SymbolExpr d = a * invert(reflect(b));
    const long double res = annihilation_residual(d, s);
    if (res > 1e-8L)
        throw Error(ErrorCode::NotInKernel, "s is not in ker W(d)",
                    "relative residual " + std::to_string(static_cast<double>(res)));
    const SymbolExpr c = cf.reassemble();
    const SymbolExpr at_inv = invert(reflect(a));
    const long double sg = sign;
    PiecewiseExpPoly x = right_inverse_apply(cf, wh_apply(at_inv, s));
    PiecewiseExpPoly two_phi = x - scale(sg, jqw(c, x)) + scale(sg, jqw(at_inv, s));
    return scale(0.5L, two_phi);
}

WHHKernel kernel_WplusH(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    require_invertible(a);
    require_invertible(b);
    const CaseTag tag = classify(a, b);
    switch (tag.branch) {
    case 'A':
        return right_invertible_kernel(a, b, sign);
    case 'B':
        return reduced_kernel(a, b, sign, 0, *tag.aux_k);
    case 'C':
        return reduced_kernel(a, b, sign, tag.nu_c, tag.aux_k.value_or(0));
    default:
        return {};
    }
}

WHHKernel cokernel_WplusH(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    return kernel_WplusH(conjugate(a), adjoint_b(b), sign);
}

namespace {

Dimension kernel_dimension(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    const CaseTag tag = classify(a, b);
    if (tag.branch == 'D')
        return {0, false};
    if (tag.branch != 'A')
        return kernel_WplusH(a, b, sign).dimension();
    const SubordinatedPair sp = subordinated_pair(MatchingPair(a, b));
    auto [dp, dm] = dim_split(sp.d);
    auto [cp, cm] = dim_split(sp.c);
    return sign > 0 ? dp + cm : dm + cp;
}

} // namespace

std::pair<Dimension, Dimension> defect_numbers(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    require_invertible(a);
    require_invertible(b);
    return {kernel_dimension(a, b, sign), kernel_dimension(conjugate(a), adjoint_b(b), sign)};
}

WHHKernelReport analyze(const SymbolExpr& a, const SymbolExpr& b, int sign)
{
    WHHKernelReport r;
    r.sign = sign;
    r.tag = classify(a, b);
    r.adjoint_tag = classify(conjugate(a), adjoint_b(b));
    r.kernel = kernel_WplusH(a, b, sign);
    r.cokernel = cokernel_WplusH(a, b, sign);
    r.dim_ker = r.kernel.dimension();
    r.dim_coker = r.cokernel.dimension();
    residuals(a, b, sign, r.kernel, "kernel", r.diagnostics);
    residuals(conjugate(a), adjoint_b(b), sign, r.cokernel, "cokernel", r.diagnostics);
    return r;
}

nlohmann::json to_json(const CaseTag& tag)
{
    return {{"nu_c", to_string(tag.nu_c)},
            {"nu_d", to_string(tag.nu_d)},
            {"n_c", tag.n_c},
            {"n_d", tag.n_d},
            {"kappa1", opt_json(tag.kappa1)},
            {"kappa2", opt_json(tag.kappa2)},
            {"side_class", tag.side_class},
            {"case", tag.case_label},
            {"aux_k", opt_json(tag.aux_k)},
            {"aux_m", opt_json(tag.aux_m)},
            {"branch", std::string(1, tag.branch)}};
}

nlohmann::json to_json(const WHHKernel& k, const std::vector<long double>& grid)
{
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& h : k.finite_basis) {
        nlohmann::json e = {{"pieces", to_json(h)}};
        if (!grid.empty()) {
            nlohmann::json s = nlohmann::json::array();
            auto values = sample(h, grid);
            for (std::size_t i = 0; i < grid.size(); ++i)
                s.push_back({static_cast<double>(grid[i]), static_cast<double>(values[i].real()),
                             static_cast<double>(values[i].imag())});
            e["samples"] = s;
        }
        basis.push_back(e);
    }
    nlohmann::json free = nlohmann::json::array();
    for (const auto& f : k.free) {
        nlohmann::json e = to_json(f.source);
        e["description"] = f.description;
        free.push_back(e);
    }
    nlohmann::json j = {{"dimension", k.dimension().to_string()}, {"finite_basis", basis}, {"free", free}};
    if (!k.reduced_elements.empty() || k.reduction_k != 0 || k.reduction_shift != 0)
        j["reduction"] = {{"k", k.reduction_k}, {"shift", static_cast<double>(k.reduction_shift)}};
    return j;
}

nlohmann::json to_json(const WHHKernelReport& r, const std::vector<long double>& grid)
{
    nlohmann::json diag = nlohmann::json::array();
    for (const auto& d : r.diagnostics)
        diag.push_back({{"what", d.what}, {"relative_residual", static_cast<double>(d.value)}});
    return {{"sign", r.sign > 0 ? "plus" : "minus"},
            {"case", to_json(r.tag)},
            {"adjoint_case", to_json(r.adjoint_tag)},
            {"dim_ker", r.dim_ker.to_string()},
            {"dim_coker", r.dim_coker.to_string()},
            {"kernel", to_json(r.kernel, grid)},
            {"cokernel", to_json(r.cokernel, grid)},
            {"diagnostics", diag}};
}

} // namespace whh
