#include "whh/kernels.hpp"

#include <Eigen/Dense>

#include "whh/errors.hpp"

namespace whh {

namespace {

using MatrixC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using VectorC = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

PiecewiseExpPoly moment_function(int j, long double L)
{
    return PiecewiseExpPoly::term(0, L, 1, j, -1);
}

nlohmann::json samples_json(const PiecewiseExpPoly& f, const std::vector<long double>& grid)
{
    nlohmann::json out = nlohmann::json::array();
    auto values = sample(f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.push_back({static_cast<double>(grid[i]), static_cast<double>(values[i].real()),
                       static_cast<double>(values[i].imag())});
    return out;
}

nlohmann::json basis_json(const std::vector<PiecewiseExpPoly>& basis, const std::vector<long double>& grid)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& h : basis) {
        nlohmann::json e = {{"pieces", to_json(h)}};
        if (!grid.empty())
            e["samples"] = samples_json(h, grid);
        out.push_back(e);
    }
    return out;
}

} // namespace

Dimension KernelDescription::dimension() const
{
    if (free)
        return Dimension::inf();
    return {static_cast<long long>(finite_basis.size()), false};
}

KernelDescription kernel_W(const SymbolExpr& g)
{
    KernelDescription kd{g, matching_factorize(g), {}, {}, {}};
    const Factorization& f = kd.factorization;
    const SymbolExpr gpi = invert(f.g_plus);
    if (f.nu > 0)
        return kd;
    if (f.n < 0)
        for (int j = 0; j < -f.n; ++j)
            kd.finite_basis.push_back(wh_apply(gpi, psi(j)));
    if (f.nu < 0) {
        FreePart part{to_long_double(-f.nu), gpi, {}, std::nullopt};
        if (f.n > 0) {
            for (int j = 0; j < f.n; ++j)
                part.moment_powers.push_back(j);
            part.pre_cayley = -f.n;
        }
        kd.free = part;
    }
    if (!kd.finite_basis.empty() || kd.free)
        kd.split = projection_split(g, kd);
    return kd;
}

MomentProjection impose_moments(const PiecewiseExpPoly& f, long double window, const std::vector<int>& powers)
{
    MomentProjection mp{restrict_to(f, 0, window), {}};
    if (powers.empty())
        return mp;
    const int k = static_cast<int>(powers.size());
    std::vector<PiecewiseExpPoly> e;
    for (int p : powers)
        e.push_back(moment_function(p, window));
    MatrixC G(k, k);
    VectorC r(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            G(i, j) = inner_product(e[j], e[i]);
        r(i) = inner_product(mp.phi, e[i]);
    }
    VectorC c = G.fullPivLu().solve(r);
    for (int i = 0; i < k; ++i) {
        mp.removed.push_back(c(i));
        mp.phi = mp.phi - scale(c(i), e[i]);
    }
    return mp;
}

PiecewiseExpPoly free_element(const FreePart& part, const PiecewiseExpPoly& f, MomentProjection* projection)
{
    MomentProjection mp = impose_moments(f, part.window, part.moment_powers);
    PiecewiseExpPoly h = mp.phi;
    if (part.pre_cayley)
        h = wh_apply(SymbolExpr::cayley(*part.pre_cayley), h);
    h = wh_apply(part.post_factor, h);
    if (projection)
        *projection = std::move(mp);
    return h;
}

long double annihilation_residual(const SymbolExpr& g, const PiecewiseExpPoly& h)
{
    long double nh = l2_norm(h);
    if (nh == 0)
        return 0;
    return l2_norm(wh_apply(g, h)) / nh;
}

PiecewiseExpPoly projection_P(const SymbolExpr& g, const PiecewiseExpPoly& h, long double tol)
{
    long double res = annihilation_residual(g, h);
    if (res > tol)
        throw Error(ErrorCode::NotInKernel, "h is not in ker W(g): relative residual " + std::to_string(static_cast<double>(res)));
    return reflect_J(restrict_minus(apply_W0(g, restrict_plus(h))));
}

ProjectionSplit projection_split(const SymbolExpr& g, const KernelDescription& kd)
{
    if (!(kd.symbol == g))
        throw std::invalid_argument("projection_split: description belongs to another symbol");
    const Factorization& f = kd.factorization;
    const int sigma = *f.sigma;
    const SymbolExpr gpi = invert(f.g_plus);
    ProjectionSplit split;

    if (f.nu == 0 && f.n < 0) {
        const int N = -f.n;
        auto element = [&](int a, int b, int sign) {
            return wh_apply(gpi, psi(a) + scale(static_cast<long double>(sign * sigma), psi(b)));
        };
        if (N % 2 == 0) {
            const int m = N / 2;
            for (int k = 0; k < m; ++k) {
                split.plus_basis.push_back(element(m - k - 1, m + k, -1));
                split.minus_basis.push_back(element(m - k - 1, m + k, +1));
            }
        } else {
            const int m = (N - 1) / 2;
            for (int k = 0; k <= m; ++k) {
                // k = 0 gives psi_m (1 -+ sigma); keep it only when it is nonzero.
                if (k > 0 || sigma == -1)
                    split.plus_basis.push_back(element(m + k, m - k, -1));
                if (k > 0 || sigma == 1)
                    split.minus_basis.push_back(element(m + k, m - k, +1));
            }
        }
        return split;
    }

    if (f.nu < 0) {
        const long double L = to_long_double(-f.nu);
        split.free_action = FreeAction{sigma, L, gpi, f.n < 0 ? SymbolExpr::cayley(-f.n) : SymbolExpr::constant(1)};
        const int N = static_cast<int>(kd.finite_basis.size());
        const SymbolExpr right = SymbolExpr::exponential(-f.nu);
        for (int j = 0; j < N; ++j) {
            // P(g) b_j = W(e^{i|nu|t}) P(g1) b_j = -sigma W(e^{i|nu|t}) b_{N-j-1}
            PiecewiseExpPoly image = scale(static_cast<long double>(-sigma), wh_apply(right, kd.finite_basis[N - j - 1]));
            split.plus_basis.push_back(scale(0.5L, kd.finite_basis[j] + image));
            split.minus_basis.push_back(scale(0.5L, kd.finite_basis[j] - image));
        }
    }
    return split;
}

PiecewiseExpPoly free_projection(const FreeAction& action, const PiecewiseExpPoly& phi)
{
    PiecewiseExpPoly r = wh_apply(action.inner, reflect_window(phi, action.window));
    return scale(static_cast<long double>(action.sigma), wh_apply(action.outer, r));
}

std::pair<Dimension, Dimension> dim_split(const SymbolExpr& g)
{
    Factorization f = matching_factorize(g);
    if (f.nu < 0)
        return {Dimension::inf(), Dimension::inf()};
    if (f.nu > 0 || f.n >= 0)
        return {{0, false}, {0, false}};
    const int N = -f.n;
    const int m = N / 2;
    if (N % 2 == 0)
        return {{m, false}, {m, false}};
    const int sigma = *f.sigma;
    return {{m + (1 - sigma) / 2, false}, {m + (1 + sigma) / 2, false}};
}

long double gram_conditioning(const std::vector<PiecewiseExpPoly>& basis)
{
    if (basis.empty())
        return 1;
    const int k = static_cast<int>(basis.size());
    MatrixC G(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            G(i, j) = inner_product(basis[j], basis[i]);
    Eigen::JacobiSVD<MatrixC> svd(G);
    const auto& s = svd.singularValues();
    if (s(0) == 0)
        return 0;
    return s(k - 1) / s(0);
}

nlohmann::json to_json(const FreePart& part)
{
    nlohmann::json j = {{"window", static_cast<double>(part.window)},
                        {"moment_powers", part.moment_powers},
                        {"factors", {{"post", part.post_factor.to_string()}}}};
    j["factors"]["pre_cayley"] = part.pre_cayley ? nlohmann::json(*part.pre_cayley) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const KernelDescription& kd, const std::vector<long double>& grid)
{
    const Factorization& f = kd.factorization;
    nlohmann::json j = {{"symbol", kd.symbol.to_string()},
                        {"nu", to_string(f.nu)},
                        {"n", f.n},
                        {"sigma", f.sigma ? nlohmann::json(*f.sigma) : nlohmann::json(nullptr)},
                        {"dimension", kd.dimension().to_string()},
                        {"finite_basis", basis_json(kd.finite_basis, grid)}};
    j["free"] = kd.free ? to_json(*kd.free) : nlohmann::json(nullptr);
    if (kd.split) {
        nlohmann::json s = {{"plus", basis_json(kd.split->plus_basis, grid)},
                            {"minus", basis_json(kd.split->minus_basis, grid)}};
        if (const auto& a = kd.split->free_action)
            s["free_action"] = {{"sigma", a->sigma},
                                {"window", static_cast<double>(a->window)},
                                {"inner", a->inner.to_string()},
                                {"outer", a->outer.to_string()}};
        j["split"] = s;
    } else {
        j["split"] = nullptr;
    }
    return j;
}

} // namespace whh
