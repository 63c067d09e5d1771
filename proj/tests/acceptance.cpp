// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "test_support.hpp"
#include "whh/kernels.hpp"
#include "whh/oracle.hpp"
#include "whh/whh.hpp"

using namespace whh;
using namespace whh::testing;

namespace {

constexpr long double kResidualTol = 1e-8L;
constexpr double kSvdTol = 1e-7;
constexpr double kAngleTol = 1e-6;
constexpr int kGalerkinN = 64;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why)
    {
        if (!ok && pass)
            detail = why;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

PiecewiseExpPoly random_window_poly(std::mt19937& rng, long double L)
{
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<cplx> c1, c2;
    for (int k = 0; k < 4; ++k) {
        c1.emplace_back(u(rng), u(rng));
        c2.emplace_back(u(rng), u(rng));
    }
    return polynomial_on(c1, 0, L / 3) + polynomial_on(c2, L / 3, L);
}

// ((l - i)/(l + i))^n i sqrt2 / (l + i)
cplx psi_hat(int n, long double lambda)
{
    cplx l(lambda, 0), i(0, 1);
    return std::pow((l - i) / (l + i), n) * i * std::numbers::sqrt2_v<long double> / (l + i);
}

long double relative(long double num, long double den) { return den == 0 ? num : num / den; }

Outcome projection_dimensions()
{
    Outcome o;
    long double worst = 0;
    for (int n = 1; n <= 6; ++n) {
        for (int s : {1, -1}) {
            SymbolExpr g = SymbolExpr::constant(s) * SymbolExpr::cayley(-n);
            const int m = n / 2;
            const int sigma = sigma_from_value(g, -n);
            const long long plus = n % 2 == 0 ? m : m + (1 - sigma) / 2;
            const long long minus = n % 2 == 0 ? m : m + (1 + sigma) / 2;
            auto kd = kernel_W(g);
            const auto& split = *kd.split;
            auto dims = dim_split(g);
            const std::string tag = "n=" + std::to_string(n) + " s=" + std::to_string(s);
            o.require(dims.first == Dimension{plus, false} && dims.second == Dimension{minus, false},
                      "dim_split mismatch at " + tag);
            o.require(static_cast<long long>(split.plus_basis.size()) == plus
                          && static_cast<long long>(split.minus_basis.size()) == minus,
                      "basis size mismatch at " + tag);
            for (const auto& h : split.plus_basis) {
                worst = std::max({worst, annihilation_residual(g, h), relative(l2_distance(projection_P(g, h), h), l2_norm(h))});
            }
            for (const auto& h : split.minus_basis)
                worst = std::max({worst, annihilation_residual(g, h),
                                  relative(l2_distance(projection_P(g, h), scale(-1, h)), l2_norm(h))});
        }
    }
    o.require(worst <= kResidualTol, "residual " + fmt("%.3e", static_cast<double>(worst)));
    if (o.pass)
        o.detail = "12 symbols, max residual " + fmt("%.3e", static_cast<double>(worst));
    return o;
}

Outcome projection_involution()
{
    Outcome o;
    std::mt19937 rng(1201);
    struct Shape {
        Rational nu;
        int n;
    };
    const Shape shapes[] = {{0, -1},  {0, -2},  {0, -3},           {0, 2},  {1, -1},  {Rational(3, 2), 2},
                          {-1, 0},  {Rational(-3, 2), 0}, {Rational(-1, 2), -1}, {-1, -2}, {-2, 1}, {-2, 2}};
    long double worst = 0;
    int elements = 0, free_samples = 0;
    int idx = 0;
    for (const auto& sp : shapes) {
        SymbolExpr g = matching_with(rng, sp.nu, sp.n, idx % 2, idx % 3 ? 1 : -1);
        ++idx;
        auto kd = kernel_W(g);
        auto involution = [&](const PiecewiseExpPoly& h) {
            PiecewiseExpPoly ph = projection_P(g, h);
            worst = std::max(worst, relative(l2_distance(projection_P(g, ph), h), l2_norm(h)));
            ++elements;
        };
        for (const auto& h : kd.finite_basis)
            involution(h);
        if (kd.free) {
            for (int trial = 0; trial < 2; ++trial) {
                involution(free_element(*kd.free, random_window_poly(rng, kd.free->window)));
                ++free_samples;
            }
        }
        const bool expect_free = sp.nu < 0;
        o.require(kd.free.has_value() == expect_free, "free part presence wrong for " + g.to_string());
    }
    o.require(worst <= kResidualTol, "involution error " + fmt("%.3e", static_cast<double>(worst)));
    if (o.pass)
        o.detail = "12 symbols, " + std::to_string(elements) + " elements (" + std::to_string(free_samples)
                   + " free samples), max |P^2 h - h|/|h| " + fmt("%.3e", static_cast<double>(worst));
    return o;
}

Outcome laguerre_machinery()
{
    Outcome o;
    long double ortho = 0, fourier_err = 0;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j)
            ortho = std::max(ortho, std::abs(inner_product(psi(i), psi(j)) - cplx(i == j ? 1 : 0)));
    for (int n = -5; n <= 5; ++n) {
        auto F = fourier(psi(n));
        for (int k = 0; k < 20; ++k) {
            long double lambda = -4.75L + 0.5L * k;
            fourier_err = std::max(fourier_err, std::abs(F(lambda) - psi_hat(n, lambda)));
        }
    }
    o.require(ortho <= 1e-12L, "orthonormality " + fmt("%.3e", static_cast<double>(ortho)));
    o.require(fourier_err <= 1e-10L, "Fourier identity " + fmt("%.3e", static_cast<double>(fourier_err)));
    if (o.pass)
        o.detail = "orthonormality " + fmt("%.3e", static_cast<double>(ortho)) + ", Fourier identity "
                   + fmt("%.3e", static_cast<double>(fourier_err));
    return o;
}

Outcome oracle_agreement()
{
    Outcome o;
    double worst_angle = 0;
    int pairs = 0, odd = 0, even = 0, sigma_pos = 0, sigma_neg = 0, reduction = 0;
    for (const auto& p : case_one_suite()) {
        ++pairs;
        CaseTag tag = classify(p.a, p.b);
        (*tag.kappa1 % 2 ? odd : even) += 1;
        (evaluate(p.a * invert(p.b), 0).real() > 0 ? sigma_pos : sigma_neg) += 1;
        reduction += *tag.kappa1 < 0 && *tag.kappa2 > 0;
        const std::string name = p.a.to_string() + " / " + p.b.to_string();
        for (int sign : {1, -1}) {
            WHHKernel ker = kernel_WplusH(p.a, p.b, sign);
            WHHKernel coker = cokernel_WplusH(p.a, p.b, sign);
            NumericDefects nd = numeric_defects(p.a, p.b, sign, kGalerkinN, kSvdTol);
            o.require(ker.dimension() == Dimension{nd.kernel, false}, "dim ker differs for " + name);
            o.require(coker.dimension() == Dimension{nd.cokernel, false}, "dim coker differs for " + name);
            auto compare = [&](const SymbolExpr& pa, const SymbolExpr& pb, const WHHKernel& k) {
                if (k.finite_basis.empty())
                    return;
                MatrixXcd theory = psi_coordinates(k.finite_basis, kGalerkinN);
                MatrixXcd numeric = numeric_null_space(galerkin_matrix(pa, pb, sign, kGalerkinN), kSvdTol);
                double angle = subspace_angle(theory, numeric);
                worst_angle = std::max(worst_angle, angle);
                o.require(angle <= kAngleTol, "angle " + fmt("%.3e", angle) + " for " + name);
            };
            compare(p.a, p.b, ker);
            compare(conjugate(p.a), conjugate(reflect(p.b)), coker);
        }
    }
    o.require(pairs >= 10 && odd > 0 && even > 0 && sigma_pos > 0 && sigma_neg > 0 && reduction > 0,
              "suite does not cover the required cases");
    if (o.pass)
        o.detail = std::to_string(pairs) + " pairs (odd kappa1 " + std::to_string(odd) + ", u(0)>0 "
                   + std::to_string(sigma_pos) + ", u(0)<0 " + std::to_string(sigma_neg) + ", kappa1<0<kappa2 "
                   + std::to_string(reduction) + "), max angle " + fmt("%.3e", worst_angle);
    return o;
}

Outcome index_consistency()
{
    Outcome o;
    int pairs = 0;
    for (const auto& p : case_one_suite()) {
        CaseTag tag = classify(p.a, p.b);
        long long sum = 0;
        for (int sign : {1, -1}) {
            Dimension k = kernel_WplusH(p.a, p.b, sign).dimension();
            Dimension c = cokernel_WplusH(p.a, p.b, sign).dimension();
            sum += k.value - c.value;
        }
        o.require(sum == *tag.kappa1 + *tag.kappa2, "index sum differs for " + p.a.to_string());
        ++pairs;
    }
    if (o.pass)
        o.detail = std::to_string(pairs) + " pairs";
    return o;
}

Outcome operator_identities()
{
    Outcome o;
    std::mt19937 rng(606);
    std::uniform_real_distribution<double> u(-1, 1);
    long double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        SymbolExpr a = random_symbol(rng, 1 + trial % 3, Rational(trial % 5 - 2, 3));
        SymbolExpr b = random_symbol(rng, 1 + (trial + 1) % 2, Rational(trial % 3 - 1, 2));
        PiecewiseExpPoly f;
        for (int j = 0; j <= 7; ++j)
            f = f + scale(cplx(u(rng), u(rng)), psi(j));
        SymbolExpr ab = a * b;
        SymbolExpr bt = reflect(b);
        PiecewiseExpPoly w = wh_apply(a, wh_apply(b, f)) + hankel_apply(a, hankel_apply(bt, f));
        PiecewiseExpPoly h = wh_apply(a, hankel_apply(b, f)) + hankel_apply(a, wh_apply(bt, f));
        worst = std::max({worst, l2_distance(wh_apply(ab, f), w), l2_distance(hankel_apply(ab, f), h)});
    }
    o.require(worst <= kResidualTol, "identity error " + fmt("%.3e", static_cast<double>(worst)));
    if (o.pass)
        o.detail = "20 trials, max error " + fmt("%.3e", static_cast<double>(worst));
    return o;
}

Outcome infinite_kernels()
{
    Outcome o;
    const SymbolExpr a = SymbolExpr::exponential(-1);
    const SymbolExpr b = SymbolExpr::constant(1);
    std::mt19937 rng(707);
    long double worst = 0;
    int elements = 0;
    std::string counts;
    for (int sign : {1, -1}) {
        WHHKernel k = kernel_WplusH(a, b, sign);
        o.require(!k.free.empty(), "no free summand");
        for (int trial = 0; trial < 10; ++trial) {
            for (const auto& fs : k.free) {
                PiecewiseExpPoly h = fs.generate(random_window_poly(rng, fs.source.window));
                worst = std::max(worst, relative(l2_norm(whh_apply(a, b, sign, h)), l2_norm(h)));
                ++elements;
            }
        }
        auto growth = nullity_growth(a, b, sign, {16, 32, 64});
        auto strict = nullity_growth(a, b, sign, {16, 32, 64}, kSvdTol);
        o.require(growth[0] < growth[1] && growth[1] < growth[2], "nullity not strictly increasing");
        counts += std::string(sign > 0 ? " plus " : " minus ") + std::to_string(growth[0]) + "/"
                  + std::to_string(growth[1]) + "/" + std::to_string(growth[2]) + " (at 1e-7: "
                  + std::to_string(strict[0]) + "/" + std::to_string(strict[1]) + "/" + std::to_string(strict[2]) + ")";
    }
    o.require(worst <= kResidualTol, "residual " + fmt("%.3e", static_cast<double>(worst)));
    if (o.pass)
        o.detail = std::to_string(elements) + " elements, max residual " + fmt("%.3e", static_cast<double>(worst))
                   + "; nullity at N=16/32/64, cut " + fmt("%.0e", kGrowthTol) + ":" + counts;
    return o;
}

Outcome moment_conditions()
{
    Outcome o;
    const SymbolExpr gp = rat_symbol(lin(gi(0, -2)), lin(gi(0, -1)));
    std::mt19937 rng(808);
    long double worst_good = 0, least_bad = 1e300;
    int cases = 0;
    for (int n : {1, 2}) {
        for (int sigma : {1, -1}) {
            SymbolExpr g = SymbolExpr::constant(sigma) * invert(reflect(gp)) * SymbolExpr::exponential(-1)
                           * SymbolExpr::cayley(n) * gp;
            Factorization fz = matching_factorize(g);
            o.require(fz.n == n && fz.nu == -1 && fz.sigma == sigma, "unexpected factorization of " + g.to_string());
            auto kd = kernel_W(g);
            o.require(kd.free && static_cast<int>(kd.free->moment_powers.size()) == n, "moment count");
            if (!kd.free)
                continue;
            for (int trial = 0; trial < 3; ++trial) {
                PiecewiseExpPoly f = random_window_poly(rng, kd.free->window);
                worst_good = std::max(worst_good, annihilation_residual(g, free_element(*kd.free, f)));
                for (int drop = 0; drop < n; ++drop) {
                    FreePart weaker = *kd.free;
                    weaker.moment_powers.erase(weaker.moment_powers.begin() + drop);
                    least_bad = std::min(least_bad, annihilation_residual(g, free_element(weaker, f)));
                }
                ++cases;
            }
        }
    }
    o.require(worst_good <= kResidualTol, "residual with moments " + fmt("%.3e", static_cast<double>(worst_good)));
    o.require(least_bad >= 1e-3L, "residual without a moment " + fmt("%.3e", static_cast<double>(least_bad)));
    if (o.pass)
        o.detail = std::to_string(cases) + " functions, with moments " + fmt("%.3e", static_cast<double>(worst_good))
                   + ", one dropped >= " + fmt("%.3e", static_cast<double>(least_bad));
    return o;
}

Outcome exact_identities()
{
    Outcome o;
    std::mt19937 rng(909);
    const SymbolExpr one = SymbolExpr::constant(1);
    for (int trial = 0; trial < 50; ++trial) {
        SymbolExpr b = random_symbol(rng, 1 + trial % 3, Rational(trial % 5 - 2, 2));
        SymbolExpr a = b * random_matching_function(rng, 1 + trial % 2, Rational(trial % 3 - 1));
        auto sp = subordinated_pair(MatchingPair(a, b));
        o.require(sp.c * reflect(sp.c) == one, "c c~ != 1");
        o.require(sp.d * reflect(sp.d) == one, "d d~ != 1");
        o.require(sp.c == a * invert(b), "c != a b^-1");
        o.require(sp.d == a * invert(reflect(b)), "d != a b~^-1");
    }
    if (o.pass)
        o.detail = "50 pairs, exact equality";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double budget;  // seconds, 0 for none
    };
    const Criterion criteria[] = {
        {"projection dimensions for cayley^-n, n = 1..6", projection_dimensions, 1},
        {"projection involution on kernels of W(g)", projection_involution, 5},
        {"Laguerre orthonormality and Fourier identity", laguerre_machinery, 0},
        {"defects and kernels against the Galerkin oracle", oracle_agreement, 30},
        {"index consistency", index_consistency, 0},
        {"W/H product identities on span{psi_0..psi_7}", operator_identities, 0},
        {"infinite kernels for (e^{-it}, 1)", infinite_kernels, 0},
        {"moment conditions for free kernels", moment_conditions, 0},
        {"exact subordination identities", exact_identities, 0},
    };
    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget > 0 && seconds > c.budget) {
            o.pass = false;
            o.detail += " (over the " + fmt("%.0f", c.budget) + " s budget)";
        }
        failures += !o.pass;
        std::printf("%s %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), seconds);
    }
    return failures == 0 ? 0 : 1;
}
