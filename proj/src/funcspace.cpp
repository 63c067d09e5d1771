#include "whh/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "whh/errors.hpp"
#include "whh/roots.hpp"

namespace whh {

namespace {

constexpr long double kDropRelative = 1e-14L;
constexpr long double kRateMerge = 1e-12L;
constexpr long double kCutMerge = 1e-12L;

bool close_cut(long double a, long double b)
{
    if (a == b)
        return true;
    if (std::isinf(a) || std::isinf(b))
        return false;
    return std::fabs(a - b) <= kCutMerge * (1 + std::fabs(a));
}

long double binom(int n, int k)
{
    long double r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

long double factorial(int n)
{
    long double r = 1;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

bool same_rate(cplx a, cplx b)
{
    long double s = std::max({1.0L, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= kRateMerge * s;
}

cplx eval_term(const ExpPolyTerm& t, long double x)
{
    cplx v = t.coef * std::exp(t.rate * x);
    for (int k = 0; k < t.power; ++k)
        v *= x;
    return v;
}

bool term_less(const ExpPolyTerm& a, const ExpPolyTerm& b)
{
    if (a.power != b.power)
        return a.power < b.power;
    if (a.rate.real() != b.rate.real())
        return a.rate.real() < b.rate.real();
    return a.rate.imag() < b.rate.imag();
}

std::vector<ExpPolyTerm> merge_terms(std::vector<ExpPolyTerm> terms)
{
    std::sort(terms.begin(), terms.end(), term_less);
    std::vector<ExpPolyTerm> out;
    std::vector<bool> used(terms.size(), false);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (used[i])
            continue;
        ExpPolyTerm acc = terms[i];
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            if (!used[j] && terms[j].power == acc.power && same_rate(terms[j].rate, acc.rate)) {
                acc.coef += terms[j].coef;
                used[j] = true;
            }
        }
        out.push_back(acc);
    }
    return out;
}

bool same_terms(const std::vector<ExpPolyTerm>& a, const std::vector<ExpPolyTerm>& b, long double scale)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].power != b[i].power || !same_rate(a[i].rate, b[i].rate))
            return false;
        if (std::abs(a[i].coef - b[i].coef) > 1e-12L * scale)
            return false;
    }
    return true;
}

/// Peak of |t^power e^{rate t}| times |coef| over [t0, t1].
long double term_size(const ExpPolyTerm& t, long double t0, long double t1)
{
    const long double s = t.rate.real();
    long double best = 0;
    auto at = [&](long double x) {
        if (std::isinf(x))
            return;
        best = std::max(best, std::pow(std::fabs(x), static_cast<long double>(t.power)) * std::exp(s * x));
    };
    at(t0);
    at(t1);
    if (s != 0) {
        long double crit = -t.power / s;
        if (t0 < crit && crit < t1)
            at(crit);
    }
    if (best == 0 && std::isinf(t0) && std::isinf(t1))
        best = 1;
    return std::abs(t.coef) * best;
}

long double max_coef(const std::vector<ExpPolyTerm>& terms)
{
    long double m = 0;
    for (const auto& t : terms)
        m = std::max(m, std::abs(t.coef));
    return m;
}

/// Coefficients c_i of the antiderivative e^{g s} sum c_i s^i of s^n e^{g s};
/// when g is negligible the antiderivative is s^{n+1}/(n+1) and `poly` is set.
struct Antiderivative {
    bool poly = false;
    std::vector<cplx> c;
};

Antiderivative antiderivative(int n, cplx g, long double scale)
{
    Antiderivative a;
    if (std::abs(g) <= kRateMerge * scale) {
        a.poly = true;
        return a;
    }
    a.c.resize(n + 1);
    // c_i = (-1)^{n-i} n! / (i! g^{n-i+1})
    cplx term = 1.0L / g;
    for (int i = n; i >= 0; --i) {
        a.c[i] = term;
        term *= -static_cast<long double>(i) / g;
    }
    return a;
}

/// Value of the antiderivative of s^n e^{g s} at finite x.
cplx antiderivative_at(const Antiderivative& a, int n, cplx g, long double x)
{
    if (a.poly)
        return std::pow(cplx(x), n + 1) / static_cast<long double>(n + 1);
    cplx s = 0;
    for (int i = n; i >= 0; --i)
        s = s * x + a.c[i];
    return s * std::exp(g * x);
}

[[noreturn]] void divergent(cplx rate)
{
    throw Error(ErrorCode::DivergentIntegral,
                "unbounded piece with non-decaying rate " + std::to_string(static_cast<double>(rate.real())) + "+" +
                    std::to_string(static_cast<double>(rate.imag())) + "i");
}

/// int_a^b s^n e^{g s} ds with possibly infinite ends.
cplx integrate(int n, cplx g, long double a, long double b)
{
    if (!(a < b))
        return 0;
    if (std::isinf(b) && !(g.real() < 0))
        divergent(g);
    if (std::isinf(a) && !(g.real() > 0))
        divergent(g);
    long double reach = std::max(std::isinf(a) ? 0.0L : std::fabs(a), std::isinf(b) ? 0.0L : std::fabs(b));
    // The antiderivative carries n!/g^{n+1}-sized terms that cancel unless
    // |g| reach exceeds about n; below that the power series loses at most
    // e^{|g| reach} relative to its result.
    if (!std::isinf(a) && !std::isinf(b) && std::abs(g) * reach < std::max(0.5L, n + 1.0L)) {
        // S_e = sum_l b^{e-1-l} a^l = (b^e - a^e)/(b - a), free of cancellation when a ~ b
        int e = n + 1;
        long double S = 0;
        long double ap = 1;
        for (int l = 0; l < e; ++l) {
            S = S * b + ap;
            ap *= a;
        }
        cplx sum = 0;
        cplx term = 1;  // g^k / k!
        for (int k = 0; k < 400; ++k) {
            cplx add = term * ((b - a) * S) / static_cast<long double>(e);
            sum += add;
            if (std::abs(add) <= 1e-21L * std::abs(sum) && std::abs(g) * reach < k + 1)
                break;
            term *= g / static_cast<long double>(k + 1);
            S = S * b + ap;
            ap *= a;
            ++e;
        }
        return sum;
    }
    Antiderivative ad = antiderivative(n, g, 1);
    cplx hi = std::isinf(b) ? cplx(0) : antiderivative_at(ad, n, g, b);
    cplx lo = std::isinf(a) ? cplx(0) : antiderivative_at(ad, n, g, a);
    return hi - lo;
}

/// Kernel term k(s) = coef s^power e^{rate s}, on s > 0 when causal and on s < 0 otherwise.
struct KernelTerm {
    cplx coef;
    int power;
    cplx rate;
    bool causal;
};

/// (k * f)(t) = int k(t - s) f(s) ds for one kernel term and one piece term.
void convolve_term(const KernelTerm& k, long double a, long double b, const ExpPolyTerm& f, std::vector<Piece>& out)
{
    const int m = k.power;
    const cplx alpha = k.rate;
    const cplx beta = f.rate;
    const cplx gamma = beta - alpha;
    const long double scale = std::max({1.0L, std::abs(alpha), std::abs(beta)});

    std::vector<ExpPolyTerm> inside;
    std::vector<ExpPolyTerm> outside;
    for (int i = 0; i <= m; ++i) {
        const cplx F = k.coef * f.coef * binom(m, i) * ((i % 2) ? -1.0L : 1.0L);
        const int n = i + f.power;
        Antiderivative ad = antiderivative(n, gamma, scale);
        const long double fixed_end = k.causal ? a : b;
        if (std::isinf(fixed_end) && (ad.poly || (k.causal ? !(gamma.real() > 0) : !(gamma.real() < 0))))
            divergent(gamma);
        cplx g_fixed = std::isinf(fixed_end) ? cplx(0) : antiderivative_at(ad, n, gamma, fixed_end);
        // causal: G(t) - G(a); anti-causal: G(b) - G(t)
        const long double sgn = k.causal ? 1.0L : -1.0L;
        if (ad.poly) {
            inside.push_back({sgn * F / static_cast<long double>(n + 1), m - i + n + 1, alpha});
        } else {
            for (int j = 0; j <= n; ++j)
                inside.push_back({sgn * F * ad.c[j], m - i + j, beta});
        }
        if (g_fixed != cplx(0))
            inside.push_back({-sgn * F * g_fixed, m - i, alpha});

        const long double far_end = k.causal ? b : a;
        if (!std::isinf(far_end)) {
            cplx total = integrate(n, gamma, a, b);
            outside.push_back({F * total, m - i, alpha});
        }
    }
    out.push_back({a, b, std::move(inside)});
    if (k.causal && !std::isinf(b))
        out.push_back({b, kInf, std::move(outside)});
    if (!k.causal && !std::isinf(a))
        out.push_back({-kInf, a, std::move(outside)});
}

std::vector<cplx> numeric_coeffs(const Polynomial& p)
{
    std::vector<cplx> c;
    for (const auto& x : p.coefficients())
        c.push_back(x.to_complex());
    return c;
}

/// Taylor coefficients of p around z: p(z + u) = sum b_j u^j.
std::vector<cplx> taylor_shift(std::vector<cplx> c, cplx z)
{
    const int n = static_cast<int>(c.size());
    for (int k = 0; k < n; ++k)
        for (int j = n - 2; j >= k; --j)
            c[j] += z * c[j + 1];
    return c;
}

std::vector<KernelTerm> kernel_terms(const RationalFn& proper_num_over_den, const Polynomial& den)
{
    std::vector<KernelTerm> ks;
    auto roots = find_roots(den);
    for (const auto& r : roots)
        if (near_axis(r.value))
            throw Error(ErrorCode::RootOnAxis, "pole on or near the real axis",
                        std::to_string(static_cast<double>(r.value.real())));
    std::vector<cplx> num = numeric_coeffs(proper_num_over_den.num());
    for (std::size_t idx = 0; idx < roots.size(); ++idx) {
        const cplx p = roots[idx].value;
        const int M = roots[idx].multiplicity;
        std::vector<cplx> nser = taylor_shift(num, p);
        nser.resize(std::max<std::size_t>(nser.size(), M), 0);
        std::vector<cplx> dser(M, 0);
        dser[0] = 1;
        for (std::size_t o = 0; o < roots.size(); ++o) {
            if (o == idx)
                continue;
            const cplx d = p - roots[o].value;
            for (int e = 0; e < roots[o].multiplicity; ++e)
                for (int j = M - 1; j >= 0; --j)
                    dser[j] = dser[j] * d + (j > 0 ? dser[j - 1] : cplx(0));
        }
        std::vector<cplx> h(M);
        for (int j = 0; j < M; ++j) {
            cplx s = nser[j];
            for (int l = 1; l <= j; ++l)
                s -= dser[l] * h[j - l];
            h[j] = s / dser[0];
        }
        const bool causal = p.imag() < 0;
        for (int j = 0; j < M; ++j) {
            const int m = M - j;
            const cplx A = h[j];
            if (A == cplx(0))
                continue;
            cplx c = A * std::pow(cplx(0, -1), m) / factorial(m - 1);
            if (!causal)
                c = -c;
            ks.push_back({c, m - 1, cplx(0, -1) * p, causal});
        }
    }
    return ks;
}

PiecewiseExpPoly apply_rational(const RationalFn& r, const PiecewiseExpPoly& f)
{
    const ComplexRational c = r.at_infinity();
    PiecewiseExpPoly out = scale(c.to_complex(), f);
    Polynomial rest = r.num() - r.den() * c;
    if (rest.is_zero() || f.is_zero())
        return out;
    std::vector<Piece> parts;
    for (const KernelTerm& k : kernel_terms(RationalFn(rest), r.den()))
        for (const Piece& pc : f.pieces())
            for (const ExpPolyTerm& t : pc.terms)
                convolve_term(k, pc.t0, pc.t1, t, parts);
    return out + PiecewiseExpPoly(std::move(parts));
}

} // namespace

PiecewiseExpPoly::PiecewiseExpPoly(std::vector<Piece> pieces)
{
    std::vector<long double> cuts;
    for (const Piece& p : pieces) {
        if (!(p.t0 < p.t1) || p.terms.empty())
            continue;
        cuts.push_back(p.t0);
        cuts.push_back(p.t1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), close_cut), cuts.end());

    std::vector<Piece> fine;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Piece q{cuts[i], cuts[i + 1], {}};
        for (const Piece& p : pieces)
            if ((p.t0 <= q.t0 || close_cut(p.t0, q.t0)) && (q.t1 <= p.t1 || close_cut(q.t1, p.t1)))
                q.terms.insert(q.terms.end(), p.terms.begin(), p.terms.end());
        q.terms = merge_terms(std::move(q.terms));
        fine.push_back(std::move(q));
    }
    // Terms are dropped against the largest term of their own piece: a piece
    // whose big terms cancel must not erase genuine small terms elsewhere.
    for (Piece& q : fine) {
        long double biggest = 0;
        for (const auto& t : q.terms)
            biggest = std::max(biggest, term_size(t, q.t0, q.t1));
        const long double cutoff = kDropRelative * biggest;
        std::erase_if(q.terms, [&](const ExpPolyTerm& t) { return !(term_size(t, q.t0, q.t1) > cutoff); });
        if (q.terms.empty())
            continue;
        if (!pieces_.empty() && pieces_.back().t1 == q.t0 &&
            same_terms(pieces_.back().terms, q.terms, std::max(max_coef(pieces_.back().terms), max_coef(q.terms))))
            pieces_.back().t1 = q.t1;
        else
            pieces_.push_back(std::move(q));
    }
}

PiecewiseExpPoly PiecewiseExpPoly::term(long double t0, long double t1, cplx coef, int power, cplx rate)
{
    return PiecewiseExpPoly({Piece{t0, t1, {ExpPolyTerm{coef, power, rate}}}});
}

cplx PiecewiseExpPoly::operator()(long double t) const
{
    for (const Piece& p : pieces_) {
        if (p.t0 <= t && t < p.t1) {
            cplx v = 0;
            for (const auto& term : p.terms)
                v += eval_term(term, t);
            return v;
        }
    }
    return 0;
}

long double PiecewiseExpPoly::support_min() const { return pieces_.empty() ? 0 : pieces_.front().t0; }
long double PiecewiseExpPoly::support_max() const { return pieces_.empty() ? 0 : pieces_.back().t1; }

PiecewiseExpPoly operator+(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g)
{
    std::vector<Piece> all = f.pieces_;
    all.insert(all.end(), g.pieces_.begin(), g.pieces_.end());
    return PiecewiseExpPoly(std::move(all));
}

PiecewiseExpPoly operator-(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) { return f + scale(-1, g); }

PiecewiseExpPoly operator*(cplx c, const PiecewiseExpPoly& f)
{
    if (c == cplx(0))
        return {};
    std::vector<Piece> out = f.pieces_;
    for (Piece& p : out)
        for (auto& t : p.terms)
            t.coef *= c;
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly psi(int j)
{
    if (j < 0)
        return scale(-1, reflect_J(psi(-j - 1)));
    std::vector<ExpPolyTerm> terms;
    for (int k = 0; k <= j; ++k) {
        long double c = std::numbers::sqrt2_v<long double> * binom(j, k) * std::pow(-2.0L, k) / factorial(k);
        terms.push_back({c, k, -1});
    }
    return PiecewiseExpPoly({Piece{0, kInf, std::move(terms)}});
}

cplx FourierImage::operator()(long double lambda) const
{
    cplx sum = 0;
    for (const Piece& p : f_.pieces())
        for (const auto& t : p.terms)
            sum += t.coef * integrate(t.power, t.rate + cplx(0, lambda), p.t0, p.t1);
    return sum;
}

FourierImage fourier(const PiecewiseExpPoly& f) { return FourierImage(f); }

PiecewiseExpPoly add(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) { return f + g; }
PiecewiseExpPoly scale(cplx c, const PiecewiseExpPoly& f) { return c * f; }

PiecewiseExpPoly reflect_J(const PiecewiseExpPoly& f)
{
    std::vector<Piece> out;
    for (const Piece& p : f.pieces()) {
        Piece q{-p.t1, -p.t0, {}};
        for (const auto& t : p.terms)
            q.terms.push_back({(t.power % 2) ? -t.coef : t.coef, t.power, -t.rate});
        out.push_back(std::move(q));
    }
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly shift(const PiecewiseExpPoly& f, long double delta)
{
    if (delta == 0)
        return f;
    std::vector<Piece> out;
    for (const Piece& p : f.pieces()) {
        Piece q{p.t0 + delta, p.t1 + delta, {}};
        for (const auto& t : p.terms) {
            const cplx base = t.coef * std::exp(-t.rate * delta);
            for (int i = 0; i <= t.power; ++i)
                q.terms.push_back({base * binom(t.power, i) * std::pow(-delta, t.power - i), i, t.rate});
        }
        out.push_back(std::move(q));
    }
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly restrict_to(const PiecewiseExpPoly& f, long double a, long double b)
{
    std::vector<Piece> out;
    for (const Piece& p : f.pieces()) {
        Piece q{std::max(p.t0, a), std::min(p.t1, b), p.terms};
        if (q.t0 < q.t1)
            out.push_back(std::move(q));
    }
    return PiecewiseExpPoly(std::move(out));
}

PiecewiseExpPoly restrict_plus(const PiecewiseExpPoly& f) { return restrict_to(f, 0, kInf); }
PiecewiseExpPoly restrict_minus(const PiecewiseExpPoly& f) { return restrict_to(f, -kInf, 0); }

PiecewiseExpPoly apply_W0(const SymbolExpr& a, const PiecewiseExpPoly& f)
{
    PiecewiseExpPoly g = apply_rational(a.rat(), f);
    return shift(g, to_long_double(a.delta()));
}

PiecewiseExpPoly wh_apply(const SymbolExpr& a, const PiecewiseExpPoly& f)
{
    return restrict_plus(apply_W0(a, restrict_plus(f)));
}

PiecewiseExpPoly hankel_apply(const SymbolExpr& b, const PiecewiseExpPoly& f)
{
    return restrict_plus(apply_W0(b, restrict_minus(reflect_J(f))));
}

cplx inner_product(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g)
{
    cplx sum = 0;
    for (const Piece& p : f.pieces()) {
        for (const Piece& q : g.pieces()) {
            long double a = std::max(p.t0, q.t0);
            long double b = std::min(p.t1, q.t1);
            if (!(a < b))
                continue;
            for (const auto& s : p.terms)
                for (const auto& t : q.terms)
                    sum += s.coef * std::conj(t.coef) * integrate(s.power + t.power, s.rate + std::conj(t.rate), a, b);
        }
    }
    return sum;
}

long double l2_norm(const PiecewiseExpPoly& f) { return std::sqrt(std::max(0.0L, inner_product(f, f).real())); }

long double l2_distance(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) { return l2_norm(f - g); }

PiecewiseExpPoly reflect_window(const PiecewiseExpPoly& f, long double L)
{
    return restrict_to(shift(reflect_J(f), L), 0, L);
}

std::vector<cplx> sample(const PiecewiseExpPoly& f, const std::vector<long double>& grid)
{
    std::vector<cplx> out;
    out.reserve(grid.size());
    for (long double t : grid)
        out.push_back(f(t));
    return out;
}

PiecewiseExpPoly polynomial_on(const std::vector<cplx>& coeffs, long double t0, long double t1)
{
    Piece p{t0, t1, {}};
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        p.terms.push_back({coeffs[k], static_cast<int>(k), 0});
    return PiecewiseExpPoly({std::move(p)});
}

nlohmann::json to_json(const PiecewiseExpPoly& f)
{
    auto end = [](long double x) { return std::isinf(x) ? nlohmann::json(nullptr) : nlohmann::json(static_cast<double>(x)); };
    nlohmann::json pieces = nlohmann::json::array();
    for (const Piece& p : f.pieces()) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : p.terms)
            terms.push_back({{"coef", {static_cast<double>(t.coef.real()), static_cast<double>(t.coef.imag())}},
                             {"power", t.power},
                             {"rate", {static_cast<double>(t.rate.real()), static_cast<double>(t.rate.imag())}}});
        pieces.push_back({{"t0", end(p.t0)}, {"t1", end(p.t1)}, {"terms", terms}});
    }
    return pieces;
}

PiecewiseExpPoly piecewise_from_json(const nlohmann::json& j)
{
    std::vector<Piece> pieces;
    try {
        for (const auto& p : j) {
            Piece q;
            q.t0 = p.at("t0").is_null() ? -kInf : p.at("t0").get<double>();
            q.t1 = p.at("t1").is_null() ? kInf : p.at("t1").get<double>();
            for (const auto& t : p.at("terms")) {
                const auto& c = t.at("coef");
                const auto& r = t.at("rate");
                q.terms.push_back({cplx(c.at(0).get<double>(), c.at(1).get<double>()), t.at("power").get<int>(),
                                   cplx(r.at(0).get<double>(), r.at(1).get<double>())});
            }
            pieces.push_back(std::move(q));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("bad piecewise function: ") + e.what());
    }
    return PiecewiseExpPoly(std::move(pieces));
}

} // namespace whh
