#include "whh/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "whh/errors.hpp"

namespace whh {

namespace {

std::vector<ComplexLD> to_complex(const Polynomial& p)
{
    std::vector<ComplexLD> c;
    for (const auto& x : p.coefficients())
        c.push_back(x.to_complex());
    return c;
}

struct EvalResult {
    ComplexLD value;
    ComplexLD deriv;
};

EvalResult horner(const std::vector<ComplexLD>& c, ComplexLD z)
{
    ComplexLD v(0), d(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        d = d * z + v;
        v = v * z + *it;
    }
    return {v, d};
}

int sign_at(const Polynomial& p, const Rational& x)
{
    Rational acc = 0;
    const auto& c = p.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + it->re();
    return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
}

int sign_changes(const std::vector<int>& signs)
{
    int changes = 0, last = 0;
    for (int s : signs) {
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

std::vector<Polynomial> sturm_sequence(const Polynomial& p)
{
    std::vector<Polynomial> seq{p, p.derivative()};
    while (!seq.back().is_zero()) {
        Polynomial r = Polynomial::divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero())
            break;
        seq.push_back(-r);
    }
    return seq;
}

int sturm_count_at(const std::vector<Polynomial>& seq, const Rational& x)
{
    std::vector<int> signs;
    for (const auto& q : seq)
        signs.push_back(sign_at(q, x));
    return sign_changes(signs);
}

int sturm_count_at_infinity(const std::vector<Polynomial>& seq, bool positive)
{
    std::vector<int> signs;
    for (const auto& q : seq) {
        int s = q.leading().re() > 0 ? 1 : -1;
        if (!positive && q.degree() % 2 == 1)
            s = -s;
        signs.push_back(s);
    }
    return sign_changes(signs);
}

std::string describe(ComplexLD z)
{
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::fabs(z.imag()) << "i";
    return os.str();
}

std::optional<ComplexRational> recover_exact(const Polynomial& p, ComplexLD z)
{
    constexpr long long kMaxDen = 1000000;
    ComplexRational q(rationalize(z.real(), kMaxDen), rationalize(z.imag(), kMaxDen));
    if (std::abs(q.to_complex() - z) > 1e-8L * (1 + std::abs(z)))
        return std::nullopt;
    if (p(q).is_zero())
        return q;
    return std::nullopt;
}

/// Monic factor prod (t - z) over the given roots, exact when every root is
/// exact, otherwise recovered by rationalizing the numeric coefficients.
Polynomial exact_factor(const Polynomial& s, const std::vector<Root>& roots)
{
    Polynomial f(1);
    bool all_exact = std::all_of(roots.begin(), roots.end(), [](const Root& r) { return r.exact.has_value(); });
    if (all_exact) {
        for (const auto& r : roots)
            f *= Polynomial::linear(*r.exact);
        return f;
    }
    std::vector<ComplexLD> c{1};
    for (const auto& r : roots) {
        std::vector<ComplexLD> next(c.size() + 1, 0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r.value * c[k];
        }
        c = std::move(next);
    }
    std::vector<ComplexRational> q;
    for (const auto& x : c) {
        ComplexRational v(rationalize(x.real(), 1000000), rationalize(x.imag(), 1000000));
        if (std::abs(v.to_complex() - x) > 1e-7L * (1 + std::abs(x)))
            throw Error(ErrorCode::FactorNotExact,
                        "half-plane factor of " + s.to_string() + " has no Gaussian-rational coefficients");
        q.push_back(v);
    }
    f = Polynomial(std::move(q));
    if (!Polynomial::divmod(s, f).second.is_zero())
        throw Error(ErrorCode::FactorNotExact,
                    "half-plane factor of " + s.to_string() + " has no Gaussian-rational coefficients");
    return f;
}

} // namespace

std::vector<std::pair<Polynomial, int>> square_free_decomposition(const Polynomial& p)
{
    std::vector<std::pair<Polynomial, int>> out;
    if (p.degree() < 1)
        return out;
    Polynomial f = p.monic();
    Polynomial fp = f.derivative();
    Polynomial a = Polynomial::gcd(f, fp);
    Polynomial b = Polynomial::divmod(f, a).first;
    Polynomial c = Polynomial::divmod(fp, a).first;
    Polynomial d = c - b.derivative();
    int k = 1;
    while (b.degree() >= 1) {
        Polynomial g = Polynomial::gcd(b, d);
        if (g.degree() >= 1)
            out.emplace_back(g.monic(), k);
        b = Polynomial::divmod(b, g).first;
        c = Polynomial::divmod(d, g).first;
        d = c - b.derivative();
        ++k;
    }
    return out;
}

std::vector<ComplexLD> aberth_roots(const Polynomial& p)
{
    int n = p.degree();
    if (n < 1)
        return {};
    auto c = to_complex(p);
    if (n == 1)
        return {-c[0] / c[1]};

    // Initial guesses on a circle sized by the Fujiwara-type bound.
    long double radius = 0;
    for (int k = 0; k < n; ++k)
        radius = std::max(radius, std::pow(std::abs(c[static_cast<std::size_t>(k)] / c.back()),
                                           1.0L / static_cast<long double>(n - k)));
    radius = std::max(radius, 1e-3L);
    ComplexLD centre = -c[static_cast<std::size_t>(n - 1)] / (static_cast<long double>(n) * c.back());
    std::vector<ComplexLD> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        long double ang = 2 * std::numbers::pi_v<long double> * k / n + 0.4L;
        z[static_cast<std::size_t>(k)] = centre + radius * ComplexLD(std::cos(ang), std::sin(ang));
    }

    for (int iter = 0; iter < 500; ++iter) {
        long double max_step = 0;
        for (int k = 0; k < n; ++k) {
            auto [v, d] = horner(c, z[static_cast<std::size_t>(k)]);
            if (v == ComplexLD(0))
                continue;
            ComplexLD w = v / d;
            ComplexLD s(0);
            for (int j = 0; j < n; ++j)
                if (j != k)
                    s += 1.0L / (z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)]);
            ComplexLD step = w / (1.0L - w * s);
            z[static_cast<std::size_t>(k)] -= step;
            max_step = std::max(max_step, std::abs(step) / (1 + std::abs(z[static_cast<std::size_t>(k)])));
        }
        if (max_step < 1e-18L)
            break;
    }
    for (auto& r : z) {
        for (int iter = 0; iter < 3; ++iter) {
            auto [v, d] = horner(c, r);
            if (d == ComplexLD(0) || v == ComplexLD(0))
                break;
            r -= v / d;
        }
    }
    return z;
}

std::vector<Root> find_roots(const Polynomial& p)
{
    std::vector<Root> out;
    for (const auto& [s, mult] : square_free_decomposition(p)) {
        for (const auto& z : aberth_roots(s)) {
            Root r{z, mult, recover_exact(s, z)};
            if (r.exact)
                r.value = r.exact->to_complex();
            out.push_back(r);
        }
    }
    return out;
}

std::optional<long double> real_root_witness(const Polynomial& p)
{
    if (p.degree() < 1)
        return std::nullopt;
    auto [re, im] = p.real_imag_parts();
    Polynomial h = Polynomial::gcd(re, im);
    if (h.degree() < 1)
        return std::nullopt;
    Polynomial g = Polynomial::gcd(h, h.derivative());
    h = Polynomial::divmod(h, g).first.monic();
    auto seq = sturm_sequence(h);
    int total = sturm_count_at_infinity(seq, false) - sturm_count_at_infinity(seq, true);
    if (total == 0)
        return std::nullopt;

    Rational bound = 1;
    for (int k = 0; k < h.degree(); ++k) {
        Rational a = h.coef(k).re();
        bound += a < 0 ? Rational(-a) : a;
    }
    Rational lo = -bound, hi = bound;
    // Shrink (lo, hi] while it keeps containing a root.
    for (int iter = 0; iter < 60; ++iter) {
        Rational mid = (lo + hi) / 2;
        if (sturm_count_at(seq, lo) - sturm_count_at(seq, mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    Rational mid = (lo + hi) / 2;
    Rational snapped = rationalize(to_long_double(mid), 1000000);
    if (sign_at(h, snapped) == 0)
        return to_long_double(snapped);
    return to_long_double(mid);
}

bool near_axis(ComplexLD z) { return std::fabs(z.imag()) < kAxisTolerance * (1 + std::abs(z)); }

namespace {

void check_axis(const Polynomial& p, const std::vector<Root>& roots)
{
    if (auto w = real_root_witness(p)) {
        std::ostringstream os;
        os.precision(12);
        os << *w;
        throw Error(ErrorCode::RootOnAxis, "real root of " + p.to_string(), os.str());
    }
    for (const auto& r : roots)
        if (near_axis(r.value))
            throw Error(ErrorCode::RootOnAxis, "root within axis tolerance of " + p.to_string(),
                        describe(r.value));
}

} // namespace

std::pair<int, int> count_half_planes(const Polynomial& p)
{
    auto roots = find_roots(p);
    check_axis(p, roots);
    int up = 0, low = 0;
    for (const auto& r : roots)
        (r.value.imag() > 0 ? up : low) += r.multiplicity;
    return {up, low};
}

HalfPlaneSplit split_half_planes(const Polynomial& p)
{
    HalfPlaneSplit out;
    out.leading = p.leading();
    out.upper = Polynomial(1);
    out.lower = Polynomial(1);
    if (p.degree() < 1)
        return out;
    check_axis(p, {});
    for (const auto& [s, mult] : square_free_decomposition(p)) {
        std::vector<Root> up, low;
        for (const auto& z : aberth_roots(s)) {
            Root r{z, mult, recover_exact(s, z)};
            if (r.exact)
                r.value = r.exact->to_complex();
            if (near_axis(r.value))
                throw Error(ErrorCode::RootOnAxis, "root within axis tolerance of " + p.to_string(),
                            describe(r.value));
            (z.imag() > 0 ? up : low).push_back(r);
        }
        Polynomial fu = exact_factor(s, up);
        Polynomial fl = Polynomial::divmod(s, fu).first;
        out.upper *= fu.pow(static_cast<unsigned>(mult));
        out.lower *= fl.monic().pow(static_cast<unsigned>(mult));
        out.upper_count += static_cast<int>(up.size()) * mult;
        out.lower_count += static_cast<int>(low.size()) * mult;
    }
    return out;
}

} // namespace whh
