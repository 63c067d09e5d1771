#include "whh/polynomial.hpp"

#include <stdexcept>

namespace whh {

Polynomial::Polynomial(std::vector<ComplexRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<ComplexRational> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(const ComplexRational& constant)
{
    if (!constant.is_zero())
        coeffs_.push_back(constant);
}

Polynomial Polynomial::linear(const ComplexRational& root) { return Polynomial({-root, 1}); }

Polynomial Polynomial::monomial(int degree, const ComplexRational& coef)
{
    std::vector<ComplexRational> c(static_cast<std::size_t>(degree) + 1);
    c.back() = coef;
    return Polynomial(std::move(c));
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back().is_zero())
        coeffs_.pop_back();
}

ComplexRational Polynomial::coef(int k) const
{
    if (k < 0 || k > degree())
        return 0;
    return coeffs_[static_cast<std::size_t>(k)];
}

ComplexRational Polynomial::operator()(const ComplexRational& t) const
{
    ComplexRational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= t;
        acc += *it;
    }
    return acc;
}

std::complex<long double> Polynomial::operator()(std::complex<long double> t) const
{
    std::complex<long double> acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * t + it->to_complex();
    return acc;
}

Polynomial Polynomial::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<ComplexRational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = coeffs_[k] * ComplexRational(static_cast<int>(k));
    return Polynomial(std::move(d));
}

Polynomial Polynomial::reflected() const
{
    auto c = coeffs_;
    for (std::size_t k = 1; k < c.size(); k += 2)
        c[k] = -c[k];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::conjugated() const
{
    auto c = coeffs_;
    for (auto& x : c)
        x = x.conj();
    return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const
{
    if (is_zero())
        return {};
    Polynomial out(*this);
    ComplexRational inv = ComplexRational(1) / leading();
    for (auto& x : out.coeffs_)
        x *= inv;
    return out;
}

std::pair<Polynomial, Polynomial> Polynomial::real_imag_parts() const
{
    std::vector<ComplexRational> re, im;
    for (const auto& x : coeffs_) {
        re.emplace_back(x.re());
        im.emplace_back(x.im());
    }
    return {Polynomial(std::move(re)), Polynomial(std::move(im))};
}

bool Polynomial::has_real_coefficients() const
{
    for (const auto& x : coeffs_)
        if (!x.is_real())
            return false;
    return true;
}

Polynomial Polynomial::pow(unsigned e) const
{
    Polynomial out(1), base(*this);
    while (e) {
        if (e & 1u)
            out *= base;
        e >>= 1u;
        if (e)
            base *= base;
    }
    return out;
}

Polynomial Polynomial::operator-() const
{
    Polynomial out(*this);
    for (auto& x : out.coeffs_)
        x = -x;
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    if (o.coeffs_.size() > coeffs_.size())
        coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
        coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += -o; }

Polynomial& Polynomial::operator*=(const Polynomial& o)
{
    if (is_zero() || o.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<ComplexRational> out(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const ComplexRational& c)
{
    for (auto& x : coeffs_)
        x *= c;
    trim();
    return *this;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b)
{
    if (b.is_zero())
        throw std::domain_error("Polynomial::divmod: division by zero polynomial");
    std::vector<ComplexRational> rem = a.coeffs_;
    int db = b.degree();
    int da = a.degree();
    if (da < db)
        return {Polynomial(), a};
    std::vector<ComplexRational> quot(static_cast<std::size_t>(da - db) + 1);
    ComplexRational inv_lead = ComplexRational(1) / b.leading();
    for (int k = da - db; k >= 0; --k) {
        ComplexRational q = rem[static_cast<std::size_t>(k + db)] * inv_lead;
        quot[static_cast<std::size_t>(k)] = q;
        if (q.is_zero())
            continue;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(k + j)] -= q * b.coeffs_[static_cast<std::size_t>(j)];
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b)
{
    while (!b.is_zero()) {
        Polynomial r = divmod(a, b).second;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

std::string Polynomial::to_string() const
{
    if (is_zero())
        return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
        const auto& c = coeffs_[static_cast<std::size_t>(k)];
        if (c.is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        out += whh::to_string(c);
        if (k == 1)
            out += "*t";
        else if (k > 1)
            out += "*t^" + std::to_string(k);
    }
    return out;
}

} // namespace whh
