#include "doctest.h"

#include <random>

#include "test_support.hpp"
#include "whh/errors.hpp"
#include "whh/factorization.hpp"
#include "whh/roots.hpp"

using namespace whh;
using namespace whh::testing;

namespace {

const ComplexRational I = ComplexRational::i();

void check_half_planes(const Factorization& f)
{
    for (const Polynomial* p : {&f.g_plus.rat().num(), &f.g_plus.rat().den()})
        CHECK(count_half_planes(*p).first == 0);
    for (const Polynomial* p : {&f.g_minus.rat().num(), &f.g_minus.rat().den()})
        CHECK(count_half_planes(*p).second == 0);
}

} // namespace

TEST_CASE("factorization of the Cayley factor")
{
    auto f = wiener_hopf_factorize(SymbolExpr::cayley(1));
    CHECK(f.g_minus == SymbolExpr::constant(1));
    CHECK(f.g_plus == SymbolExpr::constant(1));
    CHECK(f.nu == 0);
    CHECK(f.n == 1);
}

TEST_CASE("factorization of (t+2i)/(t-2i)")
{
    SymbolExpr g = rat_symbol(lin(gi(0, -2)), lin(gi(0, 2)));
    auto f = wiener_hopf_factorize(g);
    CHECK(f.n == -1);
    CHECK(f.nu == 0);
    // g_minus = 2(t - i)/(t - 2i), g_plus = (t + 2i)/(2(t + i))
    CHECK(f.g_minus == rat_symbol(lin(I) * ComplexRational(2), lin(gi(0, 2))));
    CHECK(f.g_plus == rat_symbol(lin(gi(0, -2)), lin(-I) * ComplexRational(2)));
    CHECK(evaluate_exact(f.g_minus, 0) == ComplexRational(1));
    CHECK(f.reassemble() == g);
}

TEST_CASE("factorization of a pure exponential")
{
    auto f = wiener_hopf_factorize(SymbolExpr::exponential(-1));
    CHECK(f.g_minus == SymbolExpr::constant(1));
    CHECK(f.g_plus == SymbolExpr::constant(1));
    CHECK(f.nu == -1);
    CHECK(f.n == 0);
}

TEST_CASE("factorization rejects non-invertible symbols")
{
    try {
        wiener_hopf_factorize(rat_symbol(Polynomial({0, 1}), lin(-I)));
        FAIL("expected NotInvertibleInG");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInvertibleInG);
    }
}

TEST_CASE("factor splitting needs Gaussian-rational half-plane factors")
{
    // t^2 + 2 has roots +-i*sqrt(2), one per half-plane.
    SymbolExpr g = rat_symbol(Polynomial({gi(2, 0), 0, 1}), lin(I) * lin(-I));
    try {
        wiener_hopf_factorize(g);
        FAIL("expected FactorNotExact");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FactorNotExact);
    }
    // (t^2 + 2t + 2)(t^2 - ...) with both irrational roots in one half-plane
    // still splits exactly: roots -1 +- i are in different half-planes but are
    // Gaussian rationals.
    SymbolExpr h = rat_symbol(Polynomial({gi(2, 0), gi(2, 0), 1}), lin(I) * lin(-I));
    auto f = wiener_hopf_factorize(h);
    CHECK(f.reassemble() == h);
    CHECK(f.n == 0);
}

TEST_CASE("matching factorization and sigma")
{
    auto f1 = matching_factorize(SymbolExpr::cayley(1));
    CHECK(*f1.sigma == 1);
    auto f2 = matching_factorize(SymbolExpr::cayley(-2));
    CHECK(f2.n == -2);
    CHECK(*f2.sigma == 1);
    SymbolExpr g = rat_symbol(lin(gi(0, -2)), lin(gi(0, 2)));
    auto f3 = matching_factorize(g);
    CHECK(*f3.sigma == 1);
    CHECK(f3.g_minus == SymbolExpr::constant(*f3.sigma) * invert(reflect(f3.g_plus)));

    auto neg = matching_factorize(SymbolExpr::constant(-1) * g);
    CHECK(*neg.sigma == -1);

    CHECK_THROWS_AS(matching_factorize(rat_symbol(lin(gi(0, -2)), lin(gi(0, 3)))), Error);
}

TEST_CASE("reassembly and half-plane purity on random symbols")
{
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        SymbolExpr g = random_symbol(rng, 1 + trial % 4, Rational(trial % 5 - 2, 3));
        auto f = wiener_hopf_factorize(g);
        CHECK(f.reassemble() == g);
        CHECK(evaluate_exact(f.g_minus, 0) == ComplexRational(1));
        CHECK(f.n == n_index(g));
        CHECK(f.nu == nu_index(g));
        check_half_planes(f);
    }
}

TEST_CASE("sigma is shared by the split symbols")
{
    std::mt19937 rng(17);
    int seen_neg = 0;
    for (int trial = 0; trial < 30; ++trial) {
        SymbolExpr g = random_matching_function(rng, 1 + trial % 3, Rational(-1 - trial % 2));
        auto f = matching_factorize(g);
        REQUIRE(f.sigma);
        CHECK((*f.sigma == 1 || *f.sigma == -1));
        seen_neg += *f.sigma == -1;
        auto split = split_symbols(f);
        CHECK(is_matching_function(split.g1));
        CHECK(is_matching_function(split.g2));
        CHECK(*matching_factorize(split.g1).sigma == *f.sigma);
        CHECK(*matching_factorize(split.g2).sigma == *f.sigma);
        CHECK(SymbolExpr::exponential(f.nu) * split.g1 == g);
        CHECK(SymbolExpr::cayley(f.n) * split.g2 == g);
    }
    CHECK(seen_neg > 0);
}
