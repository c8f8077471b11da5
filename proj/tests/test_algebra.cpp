#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "stpete/expansion.hpp"

using namespace stpete;

namespace {

MomentPolynomial C(long num, long den = 1) { return MomentPolynomial(Rational(num, den)); }
MomentPolynomial mu(unsigned j) { return MomentPolynomial::mu(j); }

// the fifteen d_{k,j} of total order <= 4 (orders 2..4 plus the three zeros)
std::map<std::pair<int, int>, MomentPolynomial> paper_d_list()
{
    std::map<std::pair<int, int>, MomentPolynomial> d;
    d[{0, 0}] = MomentPolynomial();
    d[{0, 1}] = MomentPolynomial();
    d[{1, 0}] = MomentPolynomial();
    d[{0, 2}] = C(-1, 2);
    d[{1, 1}] = mu(1);
    d[{2, 0}] = C(-1, 2) * mu(1) * mu(1) + C(1, 2) * mu(2);
    d[{0, 3}] = C(1, 3);
    d[{1, 2}] = C(-1) * mu(1);
    d[{2, 1}] = mu(1) * mu(1) - C(1, 2) * mu(2);
    d[{3, 0}] = C(-1, 3) * mu(1) * mu(1) * mu(1) + C(1, 2) * mu(1) * mu(2) -
                C(1, 6) * mu(3);
    d[{0, 4}] = C(-1, 4);
    d[{1, 3}] = mu(1);
    d[{2, 2}] = C(-3, 2) * mu(1) * mu(1) + C(1, 2) * mu(2);
    d[{3, 1}] = mu(1) * mu(1) * mu(1) - mu(1) * mu(2) + C(1, 6) * mu(3);
    d[{4, 0}] = C(-1, 4) * mu(1) * mu(1) * mu(1) * mu(1) +
                C(1, 2) * mu(1) * mu(1) * mu(2) - C(1, 6) * mu(1) * mu(3) +
                C(-1, 8) * mu(2) * mu(2) + C(1, 24) * mu(4);
    return d;
}

const ExpansionTerm* find_term(const ExpansionTermTable& t, int k, int y_power,
                               int nk, int nj, int lp = 0)
{
    for (const auto& term : t.terms)
        if (term.k == k && term.y_power == y_power && term.k_over_alpha == nk &&
            term.j_plain == nj && term.log_power == lp)
            return &term;
    return nullptr;
}

} // namespace

TEST_CASE("generated d table reproduces the fifteen listed polynomials exactly")
{
    DTable d(4, AlphaCase::general);
    auto want = paper_d_list();
    for (const auto& [kj, poly] : want) {
        CAPTURE(kj.first);
        CAPTURE(kj.second);
        CHECK(d.at(kj.first, kj.second) == poly);
    }
    CHECK_THROWS_AS(d.at(3, 2), insufficient_order_error);
}

TEST_CASE("alpha=1 d table is the mu_1 -> 0 substitution of the general one")
{
    DTable d(5, AlphaCase::general);
    DTable d1(5, AlphaCase::alpha1);
    for (int k = 0; k <= 5; ++k)
        for (int j = 0; k + j <= 5; ++j) {
            CAPTURE(k);
            CAPTURE(j);
            CHECK(d1.at(k, j) == d.at(k, j).drop_mu1());
        }
    CHECK(d1.at(1, 1).is_zero());
}

TEST_CASE("w coefficients")
{
    DTable d(6, AlphaCase::general);
    CHECK(w_coefficient(1, 0, 2, d) == C(1, 3));             // d_{0,3}
    CHECK(w_coefficient(2, 0, 2, d) == C(1, 4));             // d_{0,2}^2
    CHECK(w_coefficient(1, 1, 1, d) == C(-1) * mu(1));       // d_{1,2}
    CHECK(w_coefficient(2, 2, 0, d) ==
          C(3, 2) * mu(1) * mu(1) - C(1, 2) * mu(2));        // d11^2 + 2 d20 d02

    // zero rule, exhaustively over a small box
    DTable dz(8, AlphaCase::general);
    for (int m = 1; m <= 6; ++m)
        for (int k = 0; k <= 8; ++k)
            for (int j = -(k / 2); j <= 8 - k; ++j) {
                int L = std::max({-(k / 2), -m, m - k});
                if (j < L) {
                    CAPTURE(m);
                    CAPTURE(k);
                    CAPTURE(j);
                    CHECK(w_coefficient(m, k, j, dz).is_zero());
                }
            }
}

TEST_CASE("series-composition identity: w is the exponential image of d")
{
    // exp(sum d_{k,s} u^k w^s), truncated to total order <= 4, must equal
    // 1 + sum_{m} w_{m,k,S-m} u^k w^S / m! cell for cell
    const int ORD = 4;
    DTable d(ORD, AlphaCase::general);
    BivariateSeries D(ORD);
    for (int k = 0; k <= ORD; ++k)
        for (int s = 0; k + s <= ORD; ++s) D.add(k, s, d.at(k, s));

    BivariateSeries E(ORD);
    E.add(0, 0, MomentPolynomial(Rational(1)));
    BivariateSeries pow = D;
    Rational fact(1);
    for (int m = 1; m <= ORD; ++m) {
        fact *= m;
        BivariateSeries term = pow;
        term *= Rational(1) / fact;
        E += term;
        if (m < ORD) pow = pow * D;
    }

    for (int k = 0; k <= ORD; ++k)
        for (int S = 0; k + S <= ORD; ++S) {
            MomentPolynomial expect;
            if (k == 0 && S == 0) expect = MomentPolynomial(Rational(1));
            Rational mf(1);
            for (int m = 1; m <= k + S; ++m) {
                mf *= m;
                if (S - m < -(k / 2)) break;
                MomentPolynomial w = w_coefficient(m, k, S - m, d);
                w *= Rational(1) / mf;
                expect += w;
            }
            CAPTURE(k);
            CAPTURE(S);
            CHECK(E.coeff(k, S) == expect);
        }
}

TEST_CASE("expansion term table matches the G_{n,1} display")
{
    ExpansionTermTable t = expansion_terms(AlphaCase::general, 1);
    REQUIRE(t.terms.size() == 3);
    const ExpansionTerm* a = find_term(t, 0, 2, 0, 1);
    REQUIRE(a);
    CHECK(a->coefficient == C(-1, 2));
    const ExpansionTerm* b = find_term(t, 1, 1, 1, 0);
    REQUIRE(b);
    CHECK(b->coefficient == mu(1));
    const ExpansionTerm* c = find_term(t, 2, 0, 2, -1);
    REQUIRE(c);
    CHECK(c->coefficient == C(-1, 2) * mu(1) * mu(1) + C(1, 2) * mu(2));
}

TEST_CASE("expansion term table matches the G_{n,2} display")
{
    ExpansionTermTable t = expansion_terms(AlphaCase::general, 2);
    // ell = 2 adds nine transform terms (seven n-power groups) to G_{n,1}
    REQUIRE(t.terms.size() == 3 + 9);

    CHECK(find_term(t, 0, 3, 0, 2)->coefficient == C(8, 24));
    CHECK(find_term(t, 0, 4, 0, 2)->coefficient == C(3, 24));
    CHECK(find_term(t, 1, 2, 1, 1)->coefficient == C(-1) * mu(1));
    CHECK(find_term(t, 1, 3, 1, 1)->coefficient == C(-1, 2) * mu(1));
    CHECK(find_term(t, 2, 1, 2, 0)->coefficient ==
          mu(1) * mu(1) - C(1, 2) * mu(2));
    CHECK(find_term(t, 2, 2, 2, 0)->coefficient ==
          C(3, 4) * mu(1) * mu(1) - C(1, 4) * mu(2));
    CHECK(find_term(t, 3, 0, 3, -1)->coefficient ==
          C(-1, 3) * mu(1) * mu(1) * mu(1) + C(1, 2) * mu(1) * mu(2) - C(1, 6) * mu(3));
    CHECK(find_term(t, 3, 1, 3, -1)->coefficient ==
          C(-1, 2) * (mu(1) * mu(1) * mu(1) - mu(1) * mu(2)));
    CHECK(find_term(t, 4, 0, 4, -2)->coefficient ==
          C(1, 8) * (mu(1) * mu(1) - mu(2)) * (mu(1) * mu(1) - mu(2)));
}

TEST_CASE("alpha=1 term table matches the G_{n,1}^{1,p} display")
{
    ExpansionTermTable t = expansion_terms(AlphaCase::alpha1, 1);
    // -G^{(0,2)}/(2n) + (pr log_r n) G^{(1,1)}/n - ((pr log_r n)^2 - mu_2) G^{(2,0)}/(2n)
    const ExpansionTerm* a = find_term(t, 0, 2, 0, 1, 0);
    REQUIRE(a);
    CHECK(a->coefficient == C(-1, 2));
    const ExpansionTerm* b = find_term(t, 1, 1, 0, 1, 1);
    REQUIRE(b);
    CHECK(b->coefficient == MomentPolynomial::lam());
    const ExpansionTerm* c = find_term(t, 2, 0, 0, 1, 2);
    REQUIRE(c);
    CHECK(c->coefficient == MomentPolynomial::lam(2) * Rational(-1, 2));
    const ExpansionTerm* e = find_term(t, 2, 0, 0, 1, 0);
    REQUIRE(e);
    CHECK(e->coefficient == C(1, 2) * mu(2));
}

TEST_CASE("simplified tables match the theorem displays")
{
    // ell = 2, alpha < 1: G - G^{(0,2)}/(2n)
    ExpansionTermTable t2 = simplified_terms(2, AlphaRegime::below1, false);
    REQUIRE(t2.terms.size() == 1);
    CHECK(t2.terms[0].k == 0);
    CHECK(t2.terms[0].y_power == 2);
    CHECK(t2.terms[0].j_plain == 1);
    CHECK(t2.terms[0].coefficient == C(-1, 2));

    // ell = 3 adds (8 G^{(0,3)} + 3 G^{(0,4)}) / (24 n^2)
    ExpansionTermTable t3 = simplified_terms(3, AlphaRegime::below1, false);
    CHECK(find_term(t3, 0, 3, 0, 2)->coefficient == C(8, 24));
    CHECK(find_term(t3, 0, 4, 0, 2)->coefficient == C(3, 24));

    // ell = 4 adds -(12 G^{(0,4)} + 8 G^{(0,5)} + G^{(0,6)}) / (48 n^3)
    ExpansionTermTable t4 = simplified_terms(4, AlphaRegime::below1, false);
    CHECK(find_term(t4, 0, 4, 0, 3)->coefficient == C(-12, 48));
    CHECK(find_term(t4, 0, 5, 0, 3)->coefficient == C(-8, 48));
    CHECK(find_term(t4, 0, 6, 0, 3)->coefficient == C(-1, 48));

    // alpha in (1,2), ell = 2: G - (mu1^2 - mu2) G^{(2,0)} / (2 n^{(2-alpha)/alpha})
    ExpansionTermTable s2 = simplified_terms(2, AlphaRegime::above1, false);
    REQUIRE(s2.terms.size() == 1);
    const ExpansionTerm* s = find_term(s2, 2, 0, 2, -1);
    REQUIRE(s);
    CHECK(s->coefficient == C(-1, 2) * (mu(1) * mu(1) - mu(2)));

    // tilde-tilde adds mu1 G^{(1,1)} / n^{1/alpha}
    ExpansionTermTable tt = simplified_terms(2, AlphaRegime::above1, true);
    const ExpansionTerm* u = find_term(tt, 1, 1, 1, 0);
    REQUIRE(u);
    CHECK(u->coefficient == mu(1));
}

TEST_CASE("moment polynomial evaluation")
{
    GameParams g = make_game_params(0.5, 0.5);
    CHECK((double)evaluate_moment_polynomial(mu(1), g) ==
          doctest::Approx(-2.0).epsilon(1e-13));
    CHECK((double)evaluate_moment_polynomial(C(1, 3), g) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-16));

    // d_{2,0} at (1.5, 1 - 2^{-1.5}) via two independent routes
    GameParams k = make_game_params(1.5, 1.0 - std::pow(2.0, -1.5));
    MomentPolynomial d20 = C(-1, 2) * mu(1) * mu(1) + C(1, 2) * mu(2);
    double direct = (double)evaluate_moment_polynomial(d20, k);
    double m1 = virtual_moment(k, 1.0), m2 = virtual_moment(k, 2.0);
    CHECK(direct == doctest::Approx(-0.5 * m1 * m1 + 0.5 * m2).epsilon(1e-13));

    // mu_1 as a true moment: direct series sum r^{k/alpha} q^{k-1} p
    long double s = 0, w = k.p;
    for (int kk = 1; kk <= 200; ++kk) {
        s += std::exp((long double)kk * std::log((long double)k.r) / 1.5L) * w;
        w *= k.q;
    }
    CHECK(m1 == doctest::Approx((double)s).epsilon(1e-10));

    // evaluating a polynomial with mu_alpha is singular
    GameParams a1 = make_game_params(1.0, 0.5);
    CHECK_THROWS_AS(evaluate_moment_polynomial(mu(1), a1), singular_moment_error);
}
