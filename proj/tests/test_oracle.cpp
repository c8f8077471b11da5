#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "stpete/oracle.hpp"

using namespace stpete;

namespace {

// brute-force enumeration of S_2 over k1, k2 <= 20 (exact dyadic arithmetic
// for p = 1/2: every atom mass is a single product of powers of two)
std::map<std::int64_t, double> enumerate_s2(const GameParams& gp, int K)
{
    std::map<std::int64_t, double> out;
    std::int64_t span = *gp.lattice_span;
    for (int k1 = 1; k1 <= K; ++k1) {
        for (int k2 = 1; k2 <= K; ++k2) {
            std::int64_t pos = span, tmp = span;  // gains span^{k1} + span^{k2}
            for (int i = 1; i < k1; ++i) pos *= span;
            for (int i = 1; i < k2; ++i) tmp *= span;
            pos += tmp;
            double pr = gp.p * std::pow(gp.q, k1 - 1) * gp.p * std::pow(gp.q, k2 - 1);
            out[pos] += pr;
        }
    }
    return out;
}

} // namespace

TEST_CASE("single-game pmf")
{
    GameParams g = make_game_params(1.0, 0.5);
    LatticePMF s = pmf_single(g, 1e-6);
    CHECK(s.unit == 2.0);
    CHECK(s.min_index == 1);
    CHECK(s.probs[0] == 0.5);    // X = 2
    CHECK(s.probs[1] == 0.25);   // X = 4
    CHECK(s.probs[3] == 0.125);  // X = 8
    // geometric mass: exact in dyadic arithmetic
    CHECK(s.mass() == 1.0 - s.tail_mass);

    GameParams h = make_game_params(0.5, 0.5);
    LatticePMF t = pmf_single(h, 1e-4);
    CHECK(t.unit == 4.0);
    CHECK(t.probs[0] == 0.5);    // X = 4
    CHECK(t.probs[3] == 0.25);   // X = 16 -> index 4
    CHECK(t.probs[15] == 0.125); // X = 64 -> index 16

    CHECK_THROWS_AS(pmf_single(make_game_params(0.75, 0.5), 1e-9), regime_error);
    // an untruncatable budget must fail loudly, not silently truncate
    CHECK_THROWS_AS(pmf_single(h, 1e-12), budget_error);
}

TEST_CASE("convolution matches brute-force enumeration exactly")
{
    GameParams g = make_game_params(1.0, 0.5);
    LatticePMF s = pmf_single(g, std::pow(g.q, 20.0) * 1.0000001);
    LatticePMF s2 = convolve(s, s, 0.0);

    auto want = enumerate_s2(g, 20);
    CHECK(s2.probs[(size_t)(4 / 2 - s2.min_index)] == 0.25);   // 2+2
    CHECK(s2.probs[(size_t)(6 / 2 - s2.min_index)] == 0.25);   // 2+4 twice
    CHECK(s2.probs[(size_t)(8 / 2 - s2.min_index)] == 0.0625); // 4+4
    for (const auto& [pos, pr] : want) {
        std::int64_t off = pos / 2 - s2.min_index;
        REQUIRE(off >= 0);
        REQUIRE(off < (std::int64_t)s2.probs.size());
        CHECK(s2.probs[(size_t)off] == pr);  // exact: dyadic products
    }

    // commutativity, entrywise
    LatticePMF a = pmf_single(g, 1e-5);
    LatticePMF b = pmf_single(g, 1e-3);
    LatticePMF ab = convolve(a, b, 0.0), ba = convolve(b, a, 0.0);
    REQUIRE(ab.probs.size() == ba.probs.size());
    for (size_t i = 0; i < ab.probs.size(); ++i) CHECK(ab.probs[i] == ba.probs[i]);

    // tail bookkeeping adds
    LatticePMF pr = convolve(a, b, 1e-7);
    CHECK(pr.tail_mass >= a.tail_mass + b.tail_mass);
    CHECK(pr.tail_mass <= a.tail_mass + b.tail_mass + 1e-7);

    CHECK_THROWS_AS(convolve(a, pmf_single(make_game_params(0.5, 0.5), 1e-4), 0.0),
                    lattice_error);
}

TEST_CASE("pmf_sum: identity at n=1, two-path equality, mass accounting")
{
    GameParams g = make_game_params(1.0, 0.5);
    double budget = 1e-11;
    SupportWindow w;
    w.x_hi = 1e4;

    LatticePMF p1 = pmf_sum(g, 1, 1e-6);
    LatticePMF s = pmf_single(g, 5e-7 * 1.0000001);
    std::int64_t common = std::min((std::int64_t)p1.probs.size(),
                                   (std::int64_t)s.probs.size());
    for (std::int64_t i = 0; i < common; ++i)
        CHECK(p1.probs[(size_t)i] == s.probs[(size_t)i]);

    LatticePMF p2 = pmf_sum(g, 2, budget, w);
    LatticePMF p3 = pmf_sum(g, 3, budget, w);
    LatticePMF p5 = pmf_sum(g, 5, budget, w);
    LatticePMF p23 = convolve(p2, p3, 0.0);
    std::int64_t lo = std::max(p5.min_index, p23.min_index);
    std::int64_t hi = std::min(p5.max_index(), p23.max_index());
    REQUIRE(hi > lo);
    for (std::int64_t i = lo; i <= hi; ++i) {
        double av = p5.probs[(size_t)(i - p5.min_index)];
        double bv = p23.probs[(size_t)(i - p23.min_index)];
        CHECK(std::abs(av - bv) <= 1e-14 + p5.tail_mass + p23.tail_mass);
    }

    // mass accounting: 1 - sum(probs) lies between 0 and the declared
    // tail_mass, up to the floating defect
    for (std::int64_t n : {1, 2, 3, 5, 16, 64}) {
        LatticePMF pn = pmf_sum(g, n, budget, w);
        double gap = 1.0 - pn.mass();
        CHECK(gap >= -1e-14 - pn.fp_slack);
        CHECK(gap <= pn.tail_mass + 1e-14 + pn.fp_slack);
        // the declared bound is tight at the 1e-11 level here
        CHECK(std::abs(gap - pn.tail_mass) <= 1e-11 + pn.fp_slack);
    }
}

TEST_CASE("standardized cdf")
{
    GameParams g = make_game_params(1.0, 0.5);
    GameInstance gi = make_instance(g, 2);
    SupportWindow w;
    w.x_hi = 1e5;
    LatticePMF p2 = pmf_sum(g, 2, 1e-6, w);
    StandardizedCdf F(p2, gi);

    CHECK(F(-1e9) == 0.0);
    CHECK(F(1e18) == doctest::Approx(1.0 - p2.tail_mass).epsilon(1e-10));
    CHECK(F.total() == doctest::Approx(1.0 - p2.tail_mass).epsilon(1e-10));

    // the standardized position of s = 6 carries F = P{S_2 in {4, 6}} = 1/2
    double x6 = (6.0 - gi.c_n) / gi.scale;
    CHECK(F(x6) == doctest::Approx(0.5).epsilon(1e-14));
    // jump at an atom equals its mass
    double x4 = (4.0 - gi.c_n) / gi.scale;
    CHECK(F(x4) - F.left_limit(x4) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(F.left_limit(x4) == 0.0);
}

TEST_CASE("characteristic-function round trip")
{
    struct Case { double alpha, p, budget; };
    for (Case c : {Case{1.0, 0.5, 1e-5},
                   Case{1.5, 1.0 - std::pow(2.0, -1.5), 3e-8}}) {
        GameParams g = make_game_params(c.alpha, c.p);
        for (std::int64_t n : {1, 2, 4, 8}) {
            GameInstance gi = make_instance(g, n);
            LatticePMF pn = pmf_sum(g, n, c.budget);
            for (double t : {-2.0, -0.7, 0.4, 1.1, 2.0}) {
                complex_t emp(0, 0);
                for (size_t i = 0; i < pn.probs.size(); ++i) {
                    if (pn.probs[i] == 0) continue;
                    double s = pn.unit * (double)(pn.min_index + (std::int64_t)i);
                    double ph = t * (s - gi.c_n) / gi.scale;
                    emp += pn.probs[i] * complex_t(std::cos(ph), std::sin(ph));
                }
                complex_t want = normalized_sum_char_fn(g, n, t, 1e-14);
                CAPTURE(c.alpha);
                CAPTURE(n);
                CAPTURE(t);
                CHECK(std::abs(emp - want) <= 1e-9 + (double)n * c.budget);
            }
        }
    }
}

TEST_CASE("cdf envelope")
{
    // non-lattice game: bounds bracket and tighten under grid refinement
    GameParams nl = make_game_params(0.75, 0.5);
    SupportWindow w;
    w.x_hi = 64.0;
    double prev_width = 1e9;
    for (double step : {0.5, 0.25, 0.125}) {
        CdfEnvelope env = envelope_cdf(nl, 8, step, 1e-9, w);
        for (size_t i = 0; i < env.grid.size(); ++i)
            CHECK(env.lower[i] <= env.upper[i] + 1e-15);
        for (size_t i = 1; i < env.grid.size(); ++i) {
            CHECK(env.lower[i] >= env.lower[i - 1] - 1e-15);
            CHECK(env.upper[i] >= env.upper[i - 1] - 1e-15);
        }
        CHECK(env.width_bound <= prev_width + 1e-12);
        prev_width = env.width_bound;
    }

    // lattice pass-through at grid_step = span reproduces the exact cdf
    GameParams g = make_game_params(1.0, 0.5);
    GameInstance gi = make_instance(g, 8);
    LatticePMF p8 = pmf_sum(g, 8, 1e-9, w);
    StandardizedCdf F(p8, gi);
    CdfEnvelope env = envelope_cdf(g, 8, 2.0, 1e-9, w);
    for (size_t i = 0; i < env.grid.size(); ++i) {
        double x = env.grid[i];
        CHECK(env.lower[i] <= F(x) + 1e-12);
        CHECK(env.upper[i] >= F(x) - 1e-12);
        // identical runs: the bracket collapses to the tail allowance
        CHECK(env.upper[i] - env.lower[i] <= 2e-9 + 2.0 * env.tail_mass);
    }

    // stochastic-order bracketing on a lattice instance with a coarse grid
    CdfEnvelope coarse = envelope_cdf(g, 8, 8.0, 1e-9, w);
    for (double x : {-2.0, -0.5, 0.0, 0.8, 2.5, 7.0}) {
        double lo = 0, hi = 1;
        for (size_t i = 0; i < coarse.grid.size(); ++i)
            if (coarse.grid[i] <= x) lo = coarse.lower[i];
        for (size_t i = coarse.grid.size(); i-- > 0;)
            if (coarse.grid[i] <= x) { hi = coarse.upper[i]; break; }
        CHECK(lo <= F(x) + 1e-12);
        CHECK(hi >= F(x) - 1e-12);
    }
}
