#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stpete/game.hpp"

using namespace stpete;

TEST_CASE("parameter derivation and lattice detection")
{
    GameParams g = make_game_params(1.0, 0.5);
    CHECK(g.q == 0.5);
    CHECK(g.r == 2.0);
    REQUIRE(g.lattice_span.has_value());
    CHECK(*g.lattice_span == 2);
    CHECK(g.r_is_integer);

    GameParams h = make_game_params(0.5, 0.5);
    REQUIRE(h.lattice_span.has_value());
    CHECK(*h.lattice_span == 4);  // r^{1/alpha} = 2^2

    GameParams k = make_game_params(1.5, 1.0 - std::pow(2.0, -1.5));
    REQUIRE(k.lattice_span.has_value());
    CHECK(*k.lattice_span == 2);  // r = 2^{3/2}, r^{2/3} = 2
    CHECK(!k.r_is_integer);

    // non-lattice: r = 2, r^{4/3} irrational
    GameParams nl = make_game_params(0.75, 0.5);
    CHECK(!nl.lattice_span.has_value());

    CHECK_THROWS_AS(make_game_params(2.0, 0.5), param_error);
    CHECK_THROWS_AS(make_game_params(0.0, 0.5), param_error);
    CHECK_THROWS_AS(make_game_params(1.0, 0.0), param_error);
    CHECK_THROWS_AS(make_game_params(1.0, 1.0), param_error);

    // override forces the knife-edge call
    LatticeOptions force_off;
    force_off.force = false;
    CHECK(!make_game_params(1.0, 0.5, force_off).lattice_span.has_value());
}

TEST_CASE("virtual moments")
{
    GameParams g = make_game_params(1.0, 0.5);
    CHECK(virtual_moment(g, 2.0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(virtual_moment(g, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(virtual_moment(g, 0.5) ==
          doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(virtual_moment(g, 1.0), singular_moment_error);

    // finite and positive below alpha, negative above (both regimes)
    for (double alpha : {0.5, 1.5}) {
        GameParams gp = make_game_params(alpha, 0.4);
        for (double b = 0.05; b < alpha - 0.05; b += 0.1)
            CHECK(virtual_moment(gp, b) > 0);
        for (double b = alpha + 0.05; b < 6.0; b += 0.25)
            CHECK(virtual_moment(gp, b) < 0);
    }
}

TEST_CASE("position parameter")
{
    GameParams g = make_game_params(1.0, 0.5);
    CHECK(position_parameter(g, 4) == 1.0);
    CHECK(position_parameter(g, 5) == doctest::Approx(5.0 / 8.0).epsilon(1e-15));
    CHECK(position_parameter(g, 1) == 1.0);

    // exhaustive sweep at small scale: gamma_n in (q, 1]
    for (std::int64_t n = 1; n <= 100000; ++n) {
        double gam = position_parameter(g, n);
        CHECK(gam > g.q);
        CHECK(gam <= 1.0);
    }
    // exact powers classified exactly
    for (std::int64_t n = 2; n <= (1 << 20); n *= 2)
        CHECK(position_parameter(g, n) == 1.0);

    // irrational r: gamma in (q, 1], powers of the span give gamma = 1
    GameParams k = make_game_params(1.5, 1.0 - std::pow(2.0, -1.5));
    for (std::int64_t n = 1; n <= 20000; ++n) {
        double gam = position_parameter(k, n);
        CHECK(gam > k.q - 1e-12);
        CHECK(gam <= 1.0 + 1e-12);
    }
    CHECK(position_parameter(k, 8) == doctest::Approx(1.0).epsilon(1e-12));  // 8 = r^2
}

TEST_CASE("centering")
{
    GameParams g = make_game_params(1.0, 0.5);
    CHECK(centering(g, 4) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(centering(g, 1) == doctest::Approx(0.0));
    GameParams h = make_game_params(0.5, 0.5);
    CHECK(centering(h, 10) == doctest::Approx(-20.0).epsilon(1e-13));
}

TEST_CASE("gain characteristic function")
{
    GameParams g = make_game_params(1.0, 0.5);
    const double tol = 1e-12;
    CHECK(std::abs(gain_char_fn(g, 0.0, tol) - complex_t(1, 0)) < tol);
    for (double t : {0.3, 1.7, 9.1}) {
        complex_t a = gain_char_fn(g, t, tol);
        complex_t b = gain_char_fn(g, -t, tol);
        CHECK(std::abs(a - std::conj(b)) < 1e-14);
        CHECK(std::abs(a) <= 1.0 + tol);
    }
    // e^{i pi 2^k} = 1 for k >= 1, so f(pi) = sum q^{k-1} p = 1
    CHECK(std::abs(gain_char_fn(g, M_PI, tol) - complex_t(1, 0)) < 1e-9);
}

TEST_CASE("normalized sum characteristic function")
{
    GameParams g = make_game_params(0.5, 0.5);
    const double tol = 1e-12;
    CHECK(std::abs(normalized_sum_char_fn(g, 5, 0.0, tol) - complex_t(1, 0)) < 6.0 * tol);
    // n = 1 is the definition itself
    double c1 = centering(g, 1);
    for (double t : {0.4, 1.3}) {
        complex_t lhs = normalized_sum_char_fn(g, 1, t, tol);
        complex_t rhs = gain_char_fn(g, t, tol) * std::polar(1.0, -t * c1);
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}
