#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <mpfr.h>

#include "stpete/exponent.hpp"

using namespace stpete;

namespace {

// independent brute-force evaluation of y over k in [-200, 200], straight
// from the three-regime definition; scale factors and phase reduction are
// done at 320 bits so the huge arguments keep their phase
std::complex<long double> brute_y(const GameParams& gp, double gamma, double t)
{
    const long double a = gp.alpha, q = gp.q, r = gp.r, p = gp.p, g = gamma;
    const long double lnr = std::log(r);

    mpfr_t s, gpow, ck, ph, two_pi, e;
    mpfr_inits2(320, s, gpow, ck, ph, two_pi, e, (mpfr_ptr)nullptr);
    mpfr_set_d(s, gp.r, MPFR_RNDN);
    mpfr_set_d(e, 1.0 / gp.alpha, MPFR_RNDN);
    mpfr_pow(s, s, e, MPFR_RNDN);                       // r^{1/alpha}
    mpfr_set_d(gpow, gamma, MPFR_RNDN);
    mpfr_neg(e, e, MPFR_RNDN);
    mpfr_pow(gpow, gpow, e, MPFR_RNDN);                 // gamma^{-1/alpha}
    mpfr_const_pi(two_pi, MPFR_RNDN);
    mpfr_mul_ui(two_pi, two_pi, 2, MPFR_RNDN);

    std::complex<long double> acc(0, 0);
    for (int k = -200; k <= 200; ++k) {
        mpfr_pow_si(ck, s, k, MPFR_RNDN);
        mpfr_mul(ck, ck, gpow, MPFR_RNDN);
        long double uf = mpfr_get_ld(ck, MPFR_RNDN);
        mpfr_mul_d(ph, ck, t, MPFR_RNDN);
        mpfr_fmod(ph, ph, two_pi, MPFR_RNDN);
        long double phi = mpfr_get_ld(ph, MPFR_RNDN);
        long double u = (long double)t * uf;
        long double rho = p * g / q * std::exp(-k * lnr);
        long double sp = sinl(phi * 0.5L);
        long double re_t = -2.0L * sp * sp;  // cos(phi) - 1, cancellation-free
        bool comp = (a > 1.0L) || (a == 1.0L && k <= 0);
        long double im_t;
        if (!comp) {
            im_t = sinl(phi);
        } else if (fabsl(u) < 1e-4L) {
            long double u2 = u * u;
            im_t = -u * u2 / 6.0L *
                   (1.0L - u2 / 20.0L * (1.0L - u2 / 42.0L * (1.0L - u2 / 72.0L)));
        } else {
            im_t = sinl(phi) - u;
        }
        acc += std::complex<long double>(re_t * rho, im_t * rho);
    }
    if (a == 1.0L)
        acc += std::complex<long double>(0, (long double)t * p * r *
                                                std::log(1.0L / g) / lnr);
    mpfr_clears(s, gpow, ck, ph, two_pi, e, (mpfr_ptr)nullptr);
    return acc;
}

} // namespace

TEST_CASE("exponent basics: zero at the origin, conjugate symmetry")
{
    for (auto [alpha, p] : {std::pair{0.5, 0.5}, {1.0, 0.5},
                            {1.5, 1.0 - std::pow(2.0, -1.5)}}) {
        GameParams gp = make_game_params(alpha, p);
        ExponentEvaluator ev(gp, 0.8, 1e-12, 100.0);
        CHECK(std::abs(ev.y(0.0)) < 1e-15);
        for (double t : {0.2, 1.0, 7.3, 55.0}) {
            CHECK(std::abs(ev.y(-t) - std::conj(ev.y(t))) < 1e-13);
        }
    }
}

TEST_CASE("exponent agrees with the brute-force series")
{
    struct Case { double alpha, p, gamma, t; };
    for (Case c : {Case{0.5, 0.5, 1.0, 1.0}, Case{0.5, 0.5, 0.6, 2.7},
                   Case{1.5, 1.0 - std::pow(2.0, -1.5), 1.0, 1.0},
                   Case{1.5, 1.0 - std::pow(2.0, -1.5), 0.6, 5.0},
                   Case{1.0, 0.5, 0.7, 1.3}}) {
        GameParams gp = make_game_params(c.alpha, c.p);
        ExponentEvaluator ev(gp, c.gamma, 1e-12, 10.0);
        std::complex<long double> want = brute_y(gp, c.gamma, c.t);
        complex_t got = ev.y(c.t);
        CAPTURE(c.alpha);
        CAPTURE(c.t);
        CHECK(std::abs(got - complex_t((double)want.real(), (double)want.imag())) <
              2e-12);
    }
}

TEST_CASE("semistability scaling relation y(r^{1/alpha} t) = r y(t)")
{
    for (auto [alpha, p] : {std::pair{0.5, 0.5},
                            {1.5, 1.0 - std::pow(2.0, -1.5)}}) {
        GameParams gp = make_game_params(alpha, p);
        double s = std::pow(gp.r, 1.0 / alpha);
        for (double gamma : {0.6, 1.0}) {
            ExponentEvaluator ev(gp, gamma, 1e-12, 60.0);
            for (double t = 0.1; t <= 10.0; t += 0.37) {
                complex_t lhs = ev.y(s * t);
                complex_t rhs = gp.r * ev.y(t);
                CHECK(std::abs(lhs - rhs) < 1e-10);
            }
        }
    }
}

// independent brute derivative: termwise (e^{iu_k}-1) i ufac_k rho_k over
// k in [-300, 300] with 320-bit phases
static std::complex<long double> brute_dy(const GameParams& gp, double gamma,
                                          double t)
{
    mpfr_t s, gpow, ck, ph, two_pi, e;
    mpfr_inits2(320, s, gpow, ck, ph, two_pi, e, (mpfr_ptr)nullptr);
    mpfr_set_d(s, gp.r, MPFR_RNDN);
    mpfr_set_d(e, 1.0 / gp.alpha, MPFR_RNDN);
    mpfr_pow(s, s, e, MPFR_RNDN);
    mpfr_set_d(gpow, gamma, MPFR_RNDN);
    mpfr_neg(e, e, MPFR_RNDN);
    mpfr_pow(gpow, gpow, e, MPFR_RNDN);
    mpfr_const_pi(two_pi, MPFR_RNDN);
    mpfr_mul_ui(two_pi, two_pi, 2, MPFR_RNDN);
    long double lnr = logl((long double)gp.r);
    std::complex<long double> acc(0, 0);
    for (int k = -300; k <= 300; ++k) {
        mpfr_pow_si(ck, s, k, MPFR_RNDN);
        mpfr_mul(ck, ck, gpow, MPFR_RNDN);
        long double uf = mpfr_get_ld(ck, MPFR_RNDN);
        mpfr_mul_d(ph, ck, t, MPFR_RNDN);
        mpfr_fmod(ph, ph, two_pi, MPFR_RNDN);
        long double phi = mpfr_get_ld(ph, MPFR_RNDN);
        long double rho = (long double)gp.p * gamma / gp.q * expl(-k * lnr);
        long double sp = sinl(0.5L * phi);
        std::complex<long double> em1(-2.0L * sp * sp, sinl(phi));
        acc += std::complex<long double>(0, 1) * (uf * rho) * em1;
    }
    mpfr_clears(s, gpow, ck, ph, two_pi, e, (mpfr_ptr)nullptr);
    return acc;
}

TEST_CASE("exponent derivative: series vs brute force and finite differences")
{
    GameParams gp = make_game_params(1.5, 1.0 - std::pow(2.0, -1.5));
    ExponentEvaluator ev(gp, 0.8, 1e-12, 50.0);
    CHECK(std::abs(ev.derivative(0.0)) < 1e-14);

    for (double t : {0.5, 1.0, 3.0}) {
        auto b = brute_dy(gp, 0.8, t);
        CHECK(std::abs(ev.derivative(t) -
                       complex_t((double)b.real(), (double)b.imag())) < 1e-11);
    }

    // y'' does not exist for alpha < 2 (the termwise second-derivative series
    // diverges), so the centered difference converges only like h^{alpha-1}
    const double h = 1e-5;
    for (double t : {0.5, 1.0, 3.0}) {
        complex_t fd = (ev.y(t + h) - ev.y(t - h)) / (2.0 * h);
        CHECK(std::abs(ev.derivative(t) - fd) <
              20.0 * std::pow(h, gp.alpha - 1.0));
    }

    GameParams low = make_game_params(0.5, 0.5);
    ExponentEvaluator evl(low, 1.0, 1e-10, 10.0);
    CHECK_THROWS_AS(evl.derivative(1.0), regime_error);
}

TEST_CASE("derivative decay: Im dy/dt <= -C t^{alpha-1} on [0.1, 50]")
{
    GameParams gp = make_game_params(1.5, 1.0 - std::pow(2.0, -1.5));
    for (double gamma : {0.6, 1.0}) {
        ExponentEvaluator ev(gp, gamma, 1e-11, 60.0);
        double c4 = std::numeric_limits<double>::infinity();
        for (double t = 0.1; t <= 50.0; t *= 1.07) {
            double v = -ev.derivative(t).imag() / std::pow(t, gp.alpha - 1.0);
            c4 = std::min(c4, v);
        }
        CHECK(c4 > 0.0);
    }
}

TEST_CASE("decay constants")
{
    for (double alpha : {0.5, 1.5}) {
        for (double p : {0.3, 0.5, 0.7}) {
            for (double gamma : {0.6, 1.0}) {
                GameParams gp = make_game_params(alpha, p, LatticeOptions{});
                if (gamma <= gp.q) {
                    // gamma must lie in (q, 1]; p = 0.3 makes gamma = 0.6 invalid
                    CHECK_THROWS_AS(decay_constant(gp, gamma), param_error);
                    continue;
                }
                DecayConstants dc = decay_constant(gp, gamma);
                CAPTURE(alpha);
                CAPTURE(p);
                CAPTURE(gamma);
                CHECK(dc.C_lower > 0.0);
                CHECK(dc.C_lower <= dc.C_upper);

                // audit grid: the certified bounds hold on [1e-2, 1e2]
                ExponentEvaluator ev(gp, gamma, 1e-12, 200.0);
                for (double t = 1e-2; t <= 1e2; t *= 1.13) {
                    complex_t y = ev.y(t);
                    double ta = std::pow(t, alpha);
                    CHECK(y.real() <= -dc.C_lower * ta + 1e-10);
                    CHECK(std::abs(y) <= dc.C_upper * ta * (1.0 + 1e-9) + 1e-10);
                }
            }
        }
    }
}

TEST_CASE("transform g^{(k,j)}")
{
    GameParams gp = make_game_params(0.5, 0.5);
    ExponentEvaluator ev(gp, 1.0, 1e-12, 50.0);
    for (double t : {0.4, 2.2}) {
        CHECK(std::abs(ev.transform_g_kj(0, 0, t) - std::exp(ev.y(t))) < 1e-14);
    }
    CHECK(std::abs(ev.transform_g_kj(1, 0, 0.0)) == 0.0);
    CHECK(std::abs(ev.transform_g_kj(0, 2, 0.0)) == 0.0);

    // |g^{(k,j)}| <= |t|^k (C_upper t^alpha)^j e^{-C_lower t^alpha}
    DecayConstants dc = decay_constant(gp, 1.0);
    for (int k : {0, 1, 3}) {
        for (int j : {0, 1, 2}) {
            for (double t = 0.05; t < 40.0; t *= 1.31) {
                double bound = std::pow(t, k) *
                               std::pow(dc.C_upper * std::pow(t, gp.alpha), j) *
                               std::exp(-dc.C_lower * std::pow(t, gp.alpha));
                CHECK(std::abs(ev.transform_g_kj(k, j, t)) <=
                      bound * (1.0 + 1e-8) + 1e-12);
            }
        }
    }
}

TEST_CASE("remainder R_{n,1,k}")
{
    GameParams gp = make_game_params(0.5, 0.5);
    CHECK(std::abs(remainder_R1k(gp, 16, 2, 0.0).value) < 1e-15);

    // telescoping: R_k - R_{k+1} = n (mu_k / k!) (it/n^{1/alpha})^k
    std::int64_t n = 16;
    double scale = std::pow((double)n, 2.0);  // n^{1/alpha}, alpha = 1/2
    for (int k : {2, 3, 4}) {
        for (double t : {0.5, 1.0, 1.9}) {
            complex_t lhs =
                remainder_R1k(gp, n, k, t).value - remainder_R1k(gp, n, k + 1, t).value;
            double fact = 1;
            for (int i = 2; i <= k; ++i) fact *= i;
            complex_t iu(0, t / scale);
            complex_t rhs = (double)n * virtual_moment(gp, (double)k) / fact;
            for (int i = 0; i < k; ++i) rhs *= iu;
            CHECK(std::abs(lhs - rhs) < 1e-14 + 1e-10 * std::abs(rhs));
        }
    }

    // |R_{n,1,2}(1)| <= (-mu_2/2) / n^{(2-alpha)/alpha}
    R1kResult r = remainder_R1k(gp, 16, 2, 1.0);
    double bound = -virtual_moment(gp, 2.0) / 2.0 /
                   std::pow(16.0, (2.0 - gp.alpha) / gp.alpha);
    CHECK(std::abs(r.value) <= bound * (1.0 + 1e-12));
    CHECK(r.tail_bound < 1e-12);

    // convergence guard
    CHECK_THROWS_AS(remainder_R1k(gp, 4, 2, 100.0), param_error);
}

TEST_CASE("two-path consistency: x_n = y_{gamma_n} + i t c_n / n^{1/alpha} + R_{n,1,2}")
{
    for (auto [alpha, p] : {std::pair{0.5, 0.5},
                            {1.5, 1.0 - std::pow(2.0, -1.5)}}) {
        GameParams gp = make_game_params(alpha, p);
        for (std::int64_t n : {3, 5, 8, 13}) {
            GameInstance gi = make_instance(gp, n);
            ExponentEvaluator ev(gp, gi.gamma_n, 1e-13, 4.0);
            for (double t = -2.0; t <= 2.0; t += 0.19) {
                complex_t f = gain_char_fn_scaled(gp, t, n, 1e-15);
                complex_t xn = (double)n * (f - complex_t(1, 0));
                complex_t rhs = ev.y(t) + complex_t(0, t * gi.c_n / gi.scale) +
                                remainder_R1k(gp, n, 2, t, 60).value;
                CAPTURE(alpha);
                CAPTURE(n);
                CAPTURE(t);
                CHECK(std::abs(xn - rhs) < 1e-8);
            }
        }
    }
}
