#include "stpete/game.hpp"

#include <cmath>
#include <gmpxx.h>

#include "hp_phase.hpp"

namespace stpete {

GameParams make_game_params(double alpha, double p, const LatticeOptions& opts)
{
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw param_error("alpha must lie in (0,2), got " + std::to_string(alpha));
    if (!(p > 0.0) || !(p < 1.0))
        throw param_error("p must lie in (0,1), got " + std::to_string(p));

    GameParams gp;
    gp.alpha = alpha;
    gp.p = p;
    gp.q = 1.0 - p;
    gp.r = 1.0 / gp.q;

    double ri = std::round(gp.r);
    gp.r_is_integer = (ri >= 2.0) && (std::abs(gp.r - ri) < 1e-12 * gp.r);

    // span = r^{1/alpha}, in long double to keep the knife-edge test honest.
    long double span =
        std::exp((long double)(1.0 / alpha) * std::log((long double)gp.r));
    long double rounded = std::round(span);
    bool detected = rounded >= 2.0L &&
                    std::abs((double)(span - rounded)) < opts.lattice_tol;
    bool lattice = opts.force.value_or(detected);
    if (lattice) {
        if (rounded < 2.0L)
            throw param_error("lattice override requested but r^{1/alpha} < 2");
        gp.lattice_span = (std::int64_t)rounded;
    }
    return gp;
}

double virtual_moment(const GameParams& gp, double beta)
{
    if (std::abs(beta - gp.alpha) < 1e-14 * std::max(1.0, std::abs(gp.alpha)))
        throw singular_moment_error("virtual moment singular at beta = alpha");
    long double den = std::pow((long double)gp.q, (long double)(beta / gp.alpha)) -
                      (long double)gp.q;
    if (den == 0.0L)
        throw singular_moment_error("virtual moment denominator vanished");
    return (double)((long double)gp.p / den);
}

std::int64_t ceil_log_r(const GameParams& gp, std::int64_t n)
{
    if (n < 1) throw param_error("n must be >= 1");
    if (n == 1) return 0;
    if (gp.r_is_integer) {
        // exact: smallest m with r^m >= n
        mpz_class rz((long)std::llround(gp.r)), pow(1), nz((long)n);
        std::int64_t m = 0;
        while (pow < nz) { pow *= rz; ++m; }
        return m;
    }
    // Floating log misclassifies exact powers; recompute the boundary in
    // extended precision and resolve within a two-sided guard band.
    long double lr = std::log((long double)gp.r);
    long double raw = std::log((long double)n) / lr;
    std::int64_t m = (std::int64_t)std::ceil((double)raw);
    const long double guard = 1e-12L * std::max(1.0L, raw < 0 ? -raw : raw);
    if (raw - std::floor((double)raw) < guard && std::floor((double)raw) >= 0)
        m = (std::int64_t)std::floor((double)raw);  // n is (numerically) an exact power
    // Repair off-by-one from rounding: enforce r^{m-1} < n <= r^m.
    auto pw = [&](std::int64_t e) { return std::exp((long double)e * lr); };
    while (pw(m) < (long double)n * (1.0L - 1e-15L)) ++m;
    while (m > 0 && pw(m - 1) >= (long double)n * (1.0L - 1e-15L)) --m;
    return m;
}

double position_parameter(const GameParams& gp, std::int64_t n)
{
    std::int64_t m = ceil_log_r(gp, n);
    if (gp.r_is_integer) {
        mpz_class rz((long)std::llround(gp.r)), pow(1);
        for (std::int64_t i = 0; i < m; ++i) pow *= rz;
        mpq_class g((long)n, 1);
        g /= mpq_class(pow);
        return g.get_d();
    }
    long double denom = std::exp((long double)m * std::log((long double)gp.r));
    return (double)((long double)n / denom);
}

double centering(const GameParams& gp, std::int64_t n)
{
    if (n < 1) throw param_error("n must be >= 1");
    if (gp.alpha == 1.0) {
        long double logr_n = std::log((long double)n) / std::log((long double)gp.r);
        return (double)((long double)gp.p * gp.r * n * logr_n);
    }
    return virtual_moment(gp, 1.0) * (double)n;
}

GameInstance make_instance(const GameParams& gp, std::int64_t n)
{
    GameInstance gi;
    gi.params = gp;
    gi.n = n;
    gi.gamma_n = position_parameter(gp, n);
    gi.c_n = centering(gp, n);
    gi.scale = std::pow((double)n, 1.0 / gp.alpha);
    return gi;
}

complex_t gain_char_fn(const GameParams& gp, double t, double tol)
{
    if (!(tol > 0)) throw param_error("tol must be positive");
    // dropped tail mass after K terms is q^K
    int K = (int)std::ceil(std::log(tol) / std::log(gp.q)) + 1;
    if (K < 1) K = 1;
    // the phases t r^{k/alpha} overflow double phase accuracy quickly;
    // reduce them at high precision
    detail::HpPowers hp(gp.r, gp.alpha, 1.0, 1, K);
    std::complex<long double> acc(0, 0);
    long double w = gp.p;  // q^{k-1} p
    for (int k = 1; k <= K; ++k) {
        long double u = (long double)t * hp.c_ld(k);
        double ph = (std::abs((double)u) <= 1e4) ? (double)u : hp.phase(t, k);
        acc += std::complex<long double>(std::cos(ph), std::sin(ph)) * w;
        w *= gp.q;
    }
    return complex_t((double)acc.real(), (double)acc.imag());
}

complex_t gain_char_fn_scaled(const GameParams& gp, double t, std::int64_t n,
                              double tol)
{
    if (!(tol > 0)) throw param_error("tol must be positive");
    if (n < 1) throw param_error("n must be >= 1");
    int K = (int)std::ceil(std::log(tol) / std::log(gp.q)) + 1;
    if (K < 1) K = 1;
    detail::HpPowers hp(gp.r, gp.alpha, (long)n, 1, K);
    double scale = std::pow((double)n, 1.0 / gp.alpha);
    std::complex<long double> acc(0, 0);
    long double w = gp.p;
    for (int k = 1; k <= K; ++k) {
        long double u = (long double)t * hp.c_ld(k);
        double ph = (std::abs((double)u) <= 1e4) ? (double)u : hp.phase(t, k);
        acc += std::complex<long double>(std::cos(ph), std::sin(ph)) * w;
        w *= gp.q;
    }
    (void)scale;
    return complex_t((double)acc.real(), (double)acc.imag());
}

complex_t normalized_sum_char_fn(const GameParams& gp, std::int64_t n,
                                 double t, double tol)
{
    if (n < 1) throw param_error("n must be >= 1");
    double scale = std::pow((double)n, 1.0 / gp.alpha);
    complex_t f = gain_char_fn_scaled(gp, t, n, tol);
    complex_t fn = std::pow(f, (double)n);
    double phase = -t * centering(gp, n) / scale;
    return fn * std::polar(1.0, phase);
}

} // namespace stpete
