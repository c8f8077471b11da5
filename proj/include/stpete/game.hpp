#ifndef STPETE_GAME_HPP
#define STPETE_GAME_HPP

#include <complex>
#include <cstdint>
#include <optional>

#include "stpete/errors.hpp"

namespace stpete {

using complex_t = std::complex<double>;

/// A generalized St. Petersburg game: the gain X satisfies
/// P{X = r^{k/alpha}} = q^{k-1} p for k = 1, 2, ..., with q = 1 - p,
/// r = 1/q. alpha in (0,2) is the tail exponent.
struct GameParams {
    double alpha = 0;
    double p = 0;
    double q = 0;           // 1 - p
    double r = 0;           // 1 / q
    // Present iff r^{1/alpha} is (numerically) a positive integer; the gains
    // then live on the lattice lattice_span * N.
    std::optional<std::int64_t> lattice_span;
    // True when r itself is a positive integer (q = 1/r exactly); enables
    // exact integer arithmetic in position_parameter.
    bool r_is_integer = false;

    bool is_lattice() const { return lattice_span.has_value(); }
};

/// One row of a study: a game at a fixed number of rounds n, with the derived
/// standardization quantities.
struct GameInstance {
    GameParams params;
    std::int64_t n = 0;
    double gamma_n = 0;     // n / r^{ceil(log_r n)} in (q, 1]
    double c_n = 0;         // centering
    double scale = 0;       // n^{1/alpha}
};

// Lattice detection: r^{1/alpha} is treated as an integer when it lies within
// `lattice_tol` of one. The condition is a knife edge, hence the override.
struct LatticeOptions {
    double lattice_tol = 1e-9;
    std::optional<bool> force;  // force lattice on/off, bypassing detection
};

GameParams make_game_params(double alpha, double p,
                            const LatticeOptions& opts = {});

/// Virtual moment mu_beta = p / (q^{beta/alpha} - q). A true moment for
/// beta < alpha, a negative formal quantity for beta > alpha.
double virtual_moment(const GameParams& gp, double beta);

/// Smallest integer m >= 0 with r^m >= n. Exact integer comparison when r is
/// an integer; extended precision with a two-sided guard band otherwise.
std::int64_t ceil_log_r(const GameParams& gp, std::int64_t n);

/// gamma_n = n / r^{ceil(log_r n)} in (q, 1].
double position_parameter(const GameParams& gp, std::int64_t n);

/// c_n: mu_1 * n for alpha != 1, p * r * n * log_r(n) for alpha = 1.
double centering(const GameParams& gp, std::int64_t n);

GameInstance make_instance(const GameParams& gp, std::int64_t n);

/// Characteristic function of the gain, sum_{k>=1} e^{i t r^{k/alpha}} q^{k-1} p,
/// truncated so the dropped geometric tail mass q^K < tol.
complex_t gain_char_fn(const GameParams& gp, double t, double tol);

/// f(t / n^{1/alpha}) with the scaling folded into the high-precision phase
/// reduction. Dividing t by n^{1/alpha} in double first costs Hoelder-alpha
/// accuracy (f is not Lipschitz for alpha < 2): the rounded argument moves
/// the value by about eps^alpha, far above eps.
complex_t gain_char_fn_scaled(const GameParams& gp, double t, std::int64_t n,
                              double tol);

/// Characteristic function of (S_n - c_n)/n^{1/alpha}:
/// f(t/n^{1/alpha})^n * exp(-i t c_n / n^{1/alpha}).
complex_t normalized_sum_char_fn(const GameParams& gp, std::int64_t n,
                                 double t, double tol);

} // namespace stpete

#endif
