#ifndef STPETE_EXPONENT_HPP
#define STPETE_EXPONENT_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "stpete/game.hpp"

namespace stpete {

namespace detail { class HpPowers; }

/// Evaluator for the semistable exponent y_gamma^{alpha,p}(t), the exponent of
/// the characteristic function of G_{alpha,p,gamma}:
///   alpha < 1 :  sum_k (e^{i u_k} - 1) rho_k
///   alpha = 1 :  i t p r log_r(1/gamma) + compensated sum (k <= 0) + plain sum (k >= 1)
///   alpha > 1 :  sum_k (e^{i u_k} - 1 - i u_k) rho_k
/// with u_k = t r^{k/alpha} / gamma^{1/alpha}, rho_k = p gamma / (q r^k),
/// k running over all integers. The series is truncated to a window
/// [k_min, k_max] chosen so the dropped tails are below tol for |t| <= t_max;
/// the certified bound on the dropped part is recorded in tail_bound.
class ExponentEvaluator {
public:
    ExponentEvaluator(const GameParams& gp, double gamma,
                      double tol = 1e-12, double t_max = 1e4);

    const GameParams& params() const { return gp_; }
    double gamma() const { return gamma_; }
    double tol() const { return tol_; }
    double t_max() const { return t_max_; }
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    double tail_bound() const { return tail_bound_; }

    /// y(t). For |t| beyond t_max the window is widened on the fly.
    complex_t y(double t) const;

    /// y at every node of a Gauss-Legendre panel grid on
    /// [t0, t0 + panels * w]. Large phases advance by per-k phasor
    /// recurrences (resynced periodically at high precision), so the cost
    /// per node is a handful of complex multiplies instead of one
    /// high-precision reduction per term.
    void y_grid(double t0, double w, int panels, std::vector<double>& t_out,
                std::vector<complex_t>& y_out) const;

    /// dy/dt, alpha in (1,2) only (absolute convergence of the term-wise
    /// derivative series is only available there).
    complex_t derivative(double t) const;

    /// g^{(k,j)}(t) = (-it)^k [y(t)]^j e^{y(t)}.
    complex_t transform_g_kj(int k, int j, double t) const;

private:
    complex_t eval_window(double t, int klo, int khi) const;
    static void window_for(const GameParams& gp, double gamma, double tol,
                           double t_max, int& k_min, int& k_max, double& tail);

    GameParams gp_;
    double gamma_;
    double tol_;
    double t_max_;
    int k_min_, k_max_;
    double tail_bound_;
    double drift_ = 0;                    // alpha = 1 only
    std::vector<long double> ufac_;       // r^{k/alpha} / gamma^{1/alpha}
    std::vector<long double> rho_;        // p gamma / (q r^k)
    std::vector<long double> urho_;       // ufac * rho
    // 320-bit scale factors: phases t * ufac_k exceed what double carries
    std::shared_ptr<const detail::HpPowers> hp_;
};

/// Certified decay constants for Lemma-"y"-style bounds: C_lower with
/// Re y(t) <= -C_lower |t|^alpha and C_upper with |y(t)| <= C_upper |t|^alpha
/// (for alpha = 1 the majorant carries an extra (1 + log_r max(|t|,1)) factor;
/// see DecayConstants::log_factor). Computed by grid search plus golden-section
/// refinement over one multiplicative period (alpha != 1, where the scaling
/// relation y(r^{1/alpha} t) = r y(t) extends the bound exactly) or over the
/// audit range [1e-2, 1e2] (alpha = 1).
struct DecayConstants {
    double C_lower = 0;
    double C_upper = 0;
    bool log_factor = false;  // true iff alpha = 1
};

DecayConstants decay_constant(const GameParams& gp, double gamma);

/// Remainder R_{n,1,k}(t) = n sum_{j>=k} (mu_j / j!) (i t / n^{1/alpha})^j,
/// truncated after `terms` terms with a certified bound on the dropped tail.
struct R1kResult {
    complex_t value;
    double tail_bound = 0;
};

R1kResult remainder_R1k(const GameParams& gp, std::int64_t n, int k, double t,
                        int terms = 40);

} // namespace stpete

#endif
