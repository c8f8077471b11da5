#include "stpete/exponent.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hp_phase.hpp"
#include "stpete/quadrature.hpp"

namespace stpete {

namespace {

// phases above this are reduced mod 2pi at 320-bit precision; below it the
// accumulated double rounding stays under ~3e-13 in the final sum
constexpr double kPhaseThreshold = 1e4;

// sin(u) - u without cancellation for small u
inline double sin_minus_u(double u)
{
    if (std::abs(u) > 1e-4) return std::sin(u) - u;
    double u2 = u * u;
    return -u * u2 / 6.0 *
           (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)));
}

} // namespace

void ExponentEvaluator::window_for(const GameParams& gp, double gamma,
                                   double tol, double t_max,
                                   int& k_min, int& k_max, double& tail)
{
    const double a = gp.alpha, q = gp.q, r = gp.r, p = gp.p;
    const double lnr = std::log(r);
    const double budget = tol / 4.0;
    double up_tail = 0, lo_tail = 0;

    if (a <= 1.0) {
        // k -> +inf: |e^{iu}-1| <= 2, sum_{k>K} 2 rho_k = 2 gamma q^K
        double K = std::log(budget / (2.0 * gamma)) / std::log(q);
        k_max = (int)std::ceil(K) + 1;
        up_tail = 2.0 * gamma * std::pow(q, (double)k_max);
    } else {
        // k -> +inf: |e^{iu}-1-iu| <= 2|u_k|; ratio q^{(alpha-1)/alpha} < 1
        double c = (a - 1.0) / a;
        double pref = 2.0 * t_max * std::pow(gamma, 1.0 - 1.0 / a) * p / q;
        double geo = 1.0 / (1.0 - std::pow(q, c));
        double K = std::log(budget / (pref * geo)) / (c * std::log(q));
        k_max = (int)std::ceil(K) + 1;
        up_tail = pref * geo * std::pow(q, c * (double)k_max);
    }

    if (a < 1.0) {
        // k -> -inf: |e^{iu}-1| <= |u_k|; r^{kc} with c = (1-a)/a > 0
        double c = (1.0 - a) / a;
        double pref = t_max * std::pow(gamma, 1.0 - 1.0 / a) * p / q;
        double geo = 1.0 / (1.0 - std::pow(r, -c));
        double K = std::log(budget / (pref * geo)) / (c * lnr);
        k_min = (int)std::floor(K) - 1;
        lo_tail = pref * geo * std::pow(r, c * (double)k_min);
    } else {
        // k -> -inf: |e^{iu}-1-iu| <= u_k^2/2; r^{k c2} with c2 = (2-a)/a > 0
        double c2 = (2.0 - a) / a;
        double pref = 0.5 * t_max * t_max * std::pow(gamma, 1.0 - 2.0 / a) * p / q;
        double geo = 1.0 / (1.0 - std::pow(r, -c2));
        double K = std::log(budget / (pref * geo)) / (c2 * lnr);
        k_min = (int)std::floor(K) - 1;
        lo_tail = pref * geo * std::pow(r, c2 * (double)k_min);
    }

    if (k_min > 0) k_min = 0;
    if (k_max < 1) k_max = 1;
    // double-rounding floor of the windowed sum (see kPhaseThreshold)
    tail = up_tail + lo_tail + 5e-13;
}

ExponentEvaluator::ExponentEvaluator(const GameParams& gp, double gamma,
                                     double tol, double t_max)
    : gp_(gp), gamma_(gamma), tol_(tol), t_max_(t_max)
{
    if (!(gamma > gp.q) || !(gamma <= 1.0))
        throw param_error("gamma must lie in (q, 1]");
    if (!(tol > 0) || !(t_max > 0)) throw param_error("tol, t_max must be positive");
    if (tol < 1e-12) tol_ = 1e-12;  // the fp floor of the windowed sum
    window_for(gp_, gamma_, tol_, t_max_, k_min_, k_max_, tail_bound_);
    if (tail_bound_ >= tol_)
        throw numerical_failure("exponent window failed to certify tol");

    hp_ = std::make_shared<detail::HpPowers>(gp_.r, gp_.alpha, gamma_,
                                             k_min_, k_max_);
    const long double lnr = std::log((long double)gp_.r);
    ufac_.resize((size_t)(k_max_ - k_min_ + 1));
    rho_.resize(ufac_.size());
    urho_.resize(ufac_.size());
    for (int k = k_min_; k <= k_max_; ++k) {
        size_t i = (size_t)(k - k_min_);
        ufac_[i] = hp_->c_ld(k);
        rho_[i] = (long double)gp_.p * gamma_ / gp_.q * std::exp(-(long double)k * lnr);
        urho_[i] = ufac_[i] * rho_[i];
    }
    if (gp_.alpha == 1.0)
        drift_ = gp_.p * gp_.r * std::log(1.0 / gamma_) / (double)lnr;
}

complex_t ExponentEvaluator::eval_window(double t, int klo, int khi) const
{
    const double a = gp_.alpha;
    const long double lnr = std::log((long double)gp_.r);
    double re = 0, im = 0;
    for (int k = klo; k <= khi; ++k) {
        long double ufl, rho, urho;
        if (k >= k_min_ && k <= k_max_) {
            size_t i = (size_t)(k - k_min_);
            ufl = ufac_[i];
            rho = rho_[i];
            urho = urho_[i];
        } else {
            ufl = hp_->c_ld(k);
            rho = (long double)gp_.p * gamma_ / gp_.q *
                  std::exp(-(long double)k * lnr);
            urho = ufl * rho;
        }
        double u = (double)((long double)t * ufl);
        bool compensate = (a > 1.0) || (a == 1.0 && k <= 0);
        double rhod = (double)rho;
        if (std::abs(u) <= kPhaseThreshold) {
            double s = std::sin(0.5 * u);
            re += -2.0 * s * s * rhod;
            im += compensate ? sin_minus_u(u) * rhod : std::sin(u) * rhod;
        } else {
            double ph = hp_->phase(t, k);
            double s = std::sin(0.5 * ph);
            re += -2.0 * s * s * rhod;
            if (compensate)
                im += std::sin(ph) * rhod - (double)((long double)t * urho);
            else
                im += std::sin(ph) * rhod;
        }
    }
    if (a == 1.0) im += t * drift_;
    return complex_t(re, im);
}

complex_t ExponentEvaluator::y(double t) const
{
    if (std::abs(t) <= t_max_) return eval_window(t, k_min_, k_max_);
    int klo, khi;
    double tail;
    window_for(gp_, gamma_, tol_, std::abs(t), klo, khi, tail);
    return eval_window(t, klo, khi);
}

void ExponentEvaluator::y_grid(double t0, double w, int panels,
                               std::vector<double>& t_out,
                               std::vector<complex_t>& y_out) const
{
    const auto& g = gl16();
    const double a = gp_.alpha;
    const size_t n_nodes = (size_t)panels * 16;
    t_out.resize(n_nodes);
    y_out.resize(n_nodes);

    // node offsets within a panel and steps between consecutive nodes
    double off[16], delta[16];
    for (int i = 0; i < 16; ++i) off[i] = 0.5 * (1.0 + g.node[i]) * w;
    for (int i = 0; i < 15; ++i) delta[i] = off[i + 1] - off[i];
    delta[15] = w + off[0] - off[15];  // across the panel boundary

    const int nk = k_max_ - k_min_ + 1;
    // per-k mode: 0 = direct (u stays small), 1 = phasor chain
    std::vector<char> chained((size_t)nk, 0);
    std::vector<complex_t> phasor((size_t)nk);
    std::vector<std::array<complex_t, 16>> stepph((size_t)nk);
    double t_end = t0 + (double)panels * w;
    double t_first = t0 + off[0];
    for (int k = k_min_; k <= k_max_; ++k) {
        size_t i = (size_t)(k - k_min_);
        double u_end = t_end * (double)ufac_[i];
        if (std::abs(u_end) >= 1.0) {
            chained[i] = 1;
            double ph0 = (std::abs(t_first * (double)ufac_[i]) <= kPhaseThreshold)
                             ? t_first * (double)ufac_[i]
                             : hp_->phase(t_first, k);
            phasor[i] = complex_t(std::cos(ph0), std::sin(ph0));
            for (int j = 0; j < 16; ++j) {
                double dph = (std::abs(delta[j] * (double)ufac_[i]) <= kPhaseThreshold)
                                 ? delta[j] * (double)ufac_[i]
                                 : hp_->phase(delta[j], k);
                stepph[i][(size_t)j] = complex_t(std::cos(dph), std::sin(dph));
            }
        }
    }

    const int RESYNC = 2048;
    int since_sync = 0;
    for (int m = 0; m < panels; ++m) {
        for (int ii = 0; ii < 16; ++ii) {
            size_t idx = (size_t)m * 16 + (size_t)ii;
            double t = t0 + (double)m * w + off[ii];
            t_out[idx] = t;

            if (++since_sync >= RESYNC) {
                since_sync = 0;
                for (int k = k_min_; k <= k_max_; ++k) {
                    size_t i = (size_t)(k - k_min_);
                    if (!chained[i]) continue;
                    double ph = (std::abs(t * (double)ufac_[i]) <= kPhaseThreshold)
                                    ? t * (double)ufac_[i]
                                    : hp_->phase(t, k);
                    phasor[i] = complex_t(std::cos(ph), std::sin(ph));
                }
            }

            double re = 0, im = 0;
            for (int k = k_min_; k <= k_max_; ++k) {
                size_t i = (size_t)(k - k_min_);
                double rhod = (double)rho_[i];
                bool compensate = (a > 1.0) || (a == 1.0 && k <= 0);
                if (chained[i]) {
                    double u = (double)((long double)t * ufac_[i]);
                    double c = phasor[i].real(), sn = phasor[i].imag();
                    if (std::abs(u) < 1.0) {
                        // phasor kept in sync but too coarse here; use direct
                        double s = std::sin(0.5 * u);
                        re += -2.0 * s * s * rhod;
                        im += compensate ? sin_minus_u(u) * rhod
                                         : std::sin(u) * rhod;
                    } else {
                        re += (c - 1.0) * rhod;
                        if (compensate)
                            im += sn * rhod - (double)((long double)t * urho_[i]);
                        else
                            im += sn * rhod;
                    }
                    phasor[i] *= stepph[i][(size_t)ii];
                } else {
                    double u = (double)((long double)t * ufac_[i]);
                    double s = std::sin(0.5 * u);
                    re += -2.0 * s * s * rhod;
                    im += compensate ? sin_minus_u(u) * rhod : std::sin(u) * rhod;
                }
            }
            if (a == 1.0) im += t * drift_;
            y_out[idx] = complex_t(re, im);
        }
    }
}

complex_t ExponentEvaluator::derivative(double t) const
{
    const double a = gp_.alpha;
    if (!(a > 1.0) || !(a < 2.0))
        throw regime_error("exponent derivative series requires alpha in (1,2)");
    // termwise: (e^{iu_k} - 1) i ufac_k rho_k; the y window's tails dominate
    // the derivative's for t <= t_max (one factor |t| weaker upward, one
    // factor |t|/2 weaker downward)
    double re = 0, im = 0;
    for (int k = k_min_; k <= k_max_; ++k) {
        size_t i = (size_t)(k - k_min_);
        double u = (double)((long double)t * ufac_[i]);
        double urd = (double)urho_[i];
        double cosm1, sn;
        if (std::abs(u) <= kPhaseThreshold) {
            double s = std::sin(0.5 * u);
            cosm1 = -2.0 * s * s;
            sn = std::sin(u);
        } else {
            double ph = hp_->phase(t, k);
            double s = std::sin(0.5 * ph);
            cosm1 = -2.0 * s * s;
            sn = std::sin(ph);
        }
        // (cosm1 + i sn) * i = -sn + i cosm1
        re += -sn * urd;
        im += cosm1 * urd;
    }
    return complex_t(re, im);
}

complex_t ExponentEvaluator::transform_g_kj(int k, int j, double t) const
{
    if (k < 0 || j < 0) throw param_error("g^{(k,j)} requires k, j >= 0");
    complex_t yv = y(t);
    complex_t acc = std::exp(yv);
    for (int i = 0; i < j; ++i) acc *= yv;
    complex_t mit(0.0, -t);
    for (int i = 0; i < k; ++i) acc *= mit;
    return acc;
}

DecayConstants decay_constant(const GameParams& gp, double gamma)
{
    const double a = gp.alpha;
    const double tol = 1e-12;
    ExponentEvaluator ev(gp, gamma, tol, 1e3);

    auto neg_re_over = [&](double t) {
        return -ev.y(t).real() / std::pow(t, a);
    };
    auto abs_over = [&](double t) {
        double den = std::pow(t, a);
        if (a == 1.0) den *= 1.0 + std::max(0.0, std::log(t) / std::log(gp.r));
        return std::abs(ev.y(t)) / den;
    };

    double lo, hi;
    if (a != 1.0) {
        lo = 1.0;
        hi = std::pow(gp.r, 1.0 / a);  // one multiplicative period
    } else {
        lo = 1e-2;
        hi = 1e2;
    }

    const int N = 4096;
    double best_min = std::numeric_limits<double>::infinity(), tmin = lo;
    double best_max = 0, tmaxx = lo;
    double lr = std::log(hi / lo);
    for (int i = 0; i <= N; ++i) {
        double t = lo * std::exp(lr * (double)i / N);
        double v = neg_re_over(t);
        if (v < best_min) { best_min = v; tmin = t; }
        double w = abs_over(t);
        if (w > best_max) { best_max = w; tmaxx = t; }
    }

    // golden-section refinement around the grid optimum
    auto golden = [&](auto f, double x, bool minimize) {
        double aL = x * std::exp(-lr / N), bR = x * std::exp(lr / N);
        const double phi = 0.6180339887498949;
        double c = bR - phi * (bR - aL), d = aL + phi * (bR - aL);
        for (int it = 0; it < 60; ++it) {
            double fc = f(c), fd = f(d);
            bool keep_left = minimize ? (fc < fd) : (fc > fd);
            if (keep_left) { bR = d; d = c; c = bR - phi * (bR - aL); }
            else { aL = c; c = d; d = aL + phi * (bR - aL); }
        }
        return f(0.5 * (aL + bR));
    };
    best_min = std::min(best_min, golden(neg_re_over, tmin, true));
    best_max = std::max(best_max, golden(abs_over, tmaxx, false));

    DecayConstants dc;
    dc.C_lower = best_min - 10.0 * tol;  // conservative certificate
    dc.C_upper = best_max + 10.0 * tol;
    dc.log_factor = (a == 1.0);
    if (!(dc.C_lower > 0))
        throw numerical_failure("decay constant came out nonpositive");
    return dc;
}

R1kResult remainder_R1k(const GameParams& gp, std::int64_t n, int k, double t,
                        int terms)
{
    if (k < 2) throw param_error("R_{n,1,k} requires k >= 2");
    if (n < 1) throw param_error("n must be >= 1");
    if (terms < 1) terms = 1;
    const double a = gp.alpha;
    double scale = std::pow((double)n, 1.0 / a);
    double u = std::abs(t) / scale;
    double radius_guard = std::pow(gp.r, 1.0 / a) * 0.9;
    if (u > radius_guard)
        throw param_error("R_{n,1,k}: |t|/n^{1/alpha} outside the convergence guard");

    std::complex<long double> iu(0.0L, (long double)t / (long double)scale);
    std::complex<long double> pw(1.0L, 0.0L);
    for (int j = 0; j < k; ++j) pw *= iu;  // (it/n^{1/alpha})^k

    long double fact = 1;
    for (int j = 2; j < k; ++j) fact *= j;
    std::complex<long double> acc(0, 0);
    int J = k + terms;
    for (int j = k; j < J; ++j) {
        fact *= j;  // now j!
        long double mu = (long double)virtual_moment(gp, (double)j);
        acc += mu / fact * pw;
        pw *= iu;
    }
    acc *= (long double)n;

    // |mu_j| is decreasing for j > alpha; bound the dropped tail by
    // n * B * sum_{j>=J} u^j / j! <= n * B * u^J / J! * e^u
    double B = std::abs(virtual_moment(gp, (double)J));
    long double tail = 1;
    for (int j = 1; j <= J; ++j) tail *= u / j;
    double tail_bound = (double)((long double)n * B * tail * std::exp((long double)u));

    return R1kResult{complex_t((double)acc.real(), (double)acc.imag()), tail_bound};
}

} // namespace stpete
