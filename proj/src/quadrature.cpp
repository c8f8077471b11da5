#include "stpete/quadrature.hpp"

#include <cmath>
#include <limits>

#include "stpete/errors.hpp"

namespace stpete {

namespace {

GaussLegendre16 build_gl16()
{
    // Roots of P_16 by Newton iteration from the Chebyshev initial guess.
    GaussLegendre16 g{};
    const int n = 16;
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0; p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1; p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.node[i] = -x;
        g.node[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.weight[i] = w;
        g.weight[n - 1 - i] = w;
    }
    return g;
}

} // namespace

const GaussLegendre16& gl16()
{
    static const GaussLegendre16 g = build_gl16();
    return g;
}

double exp_tail_bound(double T, double K, double C, double alpha)
{
    // substitute z = C t^alpha:
    //   int_T^inf t^K e^{-C t^alpha} dt = Gamma(a, z_T) / (alpha C^a),
    //   a = (K+1)/alpha.
    double a = (K + 1.0) / alpha;
    double zT = C * std::pow(T, alpha);
    if (zT < 2.0 * a + 2.0) return std::numeric_limits<double>::infinity();
    double log_bound = std::log(2.0) + (a - 1.0) * std::log(zT) - zT -
                       std::log(alpha) - a * std::log(C);
    return std::exp(log_bound);
}

double choose_cutoff(double C_lower, double alpha, int max_k, int max_j,
                     double tol, double C_upper, double j_power)
{
    if (!(C_lower > 0)) throw param_error("choose_cutoff requires C_lower > 0");
    if (!(tol > 0)) throw param_error("choose_cutoff requires tol > 0");
    if (j_power < 0) j_power = alpha;

    double K = (double)max_k + j_power * (double)max_j;
    double cj = std::pow(C_upper, (double)max_j);
    auto bound = [&](double T) { return cj * exp_tail_bound(T, K, C_lower, alpha); };

    double T = std::pow((2.0 * ((K + 1.0) / alpha) + 2.0) / C_lower, 1.0 / alpha) + 1.0;
    while (!(bound(T) < 0.5 * tol)) {
        T *= 1.5;
        if (T > 1e12) throw quadrature_error("cutoff search diverged");
    }
    double lo = T / 1.5, hi = T;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (bound(mid) < 0.5 * tol) hi = mid; else lo = mid;
        if (hi - lo < 1e-9 * hi) break;
    }
    return hi;
}

} // namespace stpete
