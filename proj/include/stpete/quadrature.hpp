#ifndef STPETE_QUADRATURE_HPP
#define STPETE_QUADRATURE_HPP

#include <array>
#include <string>

namespace stpete {

/// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre16 {
    std::array<double, 16> node;
    std::array<double, 16> weight;
};
const GaussLegendre16& gl16();

/// Upper bound for int_T^inf t^K e^{-C t^alpha} dt via the incomplete-gamma
/// estimate Gamma(a, z) <= 2 z^{a-1} e^{-z} (valid once z >= 2a). Returns +inf
/// when T is too small for the estimate to apply.
double exp_tail_bound(double T, double K, double C, double alpha);

/// Smallest T with int_T^inf t^{max_k} (C_upper t^alpha)^{max_j}
/// e^{-C_lower t^alpha} dt < tol/2, solved by bracketing + bisection on the
/// certified bound. `j_power` overrides the per-j exponent (used for the
/// alpha = 1 log-corrected majorant); pass a negative value for the default
/// (= alpha).
double choose_cutoff(double C_lower, double alpha, int max_k, int max_j,
                     double tol, double C_upper = 1.0, double j_power = -1.0);

/// Metadata describing a configured inversion quadrature.
struct QuadratureSpec {
    double cutoff_T = 0;
    int panel_count = 0;     // panels at the finest cached level
    std::string rule = "gl16-dyadic";
    double tol = 0;
    double tail_certificate = 0;
};

} // namespace stpete

#endif
