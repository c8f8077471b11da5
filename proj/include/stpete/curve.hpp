#ifndef STPETE_CURVE_HPP
#define STPETE_CURVE_HPP

#include <memory>
#include <vector>

#include "stpete/expansion.hpp"
#include "stpete/exponent.hpp"
#include "stpete/quadrature.hpp"

namespace stpete {

/// One transform-side summand: coef * (-it)^k [y(t)]^j e^{y(t)}.
struct TermNumeric {
    int k = 0;
    int j = 0;
    double coef = 0;
};
using TermSet = std::vector<TermNumeric>;

/// Numeric instantiation of an expansion table at a concrete game instance.
/// Includes the leading (0,0) term with coefficient 1.
TermSet numeric_terms(const ExpansionTermTable& table, const GameInstance& gi);

/// Fourier inversion of one or more assembled transforms sharing a single
/// exponent evaluator. Densities are computed by
///   (1/pi) Re int_0^T e^{-itx} h(t) dt
/// and CDFs by integrating the density from a certified left cutoff x_L,
/// with the inner x-integral carried out in closed form per t:
///   (1/pi) Re int_0^T h(t) (e^{-it x_L} - e^{-it x}) / (it) dt.
/// The t-grid (dyadic Gauss-Legendre panels; finer levels for larger |x|)
/// is built once at construction and shared by all evaluations.
class CurveApprox {
public:
    struct Value {
        double value = 0;
        double error_bound = 0;
    };

    /// x_left: left integration cutoff; pass NaN to choose automatically
    /// (exact 0-support bound for alpha < 1, density probe otherwise).
    /// x_max_hint: largest |x| the cached grid must serve.
    CurveApprox(const GameParams& gp, double gamma,
                std::vector<TermSet> term_sets, double tol,
                double x_left, double x_max_hint);

    int num_sets() const { return (int)sets_.size(); }
    const ExponentEvaluator& exponent() const { return ev_; }
    const QuadratureSpec& spec() const { return spec_; }
    double left_cutoff() const { return x_left_; }
    double left_tail_bound() const { return left_tail_; }
    double cutoff_T() const { return T_; }

    Value cdf(double x, int set = 0) const;
    Value density(double x, int set = 0) const;

    /// Uniform-grid evaluation of all sets at once (phase-recurrence inner
    /// loop). Grid point i is x0 + i*dx. Outputs are indexed [set][i].
    void scan(double x0, double dx, int count,
              std::vector<std::vector<double>>& cdf_out,
              std::vector<std::vector<double>>& dens_out,
              double* scan_cert = nullptr) const;

    /// One-off evaluation at large |x| beyond the cached grid; streams panels
    /// against an adaptively-spaced interpolation table of h.
    Value far_cdf(double x, int set = 0) const;

    /// Sampled sup of |density| over [x_L, x_hint], inflated by 1.2.
    double density_sup_estimate(int set = 0) const { return dens_sup_[(size_t)set]; }

    ~CurveApprox();
    CurveApprox(CurveApprox&&) noexcept;
    CurveApprox& operator=(CurveApprox&&) noexcept;

private:
    struct Seg;
    struct Level;

    complex_t h_of(double t, int set) const;
    int level_for(double absx) const;
    void fill_seg(Seg& seg, double t0, double t1, double w) const;
    double seg_integral(const Seg& seg, int set, bool want_cdf, double x) const;
    Value eval_at(double x, int set, bool want_cdf) const;

    GameParams gp_;
    double gamma_;
    std::vector<TermSet> sets_;
    double tol_;
    ExponentEvaluator ev_;
    DecayConstants dc_;
    double T_ = 0;
    double x_left_ = 0;
    double left_tail_ = 0;
    double x_hint_ = 0;
    double w0_ = 0.5;
    // block A [0, T_A]: refinable dyadic levels (the transform is C^1 only,
    // so the resolution is calibrated by measured convergence);
    // block B [T_A, T]: fixed width, oscillation-resolving
    std::vector<std::unique_ptr<Level>> levelsA_;
    std::unique_ptr<Seg> segB_;
    int min_level_ = 0;
    int level_cap_ = 0;
    double calib_floor_ = 0;
    double segB_cert_ = 0;
    std::vector<double> tail_dens_, tail_cdf_;  // per set
    std::vector<double> dens_sup_;
    double y_slack_ = 0;
    QuadratureSpec spec_;
};

/// Spec-level single-term operations (thin wrappers over CurveApprox).
double density_of_term(const ExponentEvaluator& ev, int k, int j, double x,
                       double tol);
double cdf_of_term(const ExponentEvaluator& ev, int k, int j, double x,
                   double tol);

/// Approximating function G_{n,ell} (its CDF / density) at one point.
double approx_cdf(const GameInstance& gi, const ExpansionTermTable& table,
                  double x, double tol);
double approx_density(const GameInstance& gi, const ExpansionTermTable& table,
                      double x, double tol);

} // namespace stpete

#endif
