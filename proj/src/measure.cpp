#include "stpete/measure.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace stpete {

ExpansionTermTable approx_table(const GameParams& gp, int ell, ApproxMode mode)
{
    if (ell < 1) throw param_error("expansion length ell must be >= 1");
    if (mode == ApproxMode::full) {
        AlphaCase ac = (gp.alpha == 1.0) ? AlphaCase::alpha1 : AlphaCase::general;
        return expansion_terms(ac, ell - 1);
    }
    if (gp.alpha == 1.0)
        throw param_error("simplified expansions are defined for alpha != 1 only");
    AlphaRegime regime = gp.alpha < 1.0 ? AlphaRegime::below1 : AlphaRegime::above1;
    return simplified_terms(ell, regime, mode == ApproxMode::simplified_tilde);
}

namespace {

// unified oracle CDF interface over the exact and envelope paths
struct OracleCdf {
    const StandardizedCdf* exact = nullptr;
    const CdfEnvelope* env = nullptr;

    static double step_at(const std::vector<double>& grid,
                          const std::vector<double>& val, double x, bool left)
    {
        auto it = left ? std::lower_bound(grid.begin(), grid.end(), x)
                       : std::upper_bound(grid.begin(), grid.end(), x);
        if (it == grid.begin()) return 0.0;
        return val[(size_t)(it - grid.begin()) - 1];
    }

    double lo(double x) const
    {
        return exact ? (*exact)(x) : step_at(env->grid, env->lower, x, false);
    }
    double hi(double x) const
    {
        return exact ? (*exact)(x) : step_at(env->grid, env->upper, x, false);
    }
    double lo_left(double x) const
    {
        return exact ? exact->left_limit(x) : step_at(env->grid, env->lower, x, true);
    }
    double hi_left(double x) const
    {
        return exact ? exact->left_limit(x) : step_at(env->grid, env->upper, x, true);
    }
};

struct Interval {
    double a, b;
    double Ga, Gb;
    double dens;  // derivative bound on [a, b]
    double ub;
};

struct CmpUb {
    bool operator()(const Interval& x, const Interval& y) const { return x.ub < y.ub; }
};

double weight_of(ErrorKind kind, double x)
{
    return (kind == ErrorKind::weighted || kind == ErrorKind::local_weighted)
               ? 1.0 + std::abs(x)
               : 1.0;
}

// one-sided discrepancy candidates at a point: a sound lower bound for
// sup |F - G| there (exact mode: the two one-sided values; envelope mode:
// distance outside the bracket)
double lb_candidate(const OracleCdf& F, double x, double G, ErrorKind kind)
{
    double w = weight_of(kind, x);
    double c = 0;
    c = std::max(c, F.lo(x) - G);
    c = std::max(c, G - F.hi(x));
    c = std::max(c, F.lo_left(x) - G);
    c = std::max(c, G - F.hi_left(x));
    return std::max(0.0, c) * w;
}

double interval_ub(const OracleCdf& F, const Interval& iv, ErrorKind kind)
{
    double w = std::max(weight_of(kind, iv.a), weight_of(kind, iv.b));
    double gm = 0.5 * (iv.Ga + iv.Gb);
    double gr = 0.5 * iv.dens * (iv.b - iv.a) + 1e-15;
    double f_lo = F.lo(iv.a);
    double f_hi = F.hi_left(iv.b);
    f_hi = std::max(f_hi, F.hi(iv.a));  // value at the left endpoint itself
    double u = std::max(f_hi - (gm - gr), (gm + gr) - f_lo);
    return std::max(0.0, u) * w;
}

ErrorMeasurement sup_discrepancy(const GameInstance& gi, int ell, ErrorKind kind,
                                 const OracleCdf& F, const CurveApprox& curve,
                                 int set, double x_lo, double x_hi,
                                 double oracle_slack, double env_width,
                                 double beyond_mass)
{
    ErrorMeasurement m;
    m.n = gi.n;
    m.gamma_n = gi.gamma_n;
    m.ell = ell;
    m.kind = kind;
    m.window_x_hi = x_hi;
    m.beyond_window_mass = beyond_mass;
    m.envelope_mode = (F.exact == nullptr);

    const double dx = std::max(0.004, (x_hi - x_lo) / 6000.0);
    const int count = (int)std::ceil((x_hi - x_lo) / dx) + 1;
    std::vector<std::vector<double>> cdfs, denss;
    double scan_cert = 0;
    curve.scan(x_lo, dx, count, cdfs, denss, &scan_cert);
    const auto& G = cdfs[(size_t)set];
    const auto& D = denss[(size_t)set];

    double mhat = curve.density_sup_estimate(set);

    double lb = 0, argmax = x_lo;
    std::priority_queue<Interval, std::vector<Interval>, CmpUb> heap;
    for (int i = 0; i < count; ++i) {
        double x = x_lo + dx * i;
        double c = lb_candidate(F, x, G[(size_t)i], kind);
        if (c > lb) { lb = c; argmax = x; }
        if (i + 1 < count) {
            Interval iv;
            iv.a = x;
            iv.b = x + dx;
            iv.Ga = G[(size_t)i];
            iv.Gb = G[(size_t)i + 1];
            iv.dens = 1.25 * std::max(std::abs(D[(size_t)i]),
                                      std::abs(D[(size_t)i + 1])) +
                      0.02 * mhat + 1e-9;
            iv.ub = interval_ub(F, iv, kind);
            heap.push(iv);
        }
    }

    double direct_cert = 0;
    double final_gap = 0;
    int iters = 0;
    const int max_iters = 4000;
    while (!heap.empty()) {
        Interval iv = heap.top();
        double target = lb * 1.02 + std::max(1e-9, scan_cert);
        if (iv.ub <= target || iters >= max_iters) {
            final_gap = std::max(0.0, iv.ub - lb);
            break;
        }
        heap.pop();
        ++iters;
        double mid = 0.5 * (iv.a + iv.b);
        CurveApprox::Value gv = curve.cdf(mid, set);
        direct_cert = std::max(direct_cert, gv.error_bound);
        double c = lb_candidate(F, mid, gv.value, kind);
        if (c > lb) { lb = c; argmax = mid; }
        Interval l{iv.a, mid, iv.Ga, gv.value, iv.dens, 0};
        Interval r{mid, iv.b, gv.value, iv.Gb, iv.dens, 0};
        l.ub = interval_ub(F, l, kind);
        r.ub = interval_ub(F, r, kind);
        heap.push(l);
        heap.push(r);
    }

    m.value = lb;
    m.argmax_x = argmax;
    m.value_error_bound =
        final_gap + scan_cert + direct_cert + oracle_slack + env_width;
    m.inconclusive = m.envelope_mode && env_width > 0.5 * std::max(lb, 1e-300);
    return m;
}

std::vector<ErrorMeasurement> measure_distribution(const GameInstance& gi,
                                                   const std::vector<int>& ells,
                                                   ErrorKind kind,
                                                   const MeasureOptions& opts)
{
    const GameParams& gp = gi.params;
    if (kind == ErrorKind::weighted && !(gp.alpha > 1.0 && gp.alpha < 2.0))
        throw regime_error("nonuniform error requires alpha in (1,2)");
    if (!gp.is_lattice())
        throw regime_error("distribution error measurement requires a lattice game "
                           "(non-lattice games go through envelope_cdf directly)");

    std::vector<TermSet> sets;
    for (int ell : ells)
        sets.push_back(numeric_terms(approx_table(gp, ell, opts.mode), gi));
    CurveApprox curve(gp, gi.gamma_n, sets, opts.tol,
                      std::numeric_limits<double>::quiet_NaN(), opts.x_hi);

    double span = (double)*gp.lattice_span;
    double est_len =
        (gi.c_n + opts.x_hi * gi.scale) / span - (double)gi.n + 1.0;

    double x_lo = curve.left_cutoff() + 0.05;

    std::vector<ErrorMeasurement> out;
    if (est_len <= (double)opts.max_exact_len) {
        SupportWindow w;
        w.x_hi = opts.x_hi;
        w.max_len = opts.max_exact_len;
        LatticePMF pmf = pmf_sum(gp, gi.n, opts.tail_budget, w);
        StandardizedCdf F(pmf, gi);
        OracleCdf oc;
        oc.exact = &F;
        double slack = pmf.fp_slack + (pmf.tail_mass - pmf.window_mass);
        for (size_t s = 0; s < ells.size(); ++s)
            out.push_back(sup_discrepancy(gi, ells[s], kind, oc, curve, (int)s,
                                          x_lo, opts.x_hi, slack, 0.0,
                                          pmf.window_mass));
    } else {
        SupportWindow w;
        w.x_hi = opts.x_hi;
        CdfEnvelope env = envelope_cdf(gp, gi.n, span, opts.tail_budget, w);
        OracleCdf oc;
        oc.env = &env;
        for (size_t s = 0; s < ells.size(); ++s)
            out.push_back(sup_discrepancy(gi, ells[s], kind, oc, curve, (int)s,
                                          x_lo, opts.x_hi, env.tail_mass,
                                          env.width_bound, env.tail_mass));
    }
    return out;
}

std::vector<ErrorMeasurement> measure_local(const GameInstance& gi,
                                            const std::vector<int>& ells,
                                            ErrorKind kind,
                                            const MeasureOptions& opts)
{
    const GameParams& gp = gi.params;
    if (!gp.is_lattice()) throw regime_error("local error requires the lattice case");
    if (kind == ErrorKind::local_weighted && !(gp.alpha > 1.0 && gp.alpha < 2.0))
        throw regime_error("weighted local error requires alpha in (1,2)");

    std::vector<TermSet> sets;
    for (int ell : ells)
        sets.push_back(numeric_terms(approx_table(gp, ell, opts.mode), gi));
    CurveApprox curve(gp, gi.gamma_n, sets, opts.tol,
                      std::numeric_limits<double>::quiet_NaN(), opts.x_hi);

    SupportWindow w;
    w.x_hi = opts.x_hi;
    w.max_len = opts.max_exact_len;
    LatticePMF pmf = pmf_sum(gp, gi.n, opts.tail_budget, w);

    const double span = pmf.unit;
    const double prefactor = gi.scale / span;  // n^{1/alpha} / r^{1/alpha}

    // density on a coarse grid; atoms are far denser than the density varies
    double x_lo = std::max(curve.left_cutoff() + 0.05,
                           (span - gi.c_n) / gi.scale - 0.1);
    double dx = std::max(0.002, (opts.x_hi - x_lo) / 8000.0);
    int count = (int)std::ceil((opts.x_hi - x_lo) / dx) + 1;
    std::vector<std::vector<double>> cdfs, denss;
    double scan_cert = 0;
    curve.scan(x_lo, dx, count, cdfs, denss, &scan_cert);

    std::vector<ErrorMeasurement> out;
    for (size_t s = 0; s < ells.size(); ++s) {
        const auto& D = denss[s];
        // second-derivative estimate for the interpolation certificate
        double d2 = 0;
        for (int i = 0; i + 2 < count; ++i)
            d2 = std::max(d2, std::abs(D[(size_t)i + 2] - 2.0 * D[(size_t)i + 1] +
                                       D[(size_t)i]) / (dx * dx));
        double interp_cert = 1.2 * d2 * dx * dx / 8.0;

        auto dens_at = [&](double x) {
            double u = (x - x_lo) / dx;
            int i = std::max(0, std::min(count - 2, (int)std::floor(u)));
            double f = u - i;
            return D[(size_t)i] * (1.0 - f) + D[(size_t)i + 1] * f;
        };

        // every lattice point in the window, occupied or not
        std::int64_t idx_lo = (std::int64_t)std::ceil(
            (x_lo * gi.scale + gi.c_n) / span - 1e-9);
        if (idx_lo < 1) idx_lo = 1;
        std::int64_t idx_hi = (std::int64_t)std::floor(
            (opts.x_hi * gi.scale + gi.c_n) / span + 1e-9);

        double best = 0, argmax = x_lo;
        for (std::int64_t idx = idx_lo; idx <= idx_hi; ++idx) {
            double p = 0;
            std::int64_t off = idx - pmf.min_index;
            if (off >= 0 && off < (std::int64_t)pmf.probs.size())
                p = pmf.probs[(size_t)off];
            double x = (span * (double)idx - gi.c_n) / gi.scale;
            double d = std::abs(prefactor * p - dens_at(x)) * weight_of(kind, x);
            if (d > best) { best = d; argmax = x; }
        }

        ErrorMeasurement m;
        m.n = gi.n;
        m.gamma_n = gi.gamma_n;
        m.ell = ells[s];
        m.kind = kind;
        m.value = best;
        m.argmax_x = argmax;
        m.window_x_hi = opts.x_hi;
        m.beyond_window_mass = pmf.tail_mass;
        double wmax = weight_of(kind, std::max(std::abs(x_lo), opts.x_hi));
        m.value_error_bound =
            (scan_cert + interp_cert) * wmax +
            prefactor * (pmf.fp_slack + (pmf.tail_mass - pmf.window_mass)) * wmax;
        out.push_back(m);
    }
    return out;
}

} // namespace

std::vector<ErrorMeasurement> measure_errors(const GameInstance& gi,
                                             const std::vector<int>& ells,
                                             ErrorKind kind,
                                             const MeasureOptions& opts)
{
    if (ells.empty()) throw param_error("no expansion lengths given");
    if (kind == ErrorKind::local || kind == ErrorKind::local_weighted)
        return measure_local(gi, ells, kind, opts);
    return measure_distribution(gi, ells, kind, opts);
}

ErrorMeasurement uniform_error(const GameInstance& gi, int ell,
                               const MeasureOptions& opts)
{
    return measure_errors(gi, {ell}, ErrorKind::uniform, opts)[0];
}

ErrorMeasurement nonuniform_error(const GameInstance& gi, int ell,
                                  const MeasureOptions& opts)
{
    return measure_errors(gi, {ell}, ErrorKind::weighted, opts)[0];
}

ErrorMeasurement local_error(const GameInstance& gi, int ell,
                             const MeasureOptions& opts)
{
    return measure_errors(gi, {ell}, ErrorKind::local, opts)[0];
}

ErrorMeasurement local_weighted_error(const GameInstance& gi, int ell,
                                      const MeasureOptions& opts)
{
    return measure_errors(gi, {ell}, ErrorKind::local_weighted, opts)[0];
}

} // namespace stpete
