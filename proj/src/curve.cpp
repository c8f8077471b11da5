#include "stpete/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stpete {

namespace {

// stable (e^{-it x_L} - e^{-it x}) / (it)
inline complex_t cdf_kernel(double t, double x, double xL)
{
    double half = 0.5 * t * (x - xL);
    double mag = 2.0 * std::sin(half) / t;
    double ph = -0.5 * t * (x + xL);
    return complex_t(mag * std::cos(ph), mag * std::sin(ph));
}

// max_{t >= 1} (1 + log_r t) / sqrt(t), for the alpha = 1 tail majorant
double log_sqrt_bound(double r)
{
    double best = 1.0;
    for (double t = 1.0; t < 1e8; t *= 1.1) {
        double v = (1.0 + std::log(t) / std::log(r)) / std::sqrt(t);
        best = std::max(best, v);
    }
    return best;
}

} // namespace

TermSet numeric_terms(const ExpansionTermTable& table, const GameInstance& gi)
{
    const GameParams& gp = gi.params;
    long double ln_n = std::log((long double)gi.n);
    long double logr_n = ln_n / std::log((long double)gp.r);

    TermSet out;
    out.push_back(TermNumeric{0, 0, 1.0});  // the leading G term
    for (const auto& t : table.terms) {
        long double c = t.coefficient.evaluate(gp);
        long double nexp = (long double)t.k_over_alpha / (long double)gp.alpha +
                           (long double)t.j_plain;
        c *= std::exp(-nexp * ln_n);
        for (int i = 0; i < t.log_power; ++i) c *= logr_n;
        if (c == 0.0L) continue;
        out.push_back(TermNumeric{t.k, t.y_power, (double)c});
    }
    return out;
}

// ------------------------------------------------------------------ internals

struct CurveApprox::Seg {
    double t0 = 0, w = 0;
    int panels = 0;
    std::vector<double> t;                   // node positions
    std::vector<std::vector<complex_t>> hw;  // [set][node], weight-premultiplied
};

// one refinement level: a deep segment on [0, T1] where |h| is O(1) and a
// 4x-coarser one on [T1, T_A]; the far block [T_A, T] is shared across levels
struct CurveApprox::Level {
    Seg a1, a2;
};

void CurveApprox::fill_seg(Seg& seg, double t0, double t1, double w) const
{
    const auto& g = gl16();
    seg.t0 = t0;
    seg.w = w;
    seg.panels = (int)std::ceil((t1 - t0) / w - 1e-12);
    size_t n_nodes = (size_t)seg.panels * 16;
    seg.hw.assign(sets_.size(), std::vector<complex_t>(n_nodes));

    std::vector<complex_t> yv_all;
    ev_.y_grid(t0, w, seg.panels, seg.t, yv_all);

    int max_j = 0, max_k = 0;
    for (const auto& s : sets_)
        for (const auto& t : s) {
            max_j = std::max(max_j, t.j);
            max_k = std::max(max_k, t.k);
        }
    std::vector<complex_t> ypow((size_t)max_j + 1), kpow((size_t)max_k + 1);

    for (size_t idx = 0; idx < n_nodes; ++idx) {
        double t = seg.t[idx];
        complex_t yv = yv_all[idx];
        complex_t ey = std::exp(yv);
        ypow[0] = complex_t(1, 0);
        for (int j = 1; j <= max_j; ++j) ypow[(size_t)j] = ypow[(size_t)j - 1] * yv;
        kpow[0] = complex_t(1, 0);
        complex_t mit(0.0, -t);
        for (int k = 1; k <= max_k; ++k) kpow[(size_t)k] = kpow[(size_t)k - 1] * mit;
        double wgt = 0.5 * w * g.weight[(size_t)(idx % 16)];
        for (size_t s = 0; s < sets_.size(); ++s) {
            complex_t acc(0, 0);
            for (const auto& term : sets_[s])
                acc += term.coef * kpow[(size_t)term.k] * ypow[(size_t)term.j];
            seg.hw[s][idx] = acc * ey * wgt;
        }
    }
}

double CurveApprox::seg_integral(const Seg& seg, int set, bool want_cdf,
                                 double x) const
{
    complex_t acc(0, 0);
    const auto& hw = seg.hw[(size_t)set];
    if (want_cdf) {
        for (size_t i = 0; i < seg.t.size(); ++i)
            acc += hw[i] * cdf_kernel(seg.t[i], x, x_left_);
    } else {
        for (size_t i = 0; i < seg.t.size(); ++i) {
            double ph = seg.t[i] * x;
            acc += hw[i] * complex_t(std::cos(ph), -std::sin(ph));
        }
    }
    return acc.real() / M_PI;
}

complex_t CurveApprox::h_of(double t, int set) const
{
    complex_t yv = ev_.y(t);
    complex_t ey = std::exp(yv);
    complex_t mit(0.0, -t);
    complex_t acc(0, 0);
    for (const auto& term : sets_[(size_t)set]) {
        complex_t v = ey;
        for (int i = 0; i < term.j; ++i) v *= yv;
        for (int i = 0; i < term.k; ++i) v *= mit;
        acc += term.coef * v;
    }
    return acc;
}

int CurveApprox::level_for(double absx) const
{
    double freq = std::max(absx, std::abs(x_left_));
    double w_req = 8.0 / (freq + 1.0);
    int L = 0;
    if (w_req < w0_) L = (int)std::ceil(std::log2(w0_ / w_req));
    return std::min(std::max(L, min_level_), level_cap_);
}

CurveApprox::CurveApprox(const GameParams& gp, double gamma,
                         std::vector<TermSet> term_sets, double tol,
                         double x_left, double x_max_hint)
    : gp_(gp), gamma_(gamma), sets_(std::move(term_sets)), tol_(tol),
      ev_(gp, gamma, std::min(1e-12, tol * 1e-3), 1e3),
      dc_(decay_constant(gp, gamma))
{
    if (sets_.empty()) throw param_error("CurveApprox needs at least one term set");
    if (!(tol > 0)) throw param_error("tol must be positive");
    x_hint_ = std::max(8.0, x_max_hint);

    int max_k = 0, max_j = 0;
    double coef_sum = 0;
    for (const auto& s : sets_)
        for (const auto& t : s) {
            max_k = std::max(max_k, t.k);
            max_j = std::max(max_j, t.j);
            coef_sum += std::abs(t.coef);
        }

    // cutoff: grow T until the per-set tail certificates fit in tol/2
    double j_pow = gp_.alpha;
    double cu_eff = dc_.C_upper;
    if (dc_.log_factor) {
        cu_eff = dc_.C_upper * log_sqrt_bound(gp_.r);
        j_pow = 1.5;
    }
    T_ = choose_cutoff(dc_.C_lower, gp_.alpha, max_k, max_j,
                       tol_ / (1.0 + coef_sum), cu_eff, j_pow);
    auto set_tails = [&]() {
        tail_dens_.assign(sets_.size(), 0.0);
        tail_cdf_.assign(sets_.size(), 0.0);
        for (size_t s = 0; s < sets_.size(); ++s) {
            for (const auto& t : sets_[s]) {
                double cj = std::pow(cu_eff, (double)t.j);
                double Kd = (double)t.k + j_pow * (double)t.j;
                tail_dens_[s] += std::abs(t.coef) * cj *
                                 exp_tail_bound(T_, Kd, dc_.C_lower, gp_.alpha) / M_PI;
                tail_cdf_[s] += std::abs(t.coef) * cj * 2.0 *
                                exp_tail_bound(T_, Kd - 1.0, dc_.C_lower, gp_.alpha) / M_PI;
            }
        }
    };
    set_tails();
    for (int guard = 0; guard < 200; ++guard) {
        double worst = 0;
        for (size_t s = 0; s < sets_.size(); ++s)
            worst = std::max(worst, std::max(tail_dens_[s], tail_cdf_[s]));
        if (worst < 0.5 * tol_) break;
        T_ *= 1.2;
        set_tails();
    }

    ev_ = ExponentEvaluator(gp_, gamma_, std::min(1e-12, tol * 1e-3), T_ * 1.05);

    // left cutoff: exact for alpha < 1 (positive support), probed otherwise
    if (std::isnan(x_left)) {
        if (gp_.alpha < 1.0) {
            x_left_ = -0.5;
            left_tail_ = 0.0;
        } else {
            auto probe_dens = [&](double x) {
                double w = std::min(w0_, 8.0 / (std::abs(x) + 1.0));
                int panels = (int)std::ceil(T_ / w);
                const auto& g = gl16();
                double worst = 0;
                for (size_t s = 0; s < sets_.size(); ++s) {
                    complex_t acc(0, 0);
                    for (int m = 0; m < panels; ++m) {
                        for (int i = 0; i < 16; ++i) {
                            double t = (m + 0.5 * (1.0 + g.node[i])) * w;
                            complex_t e(std::cos(t * x), -std::sin(t * x));
                            acc += h_of(t, (int)s) * e * (0.5 * w * g.weight[i]);
                        }
                    }
                    worst = std::max(worst, std::abs(acc.real()) / M_PI);
                }
                return worst;
            };
            x_left_ = -10.0;
            double d = probe_dens(x_left_);
            double thresh = std::max(tol_ / 64.0, 1e-9);
            while (d > thresh && x_left_ > -64.0) {
                x_left_ = std::max(-64.0, 1.5 * x_left_);
                d = probe_dens(x_left_);
            }
            left_tail_ = 16.0 * d + thresh;
        }
    } else {
        x_left_ = x_left;
        left_tail_ = (gp_.alpha < 1.0 && x_left_ < 0) ? 0.0 : tol_ / 16.0;
    }

    // grid: levels refine [0, T_A] (deep on [0, T1] where |h| is O(1),
    // 4x coarser beyond); the far block [T_A, T] only needs the oscillation
    // resolved and is shared by all levels
    double f_max = std::max(x_hint_, std::abs(x_left_));
    double T_A = std::pow(std::log(1e4) / dc_.C_lower, 1.0 / gp_.alpha);
    T_A = std::min(std::max(T_A, 4.0), T_);
    double T1 = std::pow(std::log(20.0) / dc_.C_lower, 1.0 / gp_.alpha);
    T1 = std::min(std::max(T1, 2.0), T_A);
    double wB = std::min(w0_, 8.0 / (f_max + 1.0));

    int osc_level = 0;
    if (wB < w0_) osc_level = (int)std::ceil(std::log2(w0_ / wB));
    const int hard_cap = osc_level + 12;

    segB_ = std::make_unique<Seg>();
    if (T_A < T_) fill_seg(*segB_, T_A, T_, wB);

    levelsA_.clear();
    auto add_level = [&](int L) {
        levelsA_.push_back(std::make_unique<Level>());
        double w = w0_ / std::pow(2.0, (double)L);
        fill_seg(levelsA_.back()->a1, 0.0, T1, w);
        if (T1 < T_A)
            fill_seg(levelsA_.back()->a2, T1, T_A, std::min(4.0 * w, wB));
    };
    add_level(0);

    // calibration: refine until the block-A increments settle below tol/3
    // at probe points (the integrand is C^1 only, so convergence is
    // algebraic and must be measured, not assumed)
    std::vector<double> probes = {std::min(2.0, x_hint_), 0.5 * x_hint_, x_hint_};
    min_level_ = 0;
    calib_floor_ = 0;
    {
        auto level_int = [&](int L, int s, bool cdf, double x) {
            const Level& lv = *levelsA_[(size_t)L];
            double v = seg_integral(lv.a1, s, cdf, x);
            if (lv.a2.panels > 0) v += seg_integral(lv.a2, s, cdf, x);
            return v;
        };
        auto probe_diff = [&](int L) {
            double worst = 0;
            for (double x : probes) {
                for (int s = 0; s < (int)sets_.size(); ++s) {
                    worst = std::max(worst, std::abs(level_int(L, s, true, x) -
                                                     level_int(L - 1, s, true, x)));
                    worst = std::max(worst, std::abs(level_int(L, s, false, x) -
                                                     level_int(L - 1, s, false, x)));
                }
            }
            return worst;
        };
        int L = 1;
        double diff = 0, prev_diff = 0;
        while (true) {
            add_level(L);
            prev_diff = diff;
            diff = probe_diff(L);
            if (L >= osc_level + 1 && diff <= tol_ / 3.0) break;
            if (L >= hard_cap) break;
            ++L;
        }
        min_level_ = L;
        // the convergence is erratic (aliasing of the unresolved log-periodic
        // oscillations), so floor the certificate with the last increments
        calib_floor_ = 1.5 * diff + 0.05 * prev_diff;
    }
    level_cap_ = (int)levelsA_.size() - 1;

    // block-B certificate: compare against a half-width rebuild once
    segB_cert_ = 0;
    if (segB_->panels > 0) {
        Seg fine;
        fill_seg(fine, T_A, T_, 0.5 * wB);
        for (double x : probes) {
            for (int s = 0; s < (int)sets_.size(); ++s) {
                segB_cert_ = std::max(segB_cert_,
                                      std::abs(seg_integral(*segB_, s, true, x) -
                                               seg_integral(fine, s, true, x)));
                segB_cert_ = std::max(segB_cert_,
                                      std::abs(seg_integral(*segB_, s, false, x) -
                                               seg_integral(fine, s, false, x)));
            }
        }
    }

    // propagated exponent-series slack
    double hw_sum = 0;
    for (size_t s = 0; s < sets_.size(); ++s) {
        double sum = 0;
        for (const auto& v : levelsA_.back()->a1.hw[s]) sum += std::abs(v);
        if (levelsA_.back()->a2.panels > 0)
            for (const auto& v : levelsA_.back()->a2.hw[s]) sum += std::abs(v);
        hw_sum = std::max(hw_sum, sum);
    }
    y_slack_ = ev_.tol() * (1.0 + max_j) * 2.0 * hw_sum / M_PI;

    // sampled density sup per set
    dens_sup_.assign(sets_.size(), 0.0);
    {
        std::vector<std::vector<double>> cs, ds;
        int n_samp = (int)std::ceil((x_hint_ - x_left_) / 0.1) + 1;
        scan(x_left_, 0.1, n_samp, cs, ds);
        for (size_t s = 0; s < sets_.size(); ++s) {
            double mx = 0;
            for (double v : ds[s]) mx = std::max(mx, std::abs(v));
            dens_sup_[s] = 1.2 * mx;
        }
    }

    spec_.cutoff_T = T_;
    spec_.panel_count = levelsA_.back()->a1.panels + levelsA_.back()->a2.panels +
                        segB_->panels;
    spec_.tol = tol_;
    spec_.tail_certificate = segB_cert_ + calib_floor_;
    for (size_t s = 0; s < sets_.size(); ++s)
        spec_.tail_certificate = std::max(spec_.tail_certificate,
                                          std::max(tail_dens_[s], tail_cdf_[s]));
}

CurveApprox::~CurveApprox() = default;
CurveApprox::CurveApprox(CurveApprox&&) noexcept = default;
CurveApprox& CurveApprox::operator=(CurveApprox&&) noexcept = default;

CurveApprox::Value CurveApprox::eval_at(double x, int set, bool want_cdf) const
{
    int Lf = level_for(std::abs(x));
    if (Lf == 0) Lf = 1;
    int Lc = Lf - 1;

    auto level_int = [&](int L) {
        const Level& lv = *levelsA_[(size_t)L];
        double v = seg_integral(lv.a1, set, want_cdf, x);
        if (lv.a2.panels > 0) v += seg_integral(lv.a2, set, want_cdf, x);
        return v;
    };
    double segb = segB_->panels > 0 ? seg_integral(*segB_, set, want_cdf, x) : 0.0;
    double vf = level_int(Lf) + segb;
    double vc = level_int(Lc) + segb;

    Value out;
    out.value = vf;
    out.error_bound = std::abs(vf - vc) + calib_floor_ + segB_cert_ + y_slack_ +
                      (want_cdf ? tail_cdf_[(size_t)set] + left_tail_
                                : tail_dens_[(size_t)set]);
    return out;
}

CurveApprox::Value CurveApprox::cdf(double x, int set) const
{
    return eval_at(x, set, true);
}

CurveApprox::Value CurveApprox::density(double x, int set) const
{
    return eval_at(x, set, false);
}

void CurveApprox::scan(double x0, double dx, int count,
                       std::vector<std::vector<double>>& cdf_out,
                       std::vector<std::vector<double>>& dens_out,
                       double* scan_cert) const
{
    double x_last = x0 + dx * (double)(count - 1);
    int L = level_for(std::max(std::abs(x0), std::abs(x_last)));
    const Seg& A = levelsA_[(size_t)L]->a1;
    const Seg& A2 = levelsA_[(size_t)L]->a2;
    const Seg& B = *segB_;
    size_t nA = A.t.size(), nA2 = nA + A2.t.size(), n = nA2 + B.t.size();

    cdf_out.assign(sets_.size(), std::vector<double>((size_t)count));
    dens_out.assign(sets_.size(), std::vector<double>((size_t)count));

    auto node_t = [&](size_t i) {
        return i < nA ? A.t[i] : (i < nA2 ? A2.t[i - nA] : B.t[i - nA2]);
    };
    auto node_hw = [&](size_t s, size_t i) {
        return i < nA ? A.hw[s][i] : (i < nA2 ? A2.hw[s][i - nA] : B.hw[s][i - nA2]);
    };

    std::vector<complex_t> cur(n), step(n), EL(n), inv_it(n);
    for (size_t i = 0; i < n; ++i) {
        double t = node_t(i);
        step[i] = complex_t(std::cos(t * dx), -std::sin(t * dx));
        EL[i] = complex_t(std::cos(t * x_left_), -std::sin(t * x_left_));
        inv_it[i] = complex_t(0.0, -1.0 / t);
    }

    const int RESYNC = 256;
    double worst_spot = 0;
    std::vector<complex_t> Ic(sets_.size()), Id(sets_.size());
    for (int m = 0; m < count; ++m) {
        double x = x0 + dx * (double)m;
        if (m % RESYNC == 0) {
            for (size_t i = 0; i < n; ++i) {
                double ph = node_t(i) * x;
                cur[i] = complex_t(std::cos(ph), -std::sin(ph));
            }
        }
        std::fill(Ic.begin(), Ic.end(), complex_t(0, 0));
        std::fill(Id.begin(), Id.end(), complex_t(0, 0));
        for (size_t i = 0; i < n; ++i) {
            complex_t kc = (EL[i] - cur[i]) * inv_it[i];
            complex_t kd = cur[i];
            for (size_t s = 0; s < sets_.size(); ++s) {
                Ic[s] += node_hw(s, i) * kc;
                Id[s] += node_hw(s, i) * kd;
            }
            cur[i] *= step[i];
        }
        for (size_t s = 0; s < sets_.size(); ++s) {
            cdf_out[s][(size_t)m] = Ic[s].real() / M_PI;
            dens_out[s][(size_t)m] = Id[s].real() / M_PI;
        }
        if (m % 997 == 0) {
            Value v = eval_at(x, 0, true);
            worst_spot = std::max(worst_spot,
                                  std::abs(v.value - cdf_out[0][(size_t)m]));
            Value w = eval_at(x, 0, false);
            worst_spot = std::max(worst_spot,
                                  std::abs(w.value - dens_out[0][(size_t)m]));
        }
    }
    if (scan_cert) {
        double tails = 0;
        for (size_t s = 0; s < sets_.size(); ++s)
            tails = std::max(tails, tail_cdf_[s]);
        *scan_cert = worst_spot + calib_floor_ + segB_cert_ + tails + left_tail_ +
                     y_slack_ + 1e-12;
    }
}

CurveApprox::Value CurveApprox::far_cdf(double x, int set) const
{
    // adaptively spaced table of h for 4-point Lagrange interpolation
    struct Block {
        double t0, s;
        std::vector<complex_t> h;
    };
    std::vector<Block> blocks;
    std::vector<double> edges;
    double freq_scale = dc_.C_upper * gp_.alpha;
    double edge = 0;
    double next = 1.0;
    while (edge < T_) {
        double hi = std::min(next, T_);
        Block b;
        double fr = 1.0 + freq_scale * std::pow(std::max(edge, 1.0), gp_.alpha - 1.0);
        b.s = std::max(1e-3, std::min(0.25, 0.01 / fr));
        b.t0 = edge - 2.0 * b.s;
        int cnt = (int)std::ceil((hi - b.t0) / b.s) + 4;
        b.h.resize((size_t)cnt);
        for (int i = 0; i < cnt; ++i) {
            double t = b.t0 + b.s * i;
            // h(-t) = conj(h(t)); keeps the stencil valid across t = 0
            b.h[(size_t)i] = (t < 0) ? std::conj(h_of(-t, set)) : h_of(t, set);
        }
        blocks.push_back(std::move(b));
        edges.push_back(hi);
        edge = hi;
        next *= 2.0;
    }
    auto h_interp = [&](double t) {
        size_t bi = 0;
        while (bi + 1 < edges.size() && t > edges[bi]) ++bi;
        const Block& b = blocks[bi];
        double u = (t - b.t0) / b.s;
        int i1 = (int)std::floor(u);
        i1 = std::max(1, std::min((int)b.h.size() - 3, i1));
        double f = u - i1;
        double w0l = -f * (f - 1.0) * (f - 2.0) / 6.0;
        double w1l = (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0;
        double w2l = -(f + 1.0) * f * (f - 2.0) / 2.0;
        double w3l = (f + 1.0) * f * (f - 1.0) / 6.0;
        return b.h[(size_t)i1 - 1] * w0l + b.h[(size_t)i1] * w1l +
               b.h[(size_t)i1 + 1] * w2l + b.h[(size_t)i1 + 2] * w3l;
    };

    double interp_err = 0;
    for (int i = 1; i <= 48; ++i) {
        double t = T_ * (double)i / 49.0 + 0.013;
        if (t >= T_) break;
        interp_err = std::max(interp_err, std::abs(h_interp(t) - h_of(t, set)));
    }
    double dxl = std::abs(x - x_left_);
    double interp_cert =
        interp_err * (2.0 + 2.0 * std::log(std::max(T_ * dxl, 3.0))) / M_PI;

    auto stream = [&](double w) {
        int panels = (int)std::ceil(T_ / w);
        const auto& g = gl16();
        complex_t acc(0, 0);
        complex_t stepP[16], stepL[16], curP[16], curL[16];
        for (int i = 0; i < 16; ++i) {
            double t0 = 0.5 * (1.0 + g.node[i]) * w;
            stepP[i] = complex_t(std::cos(w * x), -std::sin(w * x));
            stepL[i] = complex_t(std::cos(w * x_left_), -std::sin(w * x_left_));
            curP[i] = complex_t(std::cos(t0 * x), -std::sin(t0 * x));
            curL[i] = complex_t(std::cos(t0 * x_left_), -std::sin(t0 * x_left_));
        }
        for (int m = 0; m < panels; ++m) {
            if (m % 128 == 0 && m > 0) {
                for (int i = 0; i < 16; ++i) {
                    double t = (m + 0.5 * (1.0 + g.node[i])) * w;
                    curP[i] = complex_t(std::cos(t * x), -std::sin(t * x));
                    curL[i] = complex_t(std::cos(t * x_left_), -std::sin(t * x_left_));
                }
            }
            for (int i = 0; i < 16; ++i) {
                double t = (m + 0.5 * (1.0 + g.node[i])) * w;
                complex_t K = (curL[i] - curP[i]) * complex_t(0.0, -1.0 / t);
                acc += h_interp(t) * K * (0.5 * w * g.weight[i]);
                curP[i] *= stepP[i];
                curL[i] *= stepL[i];
            }
        }
        return acc.real() / M_PI;
    };

    double w = std::min(w0_, 8.0 / (std::max(std::abs(x), std::abs(x_left_)) + 1.0));
    double vf = stream(0.5 * w), vc = stream(w);
    Value out;
    out.value = vf;
    out.error_bound = std::abs(vf - vc) + tail_cdf_[(size_t)set] + left_tail_ +
                      y_slack_ + interp_cert;
    return out;
}

double density_of_term(const ExponentEvaluator& ev, int k, int j, double x,
                       double tol)
{
    CurveApprox c(ev.params(), ev.gamma(), {TermSet{TermNumeric{k, j, 1.0}}}, tol,
                  std::numeric_limits<double>::quiet_NaN(),
                  std::max(8.0, std::abs(x) + 1.0));
    return c.density(x).value;
}

double cdf_of_term(const ExponentEvaluator& ev, int k, int j, double x,
                   double tol)
{
    CurveApprox c(ev.params(), ev.gamma(), {TermSet{TermNumeric{k, j, 1.0}}}, tol,
                  std::numeric_limits<double>::quiet_NaN(),
                  std::max(8.0, std::abs(x) + 1.0));
    return c.cdf(x).value;
}

double approx_cdf(const GameInstance& gi, const ExpansionTermTable& table,
                  double x, double tol)
{
    CurveApprox c(gi.params, gi.gamma_n, {numeric_terms(table, gi)}, tol,
                  std::numeric_limits<double>::quiet_NaN(),
                  std::max(8.0, std::abs(x) + 1.0));
    return c.cdf(x).value;
}

double approx_density(const GameInstance& gi, const ExpansionTermTable& table,
                      double x, double tol)
{
    CurveApprox c(gi.params, gi.gamma_n, {numeric_terms(table, gi)}, tol,
                  std::numeric_limits<double>::quiet_NaN(),
                  std::max(8.0, std::abs(x) + 1.0));
    return c.density(x).value;
}

} // namespace stpete
