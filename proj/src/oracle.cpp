#include "stpete/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fftw3.h>

namespace stpete {

namespace {

constexpr std::int64_t kDenseCap = (std::int64_t)1 << 26;

double kahan_sum(const std::vector<double>& v)
{
    double s = 0, c = 0;
    for (double x : v) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

// linear convolution: direct (exact) while the nonzero work is small,
// fftw beyond that
std::vector<double> conv_vec(const std::vector<double>& a,
                             const std::vector<double>& b, double& fp_slack)
{
    size_t la = a.size(), lb = b.size();
    size_t lo = la + lb - 1;
    size_t nnz_a = 0, nnz_b = 0;
    for (double v : a) nnz_a += (v != 0);
    for (double v : b) nnz_b += (v != 0);
    double direct_cost = std::min((double)nnz_a * (double)lb,
                                  (double)nnz_b * (double)la);
    if (direct_cost <= (double)(1 << 26)) {
        std::vector<double> out(lo, 0.0);
        if ((double)nnz_a * (double)lb <= (double)nnz_b * (double)la) {
            for (size_t i = 0; i < la; ++i) {
                double ai = a[i];
                if (ai == 0) continue;
                for (size_t j = 0; j < lb; ++j) out[i + j] += ai * b[j];
            }
        } else {
            for (size_t j = 0; j < lb; ++j) {
                double bj = b[j];
                if (bj == 0) continue;
                for (size_t i = 0; i < la; ++i) out[i + j] += a[i] * bj;
            }
        }
        // accumulation rounding, one epsilon per product into unit mass
        fp_slack += 1e-16 * (double)std::min(nnz_a, nnz_b);
        return out;
    }

    size_t nfft = 1;
    while (nfft < lo) nfft <<= 1;
    std::vector<double> fa(nfft, 0.0), fb(nfft, 0.0);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    size_t nc = nfft / 2 + 1;
    fftw_complex* Fa = fftw_alloc_complex(nc);
    fftw_complex* Fb = fftw_alloc_complex(nc);
    fftw_plan pa = fftw_plan_dft_r2c_1d((int)nfft, fa.data(), Fa, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_r2c_1d((int)nfft, fb.data(), Fb, FFTW_ESTIMATE);
    fftw_execute(pa);
    fftw_execute(pb);
    for (size_t i = 0; i < nc; ++i) {
        double re = Fa[i][0] * Fb[i][0] - Fa[i][1] * Fb[i][1];
        double im = Fa[i][0] * Fb[i][1] + Fa[i][1] * Fb[i][0];
        Fa[i][0] = re;
        Fa[i][1] = im;
    }
    fftw_plan pi = fftw_plan_dft_c2r_1d((int)nfft, Fa, fa.data(), FFTW_ESTIMATE);
    fftw_execute(pi);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(pi);
    fftw_free(Fa);
    fftw_free(Fb);

    std::vector<double> out(lo);
    double clipped = 0;
    for (size_t i = 0; i < lo; ++i) {
        double v = fa[i] / (double)nfft;
        if (v < 0) { clipped -= v; v = 0; }
        out[i] = v;
    }
    // mass defect of the fft path, tracked not assumed away
    fp_slack += clipped + 1e-15 * std::log2((double)nfft);
    return out;
}

enum class Regrid { none, floor_dir, ceil_dir };

// halve the resolution (unit *= 2), biasing positions down or up;
// position error per atom is < old unit, accumulated in pos_slack
void regrid_half(LatticePMF& pmf, Regrid mode, double& pos_slack)
{
    std::int64_t lo_new = (mode == Regrid::floor_dir)
                              ? (pmf.min_index >= 0 ? pmf.min_index / 2
                                                    : (pmf.min_index - 1) / 2)
                              : (pmf.min_index + 1) / 2;
    size_t n_new = pmf.probs.size() / 2 + 2;
    std::vector<double> out(n_new, 0.0);
    for (size_t i = 0; i < pmf.probs.size(); ++i) {
        std::int64_t idx = pmf.min_index + (std::int64_t)i;
        std::int64_t ni = (mode == Regrid::floor_dir)
                              ? (idx >= 0 ? idx / 2 : (idx - 1) / 2)
                              : (idx >= 0 ? (idx + 1) / 2 : idx / 2);
        out[(size_t)(ni - lo_new)] += pmf.probs[i];
    }
    while (!out.empty() && out.back() == 0.0) out.pop_back();
    pmf.probs = std::move(out);
    pmf.min_index = lo_new;
    pos_slack += pmf.unit;
    pmf.unit *= 2.0;
}

struct ChainOptions {
    double cap_position = std::numeric_limits<double>::infinity();
    Regrid regrid = Regrid::none;
    std::int64_t max_len = kDenseCap;
};

std::int64_t cap_index_for(const LatticePMF& pmf, double cap_position)
{
    if (!std::isfinite(cap_position)) return -1;
    double ci = std::floor(cap_position / pmf.unit);
    if (ci < 1) ci = 1;
    return (std::int64_t)std::min(ci, (double)kDenseCap);
}

LatticePMF conv_step(const LatticePMF& a, const LatticePMF& b, double prune,
                     const ChainOptions& opt, double& pos_slack)
{
    LatticePMF out = convolve(a, b, prune, cap_index_for(a, opt.cap_position));
    while ((std::int64_t)out.probs.size() > opt.max_len) {
        if (opt.regrid == Regrid::none)
            throw budget_error("exact support exceeds max_len; use the envelope path");
        regrid_half(out, opt.regrid, pos_slack);
    }
    return out;
}

// square-and-multiply chain for the n-fold convolution with geometric prune
// budgets (later steps get larger shares, so the certificate telescopes)
LatticePMF power_chain(const LatticePMF& base, std::int64_t n, double prune_pool,
                       const ChainOptions& opt, double& pos_slack)
{
    int steps = 0;
    {
        std::int64_t m = n;
        while (m > 1) { steps += 1 + (int)(m & 1); m >>= 1; }
    }
    int step_no = 0;
    auto next_prune = [&]() {
        ++step_no;
        return prune_pool / std::pow(2.0, (double)(steps - step_no + 1));
    };

    LatticePMF result;
    bool have_result = false;
    LatticePMF sq = base;
    std::int64_t m = n;
    while (true) {
        if (m & 1) {
            if (!have_result) { result = sq; have_result = true; }
            else result = conv_step(result, sq, next_prune(), opt, pos_slack);
        }
        m >>= 1;
        if (m == 0) break;
        sq = conv_step(sq, sq, next_prune(), opt, pos_slack);
    }
    return result;
}

} // namespace

double LatticePMF::mass() const { return kahan_sum(probs); }

LatticePMF pmf_single(const GameParams& gp, double tail_budget)
{
    if (!gp.is_lattice())
        throw regime_error("pmf_single requires the lattice case; use envelope_cdf");
    if (!(tail_budget > 0)) throw param_error("tail_budget must be positive");
    std::int64_t span = *gp.lattice_span;

    int K = (int)std::ceil(std::log(tail_budget) / std::log(gp.q));
    if (K < 1) K = 1;
    // positions span^k, index span^{k-1}
    std::int64_t top = 1;
    for (int k = 1; k < K; ++k) {
        if (top > kDenseCap / span)
            throw budget_error("single-game support exceeds the dense cap; "
                               "loosen tail_budget or use a window");
        top *= span;
    }
    LatticePMF out;
    out.unit = (double)span;
    out.min_index = 1;
    out.probs.assign((size_t)top, 0.0);
    double w = gp.p;
    std::int64_t idx = 1;
    for (int k = 1; k <= K; ++k) {
        out.probs[(size_t)(idx - 1)] += w;
        w *= gp.q;
        if (k < K) idx *= span;
    }
    out.tail_mass = std::pow(gp.q, (double)K);
    return out;
}

LatticePMF convolve(const LatticePMF& a, const LatticePMF& b, double prune,
                    std::int64_t cap_index)
{
    if (a.unit != b.unit) throw lattice_error("convolve: span mismatch");
    LatticePMF out;
    out.unit = a.unit;
    out.min_index = a.min_index + b.min_index;
    out.fp_slack = a.fp_slack + b.fp_slack;
    out.window_mass = a.window_mass + b.window_mass;
    out.tail_mass = a.tail_mass + b.tail_mass;

    out.probs = conv_vec(a.probs, b.probs, out.fp_slack);

    // positional window cap first (exact bookkeeping: gains are positive)
    if (cap_index >= 0) {
        std::int64_t keep = cap_index - out.min_index + 1;
        if (keep < 1) keep = 1;
        if ((std::int64_t)out.probs.size() > keep) {
            double dropped = 0, c = 0;
            for (size_t i = (size_t)keep; i < out.probs.size(); ++i) {
                double y = out.probs[i] - c;
                double t = dropped + y;
                c = (t - dropped) - y;
                dropped = t;
            }
            out.probs.resize((size_t)keep);
            out.window_mass += dropped;
            out.tail_mass += dropped;
        }
    }

    // far-tail prune within budget
    if (prune > 0 && !out.probs.empty()) {
        double acc = 0;
        size_t cut = out.probs.size();
        while (cut > 1 && acc + out.probs[cut - 1] <= prune) {
            acc += out.probs[cut - 1];
            --cut;
        }
        if (cut < out.probs.size()) {
            out.probs.resize(cut);
            out.tail_mass += acc;
        }
    }
    return out;
}

namespace {

LatticePMF windowed_single(const GameParams& gp, std::int64_t n,
                           double tail_budget, double cap_position,
                           double& single_tail_total, bool& window_bit)
{
    // n * q^K <= tail_budget/2, or the window cap if it bites first
    double single_budget = tail_budget / (2.0 * (double)n);
    int K_needed = (int)std::ceil(std::log(single_budget) / std::log(gp.q));
    if (K_needed < 1) K_needed = 1;
    std::int64_t span = *gp.lattice_span;
    if (std::isfinite(cap_position)) {
        std::int64_t cap_index = (std::int64_t)std::max(
            1.0, std::min(std::floor(cap_position / (double)span), (double)kDenseCap));
        int K_window = 1;
        std::int64_t idx = 1;
        while (idx <= cap_index / span) { idx *= span; ++K_window; }
        window_bit = K_window < K_needed;
        K_needed = std::min(K_needed, K_window);
    }
    LatticePMF base =
        pmf_single(gp, std::pow(gp.q, (double)K_needed) * (1.0 + 1e-9));
    // exact attribution: the n-fold convolution of the truncated single has
    // mass (1 - q^K)^n, so truncation omits exactly 1 - (1 - q^K)^n
    single_tail_total = 1.0 - std::pow(1.0 - base.tail_mass, (double)n);
    base.tail_mass = 0;
    return base;
}

} // namespace

LatticePMF pmf_sum(const GameParams& gp, std::int64_t n, double tail_budget,
                   const SupportWindow& window)
{
    if (n < 1) throw param_error("n must be >= 1");
    if (!gp.is_lattice())
        throw regime_error("pmf_sum requires the lattice case; use envelope_cdf");

    ChainOptions opt;
    opt.max_len = window.max_len;
    if (std::isfinite(window.x_hi)) {
        double scale = std::pow((double)n, 1.0 / gp.alpha);
        opt.cap_position = centering(gp, n) + window.x_hi * scale;
        if (opt.cap_position < (double)(2 * *gp.lattice_span))
            opt.cap_position = (double)(2 * *gp.lattice_span);
    }

    double single_tail_total = 0;
    bool window_bit = false;
    LatticePMF base = windowed_single(gp, n, tail_budget, opt.cap_position,
                                      single_tail_total, window_bit);

    double pos_slack = 0;
    LatticePMF result = power_chain(base, n, tail_budget / 2.0, opt, pos_slack);
    result.tail_mass += single_tail_total;
    if (window_bit) result.window_mass += single_tail_total;
    return result;
}

StandardizedCdf::StandardizedCdf(const LatticePMF& pmf, const GameInstance& gi)
    : gi_(gi), unit_(pmf.unit), min_index_(pmf.min_index)
{
    cum_.resize(pmf.probs.size());
    double s = 0, c = 0;
    for (size_t i = 0; i < pmf.probs.size(); ++i) {
        double y = pmf.probs[i] - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
        cum_[i] = s;
    }
}

double StandardizedCdf::atom_position(std::int64_t i) const
{
    return (unit_ * (double)(min_index_ + i) - gi_.c_n) / gi_.scale;
}

double StandardizedCdf::atom_mass(std::int64_t i) const
{
    return i == 0 ? cum_[0] : cum_[(size_t)i] - cum_[(size_t)i - 1];
}

double StandardizedCdf::operator()(double x) const
{
    // largest index i with position(i) <= x
    double pos = x * gi_.scale + gi_.c_n;
    double fi = std::floor(pos / unit_ + 1e-12) - (double)min_index_;
    if (fi < 0) return 0.0;
    std::int64_t i = (std::int64_t)fi;
    if (i >= (std::int64_t)cum_.size()) i = (std::int64_t)cum_.size() - 1;
    return cum_[(size_t)i];
}

double StandardizedCdf::left_limit(double x) const
{
    double pos = x * gi_.scale + gi_.c_n;
    double fi = std::ceil(pos / unit_ - 1e-12) - 1.0 - (double)min_index_;
    if (fi < 0) return 0.0;
    std::int64_t i = (std::int64_t)fi;
    if (i >= (std::int64_t)cum_.size()) i = (std::int64_t)cum_.size() - 1;
    return cum_[(size_t)i];
}

namespace {

// single-game pmf with atom positions rounded onto the grid_step lattice
// (identity when grid_step divides every atom position, e.g. the exact span)
LatticePMF rounded_single(const GameParams& gp, double grid_step,
                          double tail_budget, bool round_down,
                          double cap_position)
{
    int K = (int)std::ceil(std::log(tail_budget) / std::log(gp.q));
    if (K < 1) K = 1;
    const double lr = std::log(gp.r) / gp.alpha;
    std::vector<std::pair<std::int64_t, double>> atoms;
    double w = gp.p;
    double dropped = 0;
    std::int64_t cap_index = std::isfinite(cap_position)
        ? (std::int64_t)std::max(1.0, std::floor(cap_position / grid_step))
        : -1;
    for (int k = 1; k <= K; ++k) {
        double pos = std::exp((double)k * lr);
        double gi = pos / grid_step;
        std::int64_t idx = round_down ? (std::int64_t)std::floor(gi + 1e-9)
                                      : (std::int64_t)std::ceil(gi - 1e-9);
        if (idx < 0) idx = 0;
        if (cap_index >= 0 && idx > cap_index) dropped += w;
        else atoms.emplace_back(idx, w);
        w *= gp.q;
    }
    if (atoms.empty())
        throw budget_error("window cap dropped every single-game atom");
    std::int64_t lo = atoms.front().first, hi = atoms.front().first;
    for (auto& [i, p] : atoms) { lo = std::min(lo, i); hi = std::max(hi, i); }
    if (hi - lo + 1 > kDenseCap)
        throw budget_error("rounded single-game support exceeds the dense cap");
    LatticePMF out;
    out.unit = grid_step;
    out.min_index = lo;
    out.probs.assign((size_t)(hi - lo + 1), 0.0);
    for (auto& [i, p] : atoms) out.probs[(size_t)(i - lo)] += p;
    out.tail_mass = std::pow(gp.q, (double)K) + dropped;
    out.window_mass = dropped;
    return out;
}

} // namespace

CdfEnvelope envelope_cdf(const GameParams& gp, std::int64_t n, double grid_step,
                         double tail_budget, const SupportWindow& window)
{
    if (!(grid_step > 0)) throw param_error("grid_step must be positive");
    GameInstance gi = make_instance(gp, n);

    ChainOptions opt;
    opt.max_len = (std::int64_t)1 << 21;
    if (std::isfinite(window.x_hi))
        opt.cap_position = std::max(gi.c_n + window.x_hi * gi.scale, 2.0 * grid_step);

    auto run = [&](bool down) {
        double single_budget = tail_budget / (2.0 * (double)n);
        LatticePMF base = rounded_single(gp, grid_step, single_budget, down,
                                         opt.cap_position);
        double single_tail_total = 1.0 - std::pow(1.0 - base.tail_mass, (double)n);
        base.tail_mass = 0;
        base.window_mass = 0;
        ChainOptions o = opt;
        o.regrid = down ? Regrid::floor_dir : Regrid::ceil_dir;
        double pos_slack = 0;
        LatticePMF r = power_chain(base, n, tail_budget / 2.0, o, pos_slack);
        r.tail_mass += single_tail_total;
        return r;
    };

    // positions rounded down make the rounded sum stochastically smaller,
    // hence its CDF is an upper bound for the true one
    LatticePMF down = run(true);
    LatticePMF up = run(false);
    StandardizedCdf Fdown(down, gi), Fup(up, gi);

    CdfEnvelope env;
    env.tail_mass = std::max(down.tail_mass, up.tail_mass);

    // merged standardized grid: all atom positions of both runs
    std::vector<double> grid;
    grid.reserve((size_t)(Fdown.atom_count() + Fup.atom_count()));
    for (std::int64_t i = 0; i < Fdown.atom_count(); ++i)
        grid.push_back(Fdown.atom_position(i));
    for (std::int64_t i = 0; i < Fup.atom_count(); ++i)
        grid.push_back(Fup.atom_position(i));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    env.grid = std::move(grid);
    env.lower.resize(env.grid.size());
    env.upper.resize(env.grid.size());
    double wb = 0;
    for (size_t i = 0; i < env.grid.size(); ++i) {
        double x = env.grid[i];
        env.lower[i] = Fup(x);
        env.upper[i] = std::min(1.0, Fdown(x) + down.tail_mass + down.fp_slack);
        wb = std::max(wb, env.upper[i] - env.lower[i]);
    }
    env.width_bound = wb;
    return env;
}

} // namespace stpete
