#include "stpete/expansion.hpp"

#include <tuple>

namespace stpete {

namespace {

Rational factorial_inv(int m)
{
    mpz_class f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return Rational(mpz_class(1), f);
}

Rational binomial(int n, int k)
{
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return Rational(b);
}

} // namespace

MomentPolynomial BivariateSeries::coeff(int k, int j) const
{
    auto it = cells_.find({k, j});
    return it == cells_.end() ? MomentPolynomial() : it->second;
}

void BivariateSeries::add(int k, int j, const MomentPolynomial& c)
{
    if (k < 0 || j < 0 || k + j > order_ || c.is_zero()) return;
    auto& cell = cells_[{k, j}];
    cell += c;
    if (cell.is_zero()) cells_.erase({k, j});
}

BivariateSeries& BivariateSeries::operator+=(const BivariateSeries& o)
{
    for (const auto& [kj, c] : o.cells()) add(kj.first, kj.second, c);
    return *this;
}

BivariateSeries BivariateSeries::operator*(const BivariateSeries& o) const
{
    BivariateSeries out(order_);
    for (const auto& [a, ca] : cells_) {
        for (const auto& [b, cb] : o.cells()) {
            int k = a.first + b.first, j = a.second + b.second;
            if (k + j > order_) continue;
            out.add(k, j, ca * cb);
        }
    }
    return out;
}

BivariateSeries& BivariateSeries::operator*=(const Rational& c)
{
    if (c == 0) { *this = BivariateSeries(order_); return *this; }
    for (auto& [kj, cell] : cells_) cell *= c;
    return *this;
}

const MomentPolynomial DTable::zero_{};

DTable::DTable(int max_total_order, AlphaCase ac)
    : order_(max_total_order), case_(ac)
{
    if (order_ < 2) throw param_error("d table order must be >= 2");
    const int L = order_;  // inner degrees above the truncation cannot land in a kept cell

    // A(u) = sum_l mu_l u^l / l!, l from 1 (general) or 2 (alpha=1: mu_1 -> 0)
    BivariateSeries A(order_);
    int l0 = (ac == AlphaCase::alpha1) ? 2 : 1;
    for (int l = l0; l <= L; ++l)
        A.add(l, 0, MomentPolynomial::mu((unsigned)l) * factorial_inv(l));

    // B = v + A(u)
    BivariateSeries B = A;
    B.add(0, 1, MomentPolynomial(Rational(1)));

    // S = sum_{j>=2} mu_j u^j / j! + sum_{k>=2} ((-1)^{k+1}/k) B^k
    BivariateSeries S(order_);
    for (int j = 2; j <= L; ++j)
        S.add(j, 0, MomentPolynomial::mu((unsigned)j) * factorial_inv(j));
    BivariateSeries Bpow = B;
    for (int k = 2; k <= order_; ++k) {
        Bpow = Bpow * B;
        BivariateSeries term = Bpow;
        Rational c(k % 2 == 0 ? -1 : 1, k);
        term *= c;
        S += term;
    }

    // d_{k,j} = (-1)^k [u^k v^j] S
    for (const auto& [kj, c] : S.cells()) {
        MomentPolynomial d = c;
        if (kj.first % 2 == 1) d *= Rational(-1);
        if (!d.is_zero()) d_[{kj.first, kj.second}] = d;
    }
}

const MomentPolynomial& DTable::at(int k, int j) const
{
    if (!contains(k, j))
        throw insufficient_order_error("d table of order " + std::to_string(order_) +
                                       " has no entry (" + std::to_string(k) + "," +
                                       std::to_string(j) + ")");
    auto it = d_.find({k, j});
    return it == d_.end() ? zero_ : it->second;
}

namespace {

// Ordered enumeration of (k_1,s_1)...(k_m,s_m); slots with k_i + s_i <= 1 carry
// a zero d and are skipped. Slots are pruned so every d lookup belongs to a
// decomposition whose remaining slots can still absorb their minimum order.
MomentPolynomial w_rec(int slots_left, int k_rem, int s_rem, const DTable& d)
{
    if (slots_left == 0) {
        return (k_rem == 0 && s_rem == 0) ? MomentPolynomial(Rational(1))
                                          : MomentPolynomial();
    }
    MomentPolynomial acc;
    int reserve = 2 * (slots_left - 1);  // remaining slots each need total >= 2
    for (int ki = 0; ki <= k_rem; ++ki) {
        for (int si = 0; si <= s_rem; ++si) {
            if (ki + si <= 1) continue;
            if (ki + si > k_rem + s_rem - reserve) continue;
            const MomentPolynomial& dip = d.at(ki, si);
            if (dip.is_zero()) continue;
            MomentPolynomial rest = w_rec(slots_left - 1, k_rem - ki, s_rem - si, d);
            if (rest.is_zero()) continue;
            acc += dip * rest;
        }
    }
    return acc;
}

} // namespace

MomentPolynomial w_coefficient(int m, int k, int j, const DTable& d)
{
    if (m < 1 || k < 0) throw param_error("w_{m,k,j} requires m >= 1, k >= 0");
    int L = std::max({-(k / 2), -m, m - k});
    if (j < L) return MomentPolynomial();
    if (j + m < 0) return MomentPolynomial();
    return w_rec(m, k, j + m, d);
}

namespace {

using TermKey = std::tuple<int, int, int, int, int>;  // k, y_power, k/alpha, j, log

void merge_term(std::map<TermKey, MomentPolynomial>& acc, const ExpansionTerm& t)
{
    TermKey key{t.k, t.y_power, t.k_over_alpha, t.j_plain, t.log_power};
    acc[key] += t.coefficient;
}

ExpansionTermTable collect(AlphaCase ac, int ell,
                           const std::map<TermKey, MomentPolynomial>& acc)
{
    ExpansionTermTable table;
    table.alpha_case = ac;
    table.ell = ell;
    for (const auto& [key, poly] : acc) {
        if (poly.is_zero()) continue;
        ExpansionTerm t;
        std::tie(t.k, t.y_power, t.k_over_alpha, t.j_plain, t.log_power) = key;
        t.coefficient = poly;
        table.terms.push_back(t);
    }
    return table;
}

} // namespace

ExpansionTermTable expansion_terms(AlphaCase ac, int ell)
{
    if (ell < 0) throw param_error("ell must be >= 0");
    std::map<TermKey, MomentPolynomial> acc;
    if (ell == 0) return collect(ac, ell, acc);

    DTable d(ell + 2, ac);
    for (int k = 0; k <= 2 * ell; ++k) {
        for (int j = -(k / 2); j <= ell - k; ++j) {
            for (int m = std::max(1, -j); m <= k + j; ++m) {
                MomentPolynomial w = w_coefficient(m, k, j, d);
                if (w.is_zero()) continue;
                w *= factorial_inv(m);
                if (ac == AlphaCase::general) {
                    merge_term(acc, ExpansionTerm{k, j + m, k, j, 0, w});
                } else {
                    // binomial split of [y + i t p r log_r n]^{j+m}
                    int s = j + m;
                    for (int lp = 0; lp <= s; ++lp) {
                        MomentPolynomial c = w * binomial(s, lp);
                        if (lp > 0) {
                            MomentPolynomial lam_pow = MomentPolynomial::lam((unsigned)lp);
                            if (lp % 2 == 1) lam_pow *= Rational(-1);
                            c *= lam_pow;
                        }
                        merge_term(acc, ExpansionTerm{k + lp, s - lp, 0, k + j, lp, c});
                    }
                }
            }
        }
    }
    return collect(ac, ell, acc);
}

ExpansionTermTable simplified_terms(int ell, AlphaRegime regime,
                                    bool include_tilde_tilde)
{
    if (ell < 1) throw param_error("simplified_terms requires ell >= 1");
    std::map<TermKey, MomentPolynomial> acc;
    DTable d(ell + 2, AlphaCase::general);
    if (regime == AlphaRegime::below1) {
        for (int j = 1; j <= ell - 1; ++j) {
            for (int m = 1; m <= j; ++m) {
                MomentPolynomial w = w_coefficient(m, 0, j, d);
                if (w.is_zero()) continue;
                w *= factorial_inv(m);
                merge_term(acc, ExpansionTerm{0, j + m, 0, j, 0, w});
            }
        }
    } else {
        for (int j = 1; j <= ell - 1; ++j) {
            // the (k, j') = (2j, -j) cell has the single composition d_{2,0}^j
            MomentPolynomial w = w_coefficient(j, 2 * j, -j, d);
            if (w.is_zero()) continue;
            w *= factorial_inv(j);
            merge_term(acc, ExpansionTerm{2 * j, 0, 2 * j, -j, 0, w});
        }
    }
    if (include_tilde_tilde)
        merge_term(acc, ExpansionTerm{1, 1, 1, 0, 0, MomentPolynomial::mu(1)});
    ExpansionTermTable t = collect(AlphaCase::general, ell - 1, acc);
    return t;
}

} // namespace stpete
