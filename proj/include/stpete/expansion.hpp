#ifndef STPETE_EXPANSION_HPP
#define STPETE_EXPANSION_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "stpete/moment_poly.hpp"

namespace stpete {

enum class AlphaCase { general, alpha1 };
enum class AlphaRegime { below1, above1 };

/// Truncated formal power series in two variables with MomentPolynomial
/// coefficients. The truncation rule is total order: a cell (k, j) is kept
/// iff k + j <= max_total_order. Arithmetic respects the truncation, so no
/// fictitious high-order terms are ever produced.
class BivariateSeries {
public:
    explicit BivariateSeries(int max_total_order) : order_(max_total_order) {}

    int max_total_order() const { return order_; }
    const std::map<std::pair<int, int>, MomentPolynomial>& cells() const { return cells_; }

    MomentPolynomial coeff(int k, int j) const;
    void add(int k, int j, const MomentPolynomial& c);

    BivariateSeries& operator+=(const BivariateSeries& o);
    BivariateSeries operator*(const BivariateSeries& o) const;
    BivariateSeries& operator*=(const Rational& c);

private:
    int order_;
    std::map<std::pair<int, int>, MomentPolynomial> cells_;
};

/// Table of the expansion coefficients d_{k,j}: polynomials of the virtual
/// moments generated by re-expanding
///   sum_{j>=2} mu_j u^j / j!  +  sum_{k>=2} ((-1)^{k+1}/k) (v + sum_l mu_l u^l / l!)^k
/// in (u, v), with d_{k,j} equal to (-1)^k times the (u^k v^j) coefficient.
/// The alpha=1 variant drops mu_1 (inner sums start at l = 2).
class DTable {
public:
    DTable(int max_total_order, AlphaCase ac);

    int max_total_order() const { return order_; }
    AlphaCase alpha_case() const { return case_; }

    /// d_{k,j}; throws insufficient_order_error beyond the table.
    const MomentPolynomial& at(int k, int j) const;
    bool contains(int k, int j) const { return k >= 0 && j >= 0 && k + j <= order_; }

private:
    int order_;
    AlphaCase case_;
    std::map<std::pair<int, int>, MomentPolynomial> d_;
    static const MomentPolynomial zero_;
};

/// w_{m,k,j}: sum over ordered tuples k_1+...+k_m = k, s_1+...+s_m = j+m of
/// d_{k_1,s_1} ... d_{k_m,s_m}, excluding (k_i,s_i) in {(0,0),(1,0),(0,1)}
/// (those d's are zero, so the exclusion is automatic). Zero whenever
/// j < L_{m,k} = max{-floor(k/2), -m, m-k}.
MomentPolynomial w_coefficient(int m, int k, int j, const DTable& d);

/// One additive term of an approximating function: a multiple of the
/// bounded-variation transform family member G^{(k, y_power)} scaled by
/// n^{-(k_over_alpha/alpha + j_plain)} (log_r n)^{log_power}.
struct ExpansionTerm {
    int k = 0;            // x-derivative order of the transform
    int y_power = 0;      // j + m
    int k_over_alpha = 0; // numerator of the alpha-scaled part of the n-exponent
    int j_plain = 0;      // plain part of the n-exponent
    int log_power = 0;    // power of log_r n (alpha = 1 only)
    MomentPolynomial coefficient;
};

/// The finite term list defining an approximating function G_{n,ell} (or a
/// simplified variant). The leading G itself (the ell = 0 term) is implicit
/// and not stored.
struct ExpansionTermTable {
    AlphaCase alpha_case = AlphaCase::general;
    int ell = 0;
    std::vector<ExpansionTerm> terms;
};

/// Full expansion G_{n,ell} of the given length (general or alpha=1 case).
ExpansionTermTable expansion_terms(AlphaCase ac, int ell);

/// Simplified expansions: keeps only the (0,j) column for alpha < 1 or the
/// (2j,0) diagonal for alpha > 1; with include_tilde_tilde, adds the
/// mu_1 G^{(1,1)} / n^{1/alpha} term.
ExpansionTermTable simplified_terms(int ell, AlphaRegime regime,
                                    bool include_tilde_tilde);

} // namespace stpete

#endif
