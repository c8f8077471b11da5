#ifndef STPETE_MOMENT_POLY_HPP
#define STPETE_MOMENT_POLY_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "stpete/errors.hpp"
#include "stpete/game.hpp"

namespace stpete {

/// Exact rational scalar. Always reduced, denominator > 0 (mpq invariants).
using Rational = mpq_class;

/// Monomial exponent vector over the symbol set
///   slot 0      -> lam  (:= p*r; appears only in alpha=1 tables)
///   slot j >= 1 -> mu_j (virtual moments)
/// Trailing zeros are trimmed so the representation is canonical.
using Monomial = std::vector<unsigned>;

/// Sparse polynomial in the moment symbols with exact rational coefficients.
/// Zero coefficients are never stored.
class MomentPolynomial {
public:
    MomentPolynomial() = default;
    explicit MomentPolynomial(const Rational& c);  // constant
    static MomentPolynomial symbol(unsigned slot, unsigned power = 1);
    static MomentPolynomial mu(unsigned j, unsigned power = 1) { return symbol(j, power); }
    static MomentPolynomial lam(unsigned power = 1) { return symbol(0, power); }

    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    MomentPolynomial& operator+=(const MomentPolynomial& o);
    MomentPolynomial& operator-=(const MomentPolynomial& o);
    MomentPolynomial& operator*=(const MomentPolynomial& o);
    MomentPolynomial& operator*=(const Rational& c);

    friend MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b) { return a += b; }
    friend MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b) { return a -= b; }
    friend MomentPolynomial operator*(MomentPolynomial a, const MomentPolynomial& b) { return a *= b; }
    friend MomentPolynomial operator*(MomentPolynomial a, const Rational& c) { return a *= c; }

    bool operator==(const MomentPolynomial& o) const { return terms_ == o.terms_; }

    /// Substitute mu_1 -> 0 (the alpha=1 rule).
    MomentPolynomial drop_mu1() const;

    /// Largest moment index referenced (0 if none).
    unsigned max_moment_index() const;

    /// Numeric substitution: slot 0 evaluates to p*r, slot j to mu_j(gp).
    /// Throws singular_moment_error when a referenced mu_j has j == alpha.
    long double evaluate(const GameParams& gp) const;
    long double evaluate(const std::function<long double(unsigned)>& symbol_value) const;

    /// Canonical rendering, monomials in sorted order: "-1/2 mu1^2 + 1/2 mu2".
    std::string str() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

/// Evaluate a coefficient polynomial at a concrete game (the spec's
/// evaluate_moment_polynomial operation).
long double evaluate_moment_polynomial(const MomentPolynomial& poly,
                                       const GameParams& gp);

} // namespace stpete

#endif
