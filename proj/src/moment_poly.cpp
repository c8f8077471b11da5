#include "stpete/moment_poly.hpp"

#include <cmath>
#include <sstream>

namespace stpete {

namespace {

void trim(Monomial& m)
{
    while (!m.empty() && m.back() == 0) m.pop_back();
}

} // namespace

MomentPolynomial::MomentPolynomial(const Rational& c)
{
    Rational r = c;
    r.canonicalize();
    if (r != 0) terms_[Monomial{}] = r;
}

MomentPolynomial MomentPolynomial::symbol(unsigned slot, unsigned power)
{
    MomentPolynomial p;
    if (power == 0) return MomentPolynomial(Rational(1));
    Monomial m(slot + 1, 0);
    m[slot] = power;
    p.terms_[m] = Rational(1);
    return p;
}

void MomentPolynomial::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& o)
{
    for (const auto& [m, c] : o.terms_) add_term(m, Rational(-c));
    return *this;
}

MomentPolynomial& MomentPolynomial::operator*=(const MomentPolynomial& o)
{
    MomentPolynomial out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial m(std::max(ma.size(), mb.size()), 0);
            for (size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
            for (size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
            trim(m);
            out.add_term(m, Rational(ca * cb));
        }
    }
    terms_.swap(out.terms_);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator*=(const Rational& c)
{
    Rational r = c;
    r.canonicalize();
    if (r == 0) { terms_.clear(); return *this; }
    for (auto& [m, v] : terms_) v *= r;
    return *this;
}

MomentPolynomial MomentPolynomial::drop_mu1() const
{
    MomentPolynomial out;
    for (const auto& [m, c] : terms_) {
        if (m.size() >= 2 && m[1] > 0) continue;  // contains mu_1
        out.add_term(m, c);
    }
    return out;
}

unsigned MomentPolynomial::max_moment_index() const
{
    unsigned mx = 0;
    for (const auto& [m, c] : terms_)
        for (size_t i = 1; i < m.size(); ++i)
            if (m[i] > 0 && i > mx) mx = (unsigned)i;
    return mx;
}

long double MomentPolynomial::evaluate(
    const std::function<long double(unsigned)>& symbol_value) const
{
    long double acc = 0;
    for (const auto& [m, c] : terms_) {
        // rational -> long double via num/den to keep precision
        long double term = (long double)c.get_num().get_d() /
                           (long double)c.get_den().get_d();
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            long double v = symbol_value((unsigned)i);
            for (unsigned e = 0; e < m[i]; ++e) term *= v;
        }
        acc += term;
    }
    return acc;
}

long double MomentPolynomial::evaluate(const GameParams& gp) const
{
    return evaluate([&](unsigned slot) -> long double {
        if (slot == 0) return (long double)gp.p * (long double)gp.r;
        return (long double)virtual_moment(gp, (double)slot);
    });
}

std::string MomentPolynomial::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
            first = false;
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        std::vector<std::string> factors;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            std::string s = (i == 0) ? "lam" : "mu" + std::to_string(i);
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
            factors.push_back(s);
        }
        bool coeff_shown = factors.empty() || a != 1;
        if (coeff_shown) os << a.get_str();
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i > 0 || coeff_shown) os << " ";
            os << factors[i];
        }
    }
    return os.str();
}

long double evaluate_moment_polynomial(const MomentPolynomial& poly,
                                       const GameParams& gp)
{
    unsigned mx = poly.max_moment_index();
    for (unsigned j = 1; j <= mx; ++j) {
        // guard: symbol mu_alpha is singular
        if (std::abs((double)j - gp.alpha) < 1e-14)
            throw singular_moment_error("polynomial references mu_j at j = alpha");
    }
    return poly.evaluate(gp);
}

} // namespace stpete
