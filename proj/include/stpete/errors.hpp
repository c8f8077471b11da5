#ifndef STPETE_ERRORS_HPP
#define STPETE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stpete {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter outside its mathematical domain (alpha, p, tolerances, ...).
struct param_error : error {
    explicit param_error(const std::string& msg) : error(msg) {}
};

// Virtual moment requested at beta = alpha, where the formula is singular.
struct singular_moment_error : error {
    explicit singular_moment_error(const std::string& msg) : error(msg) {}
};

// Operation invoked outside the regime it is defined for
// (non-lattice game on a lattice-only path, derivative at alpha <= 1, ...).
struct regime_error : error {
    explicit regime_error(const std::string& msg) : error(msg) {}
};

// A coefficient table does not extend far enough for the request.
struct insufficient_order_error : error {
    explicit insufficient_order_error(const std::string& msg) : error(msg) {}
};

// Tail/pruning budget cannot be met with the requested truncation.
struct budget_error : error {
    explicit budget_error(const std::string& msg) : error(msg) {}
};

// Lattice mismatch between operands (span disagreement and the like).
struct lattice_error : error {
    explicit lattice_error(const std::string& msg) : error(msg) {}
};

// Quadrature configuration cannot certify the requested tolerance.
struct quadrature_error : error {
    explicit quadrature_error(const std::string& msg) : error(msg) {}
};

// A computed certificate came out nonsensical (signals a broken evaluator).
struct numerical_failure : error {
    explicit numerical_failure(const std::string& msg) : error(msg) {}
};

} // namespace stpete

#endif
