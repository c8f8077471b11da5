#ifndef STPETE_MEASURE_HPP
#define STPETE_MEASURE_HPP

#include <string>
#include <vector>

#include "stpete/curve.hpp"
#include "stpete/oracle.hpp"

namespace stpete {

enum class ErrorKind { uniform, weighted, local, local_weighted };

enum class ApproxMode { full, simplified, simplified_tilde };

/// One measured discrepancy between the exact law of S_n and an approximating
/// function, over the examined standardized window.
struct ErrorMeasurement {
    std::int64_t n = 0;
    double gamma_n = 0;
    int ell = 0;
    ErrorKind kind = ErrorKind::uniform;
    double value = 0;
    double value_error_bound = 0;  // quadrature + localization + oracle slack
    double argmax_x = 0;
    bool inconclusive = false;     // envelope too wide relative to the value
    bool envelope_mode = false;
    double window_x_hi = 0;        // examined window; the sup beyond is annotated,
    double beyond_window_mass = 0; // not measured
};

struct MeasureOptions {
    double tol = 1e-7;             // quadrature tolerance for the approximant
    double tail_budget = 1e-11;    // oracle pruning budget
    double x_hi = 48.0;            // standardized window
    std::int64_t max_exact_len = (std::int64_t)1 << 22;  // beyond: envelope mode
    ApproxMode mode = ApproxMode::full;
};

/// Term table for (alpha-case, mode, ell); mode simplified requires alpha != 1.
ExpansionTermTable approx_table(const GameParams& gp, int ell, ApproxMode mode);

/// Measure several expansion lengths at once; the oracle pmf and the
/// inversion grid are shared across the lengths.
std::vector<ErrorMeasurement> measure_errors(const GameInstance& gi,
                                             const std::vector<int>& ells,
                                             ErrorKind kind,
                                             const MeasureOptions& opts = {});

ErrorMeasurement uniform_error(const GameInstance& gi, int ell,
                               const MeasureOptions& opts = {});
ErrorMeasurement nonuniform_error(const GameInstance& gi, int ell,
                                  const MeasureOptions& opts = {});
ErrorMeasurement local_error(const GameInstance& gi, int ell,
                             const MeasureOptions& opts = {});
ErrorMeasurement local_weighted_error(const GameInstance& gi, int ell,
                                      const MeasureOptions& opts = {});

} // namespace stpete

#endif
