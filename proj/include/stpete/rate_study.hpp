#ifndef STPETE_RATE_STUDY_HPP
#define STPETE_RATE_STUDY_HPP

#include "stpete/measure.hpp"

namespace stpete {

/// The paper's convergence-rate case table, as a normalizer: the study
/// multiplies each measured value by n^{rate_exponent} / (log_r n)^{log_power}
/// and inspects the resulting column for boundedness.
struct RateNormalizer {
    double rate_exponent = 0;
    int log_power = 0;
};

RateNormalizer rate_normalizer(const GameParams& gp, int ell, ErrorKind kind);

struct RateRow {
    ErrorMeasurement m;
    double normalized = 0;
    bool flagged = false;  // certificate exceeds 10% of the measured value
};

struct RateReport {
    GameParams gp;
    int ell = 0;
    ErrorKind kind = ErrorKind::uniform;
    ApproxMode mode = ApproxMode::full;
    RateNormalizer normalizer;
    std::vector<RateRow> rows;
    double max_norm = 0;
    double median_norm = 0;
    double max_over_median = 0;
    double spearman = 0;    // rank correlation of normalized value vs log n
    double window_x_hi = 0;
    std::string note;       // window / envelope-floor annotations
};

RateReport rate_study(const GameParams& gp, const std::vector<std::int64_t>& ns,
                      int ell, ErrorKind kind, const MeasureOptions& opts = {});

/// Geometric grid {n_min * 2^k} up to n_max plus three off-power points per
/// octave (to exercise gamma_n != 1).
std::vector<std::int64_t> default_n_grid(std::int64_t n_min, std::int64_t n_max,
                                         bool off_power = true);

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace stpete

#endif
