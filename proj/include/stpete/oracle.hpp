#ifndef STPETE_ORACLE_HPP
#define STPETE_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "stpete/game.hpp"

namespace stpete {

/// Distribution of a sum of gains on the lattice unit * Z, held densely from
/// min_index. All probabilities are >= 0; everything ever dropped is
/// accounted for:
///   tail_mass   - total omitted probability (single-game truncation,
///                 far-tail pruning, and window capping together),
///   window_mass - the window-capping part of tail_mass,
///   fp_slack    - accumulated floating-point mass defect (fft rounding,
///                 clipped negatives), so sum(probs) + tail_mass = 1 up to
///                 fp_slack.
struct LatticePMF {
    double unit = 0;
    std::int64_t min_index = 0;
    std::vector<double> probs;
    double tail_mass = 0;
    double window_mass = 0;
    double fp_slack = 0;

    double mass() const;                       // compensated sum of probs
    std::int64_t max_index() const { return min_index + (std::int64_t)probs.size() - 1; }
};

/// Optional cap on the retained support, expressed in standardized units:
/// positions above c_n + x_hi * n^{1/alpha} are dropped into window_mass.
/// Gains are positive, so capping intermediates of a convolution chain at the
/// final cap only ever drops mass that would have ended beyond the cap.
struct SupportWindow {
    double x_hi = std::numeric_limits<double>::infinity();
    std::int64_t max_len = (std::int64_t)1 << 23;  // dense-length guard
};

/// P{X = unit^k} = q^{k-1} p for k = 1..K with q^K <= tail_budget (or the
/// window cap, whichever bites first). Lattice case only.
LatticePMF pmf_single(const GameParams& gp, double tail_budget);

/// Exact convolution; far-tail entries whose cumulative mass is <= prune are
/// dropped. cap_index < 0 means no positional cap.
LatticePMF convolve(const LatticePMF& a, const LatticePMF& b, double prune,
                    std::int64_t cap_index = -1);

/// Distribution of S_n by binary exponentiation (log2 n convolutions), with
/// per-step prune budgets summing to tail_budget/2 and the single-game
/// truncation contributing n * q^K <= tail_budget/2.
LatticePMF pmf_sum(const GameParams& gp, std::int64_t n, double tail_budget,
                   const SupportWindow& window = {});

/// Step function F_n(x) = P{(S_n - c_n)/n^{1/alpha} <= x} over the retained
/// support, with jump positions and left limits exposed.
class StandardizedCdf {
public:
    StandardizedCdf(const LatticePMF& pmf, const GameInstance& gi);

    double operator()(double x) const;     // F(x)
    double left_limit(double x) const;     // F(x-)
    std::int64_t atom_count() const { return (std::int64_t)cum_.size(); }
    double atom_position(std::int64_t i) const;   // standardized
    double atom_mass(std::int64_t i) const;
    double cum_at(std::int64_t i) const { return cum_[(size_t)i]; }  // F at atom i
    double total() const { return cum_.empty() ? 0.0 : cum_.back(); }
    const GameInstance& instance() const { return gi_; }

private:
    GameInstance gi_;
    double unit_;
    std::int64_t min_index_;
    std::vector<double> cum_;
};

/// Two-sided CDF bracket for S_n built by directional rounding of the gain's
/// atom positions onto a grid_step lattice: rounding positions down gives an
/// upper CDF bound, rounding up a lower bound. Works for non-lattice games
/// (the spec'd use) and doubles as the coarsening device for lattice games
/// when the exact support is too wide.
struct CdfEnvelope {
    std::vector<double> grid;    // standardized positions, strictly increasing
    std::vector<double> lower;
    std::vector<double> upper;
    double width_bound = 0;      // max(upper - lower) over the grid, computed
    double tail_mass = 0;        // omitted probability (max of the two runs)
};

CdfEnvelope envelope_cdf(const GameParams& gp, std::int64_t n, double grid_step,
                         double tail_budget, const SupportWindow& window = {});

} // namespace stpete

#endif
