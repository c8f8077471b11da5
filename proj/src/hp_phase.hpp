#ifndef STPETE_HP_PHASE_HPP
#define STPETE_HP_PHASE_HPP

#include <vector>

#include <mpfr.h>

namespace stpete::detail {

// The series terms involve phases t * r^{k/alpha} / gamma^{1/alpha} whose
// magnitude reaches 1e20 and beyond; double (even long double) exponentials
// lose such phases completely (relative eps times the magnitude exceeds 2pi).
// This helper carries the scale factors c_k = r^{k/alpha} / gamma^{1/alpha}
// at 320-bit precision and reduces t * c_k mod 2pi exactly enough for a
// certified evaluation.
class HpPowers {
public:
    HpPowers(double r, double alpha, double gamma, int k_min, int k_max);
    /// divisor n^{1/alpha} from the exact integer n (normalized-sum phases)
    HpPowers(double r, double alpha, long n_divisor, int k_min, int k_max);
    HpPowers(const HpPowers&) = delete;
    HpPowers& operator=(const HpPowers&) = delete;
    HpPowers(HpPowers&& o) noexcept;
    HpPowers& operator=(HpPowers&& o) noexcept;
    ~HpPowers();

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }

    /// c_k as long double (accurate to ~1e-19 relative).
    long double c_ld(int k) const;

    /// phase of t * c_k reduced into [-2pi, 2pi]; k within the cached range
    /// uses the precomputed power, anything else is computed afresh.
    double phase(double t, int k) const;

private:
    void compute_ck(mpfr_ptr out, int k) const;

    int k_min_ = 0, k_max_ = -1;
    mpfr_t s_;       // r^{1/alpha}
    mpfr_t ginv_;    // gamma^{-1/alpha}
    mpfr_t two_pi_;
    std::vector<__mpfr_struct> c_;
    bool owns_ = false;
};

} // namespace stpete::detail

#endif
