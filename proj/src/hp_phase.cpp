#include "hp_phase.hpp"

#include <cmath>

namespace stpete::detail {

namespace {
constexpr mpfr_prec_t kPrec = 320;
}

HpPowers::HpPowers(double r, double alpha, double gamma, int k_min, int k_max)
    : k_min_(k_min), k_max_(k_max), owns_(true)
{
    mpfr_init2(s_, kPrec);
    mpfr_init2(ginv_, kPrec);
    mpfr_init2(two_pi_, kPrec);

    mpfr_t t;
    mpfr_init2(t, kPrec);
    mpfr_set_d(s_, r, MPFR_RNDN);
    mpfr_set_d(t, 1.0 / alpha, MPFR_RNDN);
    mpfr_pow(s_, s_, t, MPFR_RNDN);  // r^{1/alpha}

    mpfr_set_d(ginv_, gamma, MPFR_RNDN);
    mpfr_set_d(t, -1.0 / alpha, MPFR_RNDN);
    mpfr_pow(ginv_, ginv_, t, MPFR_RNDN);  // gamma^{-1/alpha}

    mpfr_const_pi(two_pi_, MPFR_RNDN);
    mpfr_mul_ui(two_pi_, two_pi_, 2, MPFR_RNDN);
    mpfr_clear(t);

    if (k_max_ >= k_min_) {
        c_.resize((size_t)(k_max_ - k_min_ + 1));
        for (int k = k_min_; k <= k_max_; ++k) {
            mpfr_init2(&c_[(size_t)(k - k_min_)], kPrec);
            compute_ck(&c_[(size_t)(k - k_min_)], k);
        }
    }
}

HpPowers::HpPowers(double r, double alpha, long n_divisor, int k_min, int k_max)
    : k_min_(k_min), k_max_(k_max), owns_(true)
{
    mpfr_init2(s_, kPrec);
    mpfr_init2(ginv_, kPrec);
    mpfr_init2(two_pi_, kPrec);

    mpfr_t t;
    mpfr_init2(t, kPrec);
    mpfr_set_d(s_, r, MPFR_RNDN);
    mpfr_set_d(t, 1.0 / alpha, MPFR_RNDN);
    mpfr_pow(s_, s_, t, MPFR_RNDN);

    mpfr_set_si(ginv_, n_divisor, MPFR_RNDN);
    mpfr_set_d(t, -1.0 / alpha, MPFR_RNDN);
    mpfr_pow(ginv_, ginv_, t, MPFR_RNDN);  // n^{-1/alpha}

    mpfr_const_pi(two_pi_, MPFR_RNDN);
    mpfr_mul_ui(two_pi_, two_pi_, 2, MPFR_RNDN);
    mpfr_clear(t);

    if (k_max_ >= k_min_) {
        c_.resize((size_t)(k_max_ - k_min_ + 1));
        for (int k = k_min_; k <= k_max_; ++k) {
            mpfr_init2(&c_[(size_t)(k - k_min_)], kPrec);
            compute_ck(&c_[(size_t)(k - k_min_)], k);
        }
    }
}

HpPowers::HpPowers(HpPowers&& o) noexcept
    : k_min_(o.k_min_), k_max_(o.k_max_), c_(std::move(o.c_)), owns_(o.owns_)
{
    s_[0] = o.s_[0];
    ginv_[0] = o.ginv_[0];
    two_pi_[0] = o.two_pi_[0];
    o.owns_ = false;
    o.c_.clear();
}

HpPowers& HpPowers::operator=(HpPowers&& o) noexcept
{
    if (this != &o) {
        this->~HpPowers();
        new (this) HpPowers(std::move(o));
    }
    return *this;
}

HpPowers::~HpPowers()
{
    if (owns_) {
        mpfr_clear(s_);
        mpfr_clear(ginv_);
        mpfr_clear(two_pi_);
    }
    for (auto& m : c_) mpfr_clear(&m);
    c_.clear();
}

void HpPowers::compute_ck(mpfr_ptr out, int k) const
{
    mpfr_pow_si(out, s_, (long)k, MPFR_RNDN);
    mpfr_mul(out, out, ginv_, MPFR_RNDN);
}

long double HpPowers::c_ld(int k) const
{
    if (k >= k_min_ && k <= k_max_)
        return mpfr_get_ld(&c_[(size_t)(k - k_min_)], MPFR_RNDN);
    mpfr_t t;
    mpfr_init2(t, kPrec);
    compute_ck(t, k);
    long double v = mpfr_get_ld(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

namespace {
// shared scratch; phase() is called in tight loops
struct Scratch {
    mpfr_t w;
    Scratch() { mpfr_init2(w, kPrec); }
    ~Scratch() { mpfr_clear(w); }
};
} // namespace

double HpPowers::phase(double t, int k) const
{
    thread_local Scratch sc;
    if (k >= k_min_ && k <= k_max_) {
        mpfr_mul_d(sc.w, &c_[(size_t)(k - k_min_)], t, MPFR_RNDN);
    } else {
        compute_ck(sc.w, k);
        mpfr_mul_d(sc.w, sc.w, t, MPFR_RNDN);
    }
    mpfr_fmod(sc.w, sc.w, two_pi_, MPFR_RNDN);
    return mpfr_get_d(sc.w, MPFR_RNDN);
}

} // namespace stpete::detail
