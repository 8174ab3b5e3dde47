#pragma once

// Minimal RAII wrapper over mpfr_t, private to the library. Only the handful
// of operations the numerical kernels need; precision is fixed per value at
// construction and binary operations round into the destination's precision.

#include <mpfr.h>

#include <cstdint>
#include <utility>

namespace cyclebound::detail {

class MpFloat {
  public:
    explicit MpFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    MpFloat(const MpFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    MpFloat(MpFloat&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    MpFloat& operator=(const MpFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    MpFloat& operator=(MpFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    void set(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
    void set(long double x) { mpfr_set_ld(v_, x, MPFR_RNDN); }
    void set_ui(unsigned long x) { mpfr_set_ui(v_, x, MPFR_RNDN); }
    void set(const MpFloat& x) { mpfr_set(v_, x.v_, MPFR_RNDN); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    // floor(log2 |x|) + 1 for nonzero x
    mpfr_exp_t exp2() const { return mpfr_get_exp(v_); }

  private:
    mpfr_t v_;
};

inline void add(MpFloat& out, const MpFloat& a, const MpFloat& b) { mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDN); }
inline void sub(MpFloat& out, const MpFloat& a, const MpFloat& b) { mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDN); }
inline void mul(MpFloat& out, const MpFloat& a, const MpFloat& b) { mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDN); }
inline void div(MpFloat& out, const MpFloat& a, const MpFloat& b) { mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDN); }
inline void mul_si(MpFloat& out, const MpFloat& a, long b) { mpfr_mul_si(out.get(), a.get(), b, MPFR_RNDN); }
inline void div_ui(MpFloat& out, const MpFloat& a, unsigned long b) { mpfr_div_ui(out.get(), a.get(), b, MPFR_RNDN); }
inline void log(MpFloat& out, const MpFloat& a) { mpfr_log(out.get(), a.get(), MPFR_RNDN); }
inline void exp(MpFloat& out, const MpFloat& a) { mpfr_exp(out.get(), a.get(), MPFR_RNDN); }
inline void neg(MpFloat& out, const MpFloat& a) { mpfr_neg(out.get(), a.get(), MPFR_RNDN); }

} // namespace cyclebound::detail
