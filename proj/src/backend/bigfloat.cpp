#include "backend/bigfloat.h"

namespace resdbg::backend {

BigFloat::BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

BigFloat::BigFloat(double v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

mpfr_prec_t BigFloat::precision() const { return mpfr_get_prec(v_); }

double BigFloat::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

bool BigFloat::is_finite() const { return mpfr_number_p(v_) != 0; }

BigFloat BigFloat::add(const BigFloat& a, const BigFloat& b, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::sub(const BigFloat& a, const BigFloat& b, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::mul(const BigFloat& a, const BigFloat& b, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::div(const BigFloat& a, const BigFloat& b, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::sqrt(const BigFloat& a, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::abs(const BigFloat& a, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::neg(const BigFloat& a, mpfr_prec_t p) {
    BigFloat r(p);
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::cast_binary64(const BigFloat& a, mpfr_prec_t p) {
    return BigFloat(mpfr_get_d(a.v_, MPFR_RNDN), p);
}

BigFloat BigFloat::cast_binary32(const BigFloat& a, mpfr_prec_t p) {
    return BigFloat(static_cast<double>(mpfr_get_flt(a.v_, MPFR_RNDN)), p);
}

double BigFloat::sub_to_double(const BigFloat& a, const BigFloat& b) {
    // Round-to-odd at 64 bits, then once to binary64.  A single 53-bit
    // intermediate would be correct for normal results but can double-round
    // when the exact difference falls in the subnormal range.
    mpfr_t d;
    mpfr_init2(d, 64);
    int t = mpfr_sub(d, a.v_, b.v_, MPFR_RNDZ);
    if (t != 0 && mpfr_number_p(d) && !mpfr_zero_p(d) && mpfr_min_prec(d) < 64) {
        // Truncated and even: step one 64-bit ulp toward the exact value
        // (away from zero) to reach the odd neighbor.
        if (mpfr_sgn(d) > 0)
            mpfr_nextabove(d);
        else
            mpfr_nextbelow(d);
    }
    double out = mpfr_get_d(d, MPFR_RNDN);
    mpfr_clear(d);
    return out;
}

}  // namespace resdbg::backend
