#pragma once
#include <mpfr.h>

namespace resdbg::backend {

// p-bit binary float with correct round-to-nearest-even on every operation.
// Thin RAII wrapper over MPFR; precision is a per-value property and the
// static ops take the result precision explicitly.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 53);
    BigFloat(double v, mpfr_prec_t prec);  // exact (binary64 embeds for p >= 53)
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const;
    double to_double() const;  // correctly rounded to binary64
    bool is_finite() const;

    static BigFloat add(const BigFloat& a, const BigFloat& b, mpfr_prec_t p);
    static BigFloat sub(const BigFloat& a, const BigFloat& b, mpfr_prec_t p);
    static BigFloat mul(const BigFloat& a, const BigFloat& b, mpfr_prec_t p);
    static BigFloat div(const BigFloat& a, const BigFloat& b, mpfr_prec_t p);
    static BigFloat sqrt(const BigFloat& a, mpfr_prec_t p);
    static BigFloat abs(const BigFloat& a, mpfr_prec_t p);
    static BigFloat neg(const BigFloat& a, mpfr_prec_t p);

    // Round to the machine format and back (value-level cast semantics).
    static BigFloat cast_binary64(const BigFloat& a, mpfr_prec_t p);
    static BigFloat cast_binary32(const BigFloat& a, mpfr_prec_t p);

    // fl53(a - b): the exact difference rounded once to binary64.
    static double sub_to_double(const BigFloat& a, const BigFloat& b);

    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

}  // namespace resdbg::backend
