#pragma once
#include <cmath>
#include <cstdint>

// Error-free transformations and the per-operation rounding-error estimates
// the residue engine consumes.  Everything here is branch-deterministic and
// pure; the only global is the cached FMA self-test result.

namespace resdbg::eft {

struct SumErr {
    double sum;
    double err;
};

struct ProdErr {
    double prod;
    double err;
    bool underflow;  // 0 < |prod| < DBL_MIN: err is not trustworthy
};

// Knuth two-sum, branch-free.  sum = fl(a+b) and a+b = sum+err exactly
// whenever no intermediate overflows.
SumErr two_sum(double a, double b);

// a*b = prod+err exactly for normal-range products.  Uses hardware FMA when
// the startup self-test confirms single rounding, Dekker splitting otherwise.
ProdErr two_prod(double a, double b);

// Forced-path variants so both implementations stay tested on every platform.
ProdErr two_prod_fma(double a, double b);
ProdErr two_prod_dekker(double a, double b);

// True iff std::fma on this platform rounds once (cached after first call).
bool fma_exact();

// x-space remainders used by the residue recurrences.
// div: returns q*y - x exactly (one FMA); note the sign, the corrected
// division residue subtracts this term.
double div_rem(double x, double y, double q);
// sqrt: returns x - s*s exactly (one FMA).
double sqrt_rem(double x, double s);

// Value-space error estimates (classic EFT forms), kept for tests and tools:
// div_err ~ x/y - q, sqrt_err ~ sqrt(x) - s.
double div_err(double x, double y, double q);
double sqrt_err(double x, double s);

// Rounding error of a 64->32 bit cast: x - widen(narrow(x)), exact by
// Sterbenz.  NaN when the narrowed value is not finite.
double cast64to32_mu(double x);

// Gap to the next representable binary64 above |a|.
double ulp_at(double a);

// Round-to-integer trick constants: adding then subtracting one of these
// rounds a small value to an integer (the float constant is its widened form).
inline constexpr double kTrickConst64 = 6755399441055744.0;  // 1.5 * 2^52
inline constexpr double kTrickConst32 = 12582912.0;          // 1.5 * 2^23

bool is_trick_const(double c);

}  // namespace resdbg::eft
