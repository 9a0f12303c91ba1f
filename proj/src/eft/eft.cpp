#include "eft/eft.h"

#include <cfloat>
#include <limits>

namespace resdbg::eft {

SumErr two_sum(double a, double b) {
    double s = a + b;
    double ap = s - b;
    double bp = s - ap;
    double da = a - ap;
    double db = b - bp;
    return {s, da + db};
}

ProdErr two_prod_fma(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    bool under = p != 0.0 && std::fabs(p) < DBL_MIN;
    return {p, err, under};
}

namespace {

// Dekker split; valid while |x| < 2^996 (no overflow in the scaled product).
constexpr double kSplitter = 134217729.0;  // 2^27 + 1

void split(double x, double& hi, double& lo) {
    double t = kSplitter * x;
    hi = t - (t - x);
    lo = x - hi;
}

}  // namespace

ProdErr two_prod_dekker(double a, double b) {
    double p = a * b;
    double ah, al, bh, bl;
    split(a, ah, al);
    split(b, bh, bl);
    double err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    bool under = p != 0.0 && std::fabs(p) < DBL_MIN;
    return {p, err, under};
}

bool fma_exact() {
    static const bool ok = [] {
        // Witnesses where a separately rounded multiply-add differs from a
        // single rounding.  (1+2^-27)^2 - (1+2^-26) = 2^-54 exactly.
        double a = 1.0 + 0x1p-27;
        double r1 = std::fma(a, a, -(1.0 + 0x1p-26));
        if (r1 != 0x1p-54) return false;
        double r2 = std::fma(0x1p27 + 1.0, 0x1p27 + 1.0, -0x1p54);
        if (r2 != 0x1p28 + 1.0) return false;
        return true;
    }();
    return ok;
}

ProdErr two_prod(double a, double b) {
    if (fma_exact()) return two_prod_fma(a, b);
    return two_prod_dekker(a, b);
}

double div_rem(double x, double y, double q) {
    return std::fma(q, y, -x);
}

double sqrt_rem(double x, double s) {
    return std::fma(-s, s, x);
}

double div_err(double x, double y, double q) {
    return std::fma(-q, y, x) / y;
}

double sqrt_err(double x, double s) {
    if (s == 0.0) return 0.0;
    return std::fma(-s, s, x) / (2.0 * s);
}

double cast64to32_mu(double x) {
    float narrow = static_cast<float>(x);
    if (!std::isfinite(narrow)) return std::numeric_limits<double>::quiet_NaN();
    return x - static_cast<double>(narrow);
}

double ulp_at(double a) {
    double m = std::fabs(a);
    return std::nextafter(m, std::numeric_limits<double>::infinity()) - m;
}

bool is_trick_const(double c) {
    return c == kTrickConst64 || c == kTrickConst32;
}

}  // namespace resdbg::eft
