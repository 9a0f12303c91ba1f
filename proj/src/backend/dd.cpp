#include <cmath>

#include "backend/dd.h"
#include "eft/eft.h"

namespace resdbg::backend {

namespace {

// Renormalize assuming |a| >= |b| (or a == 0).
DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

}  // namespace

DD dd_from(double v) { return {v, 0.0}; }

DD dd_add(DD a, DD b) {
    auto [s1, e1] = eft::two_sum(a.hi, b.hi);
    auto [s2, e2] = eft::two_sum(a.lo, b.lo);
    e1 += s2;
    DD t = quick_two_sum(s1, e1);
    t.lo += e2;
    return quick_two_sum(t.hi, t.lo);
}

DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

DD dd_mul(DD a, DD b) {
    auto p = eft::two_prod(a.hi, b.hi);
    double e = p.err + (a.hi * b.lo + a.lo * b.hi);
    return quick_two_sum(p.prod, e);
}

DD dd_div(DD a, DD b) {
    // Two Newton-style corrections on the leading quotient.
    double q1 = a.hi / b.hi;
    DD r = dd_sub(a, dd_mul(dd_from(q1), b));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(dd_from(q2), b));
    double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return dd_add(q, dd_from(q3));
}

DD dd_sqrt(DD a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {0.0, 0.0};
    if (a.hi < 0.0) return {std::nan(""), 0.0};
    // Karp: one correction step against the machine root.
    double s = std::sqrt(a.hi);
    DD r = dd_sub(a, dd_mul(dd_from(s), dd_from(s)));
    double e = r.hi / (2.0 * s);
    return quick_two_sum(s, e);
}

DD dd_abs(DD a) { return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? dd_neg(a) : a; }

bool dd_finite(DD a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

}  // namespace resdbg::backend
