#pragma once

namespace resdbg::backend {

// Unevaluated sum hi + lo with |lo| <= 1/2 ulp(hi); the usual double-double
// construction from two_sum/two_prod building blocks.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

DD dd_from(double v);
DD dd_add(DD a, DD b);
DD dd_sub(DD a, DD b);
DD dd_mul(DD a, DD b);
DD dd_div(DD a, DD b);
DD dd_sqrt(DD a);
DD dd_abs(DD a);
DD dd_neg(DD a);
bool dd_finite(DD a);

}  // namespace resdbg::backend
