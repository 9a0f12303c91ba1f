#include <cmath>
#include <limits>

#include "backend/dd_backend.h"

namespace resdbg::backend {

DD DdHook::operand(ValueRef ref, double actual) const {
    if (ref.kind == ValueRef::Op) return shadows_[static_cast<size_t>(ref.id)];
    return dd_from(actual);
}

Residue DdHook::on_op(const OpEvent& ev) {
    DD x = operand(ev.xref, ev.x);
    DD y = ev.binary ? operand(ev.yref, ev.y) : DD{};

    DD z{};
    switch (ev.kind) {
        case OpKind::Add: z = dd_add(x, y); break;
        case OpKind::Sub: z = dd_sub(x, y); break;
        case OpKind::Mul: z = dd_mul(x, y); break;
        case OpKind::Div: z = dd_div(x, y); break;
        case OpKind::Sqrt: z = dd_sqrt(x); break;
        case OpKind::Fabs: z = dd_abs(x); break;
        case OpKind::Neg: z = dd_neg(x); break;
        case OpKind::Cast64to32:
        case OpKind::Cast32to64: z = x; break;
    }
    shadows_.push_back(z);

    Residue r;
    if (!std::isfinite(ev.actual) || !dd_finite(z)) {
        r.value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.value = (z.hi - ev.actual) + z.lo;
    return r;
}

}  // namespace resdbg::backend
