#include <cmath>
#include <limits>

#include "backend/oracle_backend.h"

namespace resdbg::backend {

namespace {

Residue poisoned() {
    Residue r;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
}

}  // namespace

OracleHook::OracleHook(mpfr_prec_t precBits) : prec_(precBits) {}

BigFloat OracleHook::operand(ValueRef ref, double actual) const {
    // Inputs and literals are exact binary64 values; ops have shadows.
    if (ref.kind == ValueRef::Op) return shadows_[static_cast<size_t>(ref.id)];
    return BigFloat(actual, prec_);
}

Residue OracleHook::on_op(const OpEvent& ev) {
    BigFloat x = operand(ev.xref, ev.x);
    BigFloat y = ev.binary ? operand(ev.yref, ev.y) : BigFloat(0.0, prec_);

    BigFloat z(prec_);
    if (auto fire = trick_.feed(ev)) {
        // Intended rounding: carry only the error the seed already had.
        BigFloat seedErr = BigFloat::sub(operand(fire->seedRef, fire->seedActual),
                                         BigFloat(fire->seedActual, prec_), prec_);
        z = BigFloat::add(BigFloat(ev.actual, prec_), seedErr, prec_);
        // The producer's shadow is rebased the same way in case it has other
        // consumers.
        shadows_[static_cast<size_t>(fire->producer)] = BigFloat::add(
            BigFloat(actuals_[static_cast<size_t>(fire->producer)], prec_), seedErr, prec_);
    } else {
        switch (ev.kind) {
            case OpKind::Add: z = BigFloat::add(x, y, prec_); break;
            case OpKind::Sub: z = BigFloat::sub(x, y, prec_); break;
            case OpKind::Mul: z = BigFloat::mul(x, y, prec_); break;
            case OpKind::Div: z = BigFloat::div(x, y, prec_); break;
            case OpKind::Sqrt: z = BigFloat::sqrt(x, prec_); break;
            case OpKind::Fabs: z = BigFloat::abs(x, prec_); break;
            case OpKind::Neg: z = BigFloat::neg(x, prec_); break;
            case OpKind::Cast64to32:
            case OpKind::Cast32to64: z = x; break;
        }
    }
    shadows_.push_back(z);
    actuals_.push_back(ev.actual);

    if (!std::isfinite(ev.actual) || !z.is_finite()) return poisoned();
    Residue r;
    r.value = BigFloat::sub_to_double(z, BigFloat(ev.actual, prec_));
    return r;
}

}  // namespace resdbg::backend
