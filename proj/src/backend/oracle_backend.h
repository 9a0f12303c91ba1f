#pragma once
#include <vector>

#include "backend/bigfloat.h"
#include "engine/engine.h"

namespace resdbg::backend {

// Ground-truth hook: maintains a p-bit shadow per op and reports the residue
// shadow - actual, correctly rounded to binary64.  Contributor fields stay
// NONE and flags clear (the oracle measures, it does not diagnose).
//
// Casts are identity on the shadow: the ideal computation never leaves
// extended precision, so a deliberate narrowing shows up as residue at the
// cast (and downstream), matching what the cast's round-back error measures.
//
// The rounding-trick pattern is honored: when a literal-constant add/sub pair
// fires, the shadow is rebased so the intended integer rounding carries only
// the seed's accumulated error forward.  Without this the oracle would count
// intentional rounding as error and misjudge every op downstream of it.
class OracleHook : public Hook {
public:
    explicit OracleHook(mpfr_prec_t precBits);

    Residue on_op(const OpEvent& ev) override;

    const BigFloat& shadow(OpId id) const { return shadows_[static_cast<size_t>(id)]; }

private:
    BigFloat operand(ValueRef ref, double actual) const;

    mpfr_prec_t prec_;
    std::vector<BigFloat> shadows_;  // indexed by OpId
    std::vector<double> actuals_;    // machine results, for trick rebasing
    TrickDetector trick_;
};

}  // namespace resdbg::backend
