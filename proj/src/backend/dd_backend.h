#pragma once
#include <vector>

#include "backend/dd.h"
#include "engine/engine.h"

namespace resdbg::backend {

// Double-double shadow hook: residue = fl((hi - actual) + lo).  Contributor
// fields stay NONE and flags clear.  Casts are identity on the shadow and
// there is deliberately no rounding-trick handling; this backend exists to
// show what a fixed-width shadow misses.
class DdHook : public Hook {
public:
    Residue on_op(const OpEvent& ev) override;

    DD shadow(OpId id) const { return shadows_[static_cast<size_t>(id)]; }

private:
    DD operand(ValueRef ref, double actual) const;

    std::vector<DD> shadows_;  // indexed by OpId
};

}  // namespace resdbg::backend
