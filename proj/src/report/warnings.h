#pragma once
#include <set>
#include <vector>

#include "engine/residue.h"

namespace resdbg::report {

struct Warning {
    OpId opId = kNoneOp;
    OpKind op = OpKind::Add;
    double actual = 0.0;
    double residue = 0.0;
    double ulpCount = 0.0;  // may be +inf (nonzero residue on a zero actual)
};

struct WarningConfig {
    double warnUlps = 45.0;        // warn iff ulpCount >= 2^warnUlps
    bool zeroUlpDenormal = false;  // alternative rule: ulp(0) = smallest denormal
};

struct WarningSet {
    std::vector<Warning> warnings;  // ascending OpId
    std::vector<double> ulps;       // ulpCount per OpId (NaN when poisoned)

    std::set<OpId> ids() const;
    bool warned(OpId id) const;
};

// |residue| / ulp(actual); +inf when actual == 0 and residue != 0 (unless the
// denormal-min alternative is selected); NaN for poisoned residues.
double ulp_count(double actual, double residue, bool zeroUlpDenormal = false);

WarningSet compute_warnings(const Trace& trace, const WarningConfig& cfg = {});

}  // namespace resdbg::report
