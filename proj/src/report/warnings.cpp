#include <cfloat>
#include <cmath>
#include <limits>

#include "eft/eft.h"
#include "report/warnings.h"

namespace resdbg::report {

std::set<OpId> WarningSet::ids() const {
    std::set<OpId> out;
    for (const Warning& w : warnings) out.insert(w.opId);
    return out;
}

bool WarningSet::warned(OpId id) const {
    for (const Warning& w : warnings)
        if (w.opId == id) return true;
    return false;
}

double ulp_count(double actual, double residue, bool zeroUlpDenormal) {
    if (std::isnan(residue)) return std::numeric_limits<double>::quiet_NaN();
    if (residue == 0.0) return 0.0;
    if (actual == 0.0 && !zeroUlpDenormal) return std::numeric_limits<double>::infinity();
    double ulp = actual == 0.0 ? DBL_TRUE_MIN : eft::ulp_at(actual);
    return std::fabs(residue) / ulp;
}

WarningSet compute_warnings(const Trace& trace, const WarningConfig& cfg) {
    WarningSet out;
    out.ulps.reserve(trace.size());
    double threshold = std::exp2(cfg.warnUlps);
    for (const TraceRecord& rec : trace) {
        double u = ulp_count(rec.actual, rec.residue.value, cfg.zeroUlpDenormal);
        out.ulps.push_back(u);
        if (std::isnan(u)) continue;  // poisoned residues never warn
        if (u >= threshold)
            out.warnings.push_back({rec.id, rec.kind, rec.actual, rec.residue.value, u});
    }
    return out;
}

}  // namespace resdbg::report
