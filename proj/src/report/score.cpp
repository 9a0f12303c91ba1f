#include <cmath>

#include "report/score.h"

namespace resdbg::report {

ScoreCard score(const WarningSet& test, const WarningSet& truth,
                std::optional<double> margin, double warnUlps) {
    if (test.ulps.size() != truth.ulps.size())
        throw ScoreError("warning sets come from different traces (" +
                         std::to_string(test.ulps.size()) + " vs " +
                         std::to_string(truth.ulps.size()) + " ops)");

    double lo = 0.0, hi = 0.0;
    if (margin) {
        lo = std::exp2(warnUlps - *margin);
        hi = std::exp2(warnUlps + *margin);
    }

    std::set<OpId> testIds = test.ids();
    std::set<OpId> truthIds = truth.ids();

    ScoreCard card;
    for (OpId id = 0; id < static_cast<OpId>(test.ulps.size()); ++id) {
        bool inTest = testIds.count(id) > 0;
        bool inTruth = truthIds.count(id) > 0;
        if (inTest == inTruth) continue;
        double tu = truth.ulps[static_cast<size_t>(id)];
        bool excluded = margin && !std::isnan(tu) && tu >= lo && tu <= hi;
        card.perOp.push_back({id, inTest, inTruth, test.ulps[static_cast<size_t>(id)], tu,
                              excluded});
        if (excluded) continue;
        if (inTest)
            ++card.falsePositives;
        else
            ++card.falseNegatives;
    }
    return card;
}

}  // namespace resdbg::report
