#pragma once
#include <optional>
#include <stdexcept>
#include <vector>

#include "report/warnings.h"

namespace resdbg::report {

// Backend warnings vs oracle warnings for one trace.
struct ScoreCard {
    int falsePositives = 0;  // warned by the backend, not by the oracle
    int falseNegatives = 0;  // warned by the oracle, not by the backend

    struct Diff {
        OpId opId = kNoneOp;
        bool inTest = false;
        bool inTruth = false;
        double testUlps = 0.0;
        double truthUlps = 0.0;
        bool excluded = false;  // inside the threshold margin band
    };
    std::vector<Diff> perOp;

    int total() const { return falsePositives + falseNegatives; }
};

struct ScoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// With margin m, ops whose ORACLE ulpCount lies in [2^(warnUlps-m),
// 2^(warnUlps+m)] are excluded from both counts (threshold-effect guard).
ScoreCard score(const WarningSet& test, const WarningSet& truth,
                std::optional<double> margin = std::nullopt, double warnUlps = 45.0);

}  // namespace resdbg::report
