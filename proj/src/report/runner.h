#pragma once
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "backend/backend.h"
#include "kernel/interp.h"
#include "report/corpus.h"
#include "report/score.h"
#include "report/warnings.h"
#include "ro/orchestrator.h"

namespace resdbg::report {

// One backend execution request: which residue source, engine knobs, and
// whether a repo run should be driven through the override loop first.
struct RunRequest {
    backend::BackendId backend;
    bool reexec = true;  // repo only; every other backend runs exactly once
    EngineConfig engine;
    ro::DriveOptions drive;  // cap / state dir / program name for reexec runs
    WarningConfig warn;
    kernel::ExecOptions exec;
};

struct RunResult {
    kernel::ExecResult exec;  // the last execution
    WarningSet warnings;
    int executions = 1;
    bool capHit = false;
};

RunResult run_backend(const kernel::Program& prog, const std::vector<double>& inputs,
                      const RunRequest& req);

// Warning set of a high-precision shadow run, used as ground truth.
WarningSet oracle_truth(const kernel::Program& prog, const std::vector<double>& inputs,
                        int precBits, const WarningConfig& warn = {},
                        const kernel::ExecOptions& exec = {});

// ---- single-run report ----

struct RunReport {
    std::string program;
    std::string backend;
    bool reexec = false;
    std::string inputKey;
    std::vector<double> inputs;
    double output = 0.0;
    std::size_t opCount = 0;
    int executions = 1;
    bool capHit = false;
    double warnUlps = 45.0;
    double hookSeconds = -1.0;  // < 0: timing was not requested
    std::vector<Warning> warnings;
};

RunReport run_report(const kernel::Program& prog, const std::string& programName,
                     const std::vector<double>& inputs, const RunRequest& req);

// ---- two-backend comparison ----

struct CompareReport {
    std::string program;
    std::string testBackend;
    std::string truthBackend;
    std::string inputKey;
    std::size_t opCount = 0;
    double warnUlps = 45.0;
    std::optional<double> margin;
    int testWarnings = 0;
    int truthWarnings = 0;
    ScoreCard card;
};

CompareReport compare_backends(const kernel::Program& prog, const std::string& programName,
                               const std::vector<double>& inputs, const RunRequest& test,
                               const RunRequest& truth, std::optional<double> margin);

// ---- corpus sweep ----

struct CorpusColumnSpec {
    backend::BackendId id;
    bool reexec = false;
    std::string label;  // defaults to the backend name, "+ro" when driven
};

struct CorpusOptions {
    int oracleBits = backend::kOracleDefaultBits;
    std::optional<double> margin;
    WarningConfig warn;
    EngineConfig engine;
    int cap = 20;
    std::string stateDir;  // optional persistence for driven repo columns
    int threads = 0;       // 0 = hardware concurrency
    kernel::ExecOptions exec;
};

struct InputScore {
    std::string inputKey;
    int falsePositives = 0;
    int falseNegatives = 0;
    int executions = 1;
    bool capHit = false;
};

struct CorpusColumn {
    std::string label;
    std::string backend;
    bool reexec = false;
    long long falsePositives = 0;
    long long falseNegatives = 0;
    long long executions = 0;
    int capHits = 0;
    std::vector<InputScore> perInput;
};

struct CorpusEntryReport {
    std::string entry;
    std::string genspec;
    std::size_t inputCount = 0;
    std::size_t opCount = 0;  // trace length on the first input
    std::vector<CorpusColumn> columns;
};

struct CorpusReport {
    int oracleBits = backend::kOracleDefaultBits;
    std::optional<double> margin;
    double warnUlps = 45.0;
    std::vector<CorpusEntryReport> entries;
};

// The standard comparison columns: driven repo, plain repo, the two eftsan
// baselines and double-double.
std::vector<CorpusColumnSpec> default_corpus_columns();

CorpusReport run_corpus(const std::vector<const CorpusEntry*>& entries,
                        const std::vector<CorpusColumnSpec>& columns, const CorpusOptions& opts);

// ---- oracle precision stability ----

struct OracleCheckReport {
    int bitsLo = 0;
    int bitsHi = 0;
    long long inputsChecked = 0;
    struct Mismatch {
        std::string entry;
        std::string inputKey;
        int differingOps = 0;
    };
    std::vector<Mismatch> mismatches;
    bool identical() const { return mismatches.empty(); }
};

// Runs every entry at `bits` and `2*bits` and requires identical warnings.
OracleCheckReport oracle_check(const std::vector<const CorpusEntry*>& entries, int bits,
                               const CorpusOptions& opts);

// ---- rendering (stable field order in the structured form) ----

std::string report_text(const RunReport&);
std::string report_text(const CompareReport&);
std::string report_text(const CorpusReport&);
std::string report_text(const OracleCheckReport&);

nlohmann::ordered_json report_json(const RunReport&);
nlohmann::ordered_json report_json(const CompareReport&);
nlohmann::ordered_json report_json(const CorpusReport&);
nlohmann::ordered_json report_json(const OracleCheckReport&);

}  // namespace resdbg::report
