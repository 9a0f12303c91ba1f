#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "engine/engine.h"
#include "kernel/interp.h"
#include "ro/state.h"

namespace resdbg::ro {

struct RunOutcome {
    kernel::ExecResult exec;
    std::vector<AbsorptionRecord> absorptions;  // ordered by OpId
    std::map<OpId, double> tempResOverride;     // probe values this run
};

struct DriveStats {
    int executions = 0;
    bool capHit = false;
    bool truncatedResolve = false;
};

struct DriveOptions {
    int cap = 20;                // total EXECUTE budget, all phases
    EngineConfig engine;         // mode is forced to Repo
    kernel::ExecOptions exec;
    std::string stateDir;        // when set, state is mirrored to disk each round
    std::string programName = "program";
};

struct DriveResult {
    RunOutcome last;
    DriveStats stats;
    RunState state;
};

struct OrchestratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// (operator, actual bits) per op; identical across re-executions by
// construction, verified anyway on every run.
using TraceSig = std::vector<std::pair<OpKind, std::uint64_t>>;
TraceSig trace_signature(const Trace& t);

// One EXECUTE: override -> silence -> compute -> probe per op, absorption
// detection on every op.  Clears and refills state.tempResOverride and bumps
// runCount.  When `expected` is given, aborts on any trace mismatch.
RunOutcome execute_run(const kernel::Program& p, const std::vector<double>& inputs,
                       RunState& state, const EngineConfig& cfg,
                       const kernel::ExecOptions& exec = {}, const TraceSig* expected = nullptr);

// RESOLVE: silenced executions until no admissible absorption remains on a
// probed op.  Contributor guards use sets local to each iteration; silencing
// accumulates in `state`.  Returns the last run's probe values.
std::map<OpId, double> resolve(const kernel::Program& p, const std::vector<double>& inputs,
                               RunState& state, const EngineConfig& cfg,
                               const kernel::ExecOptions& exec, int cap, int& executions,
                               bool& truncated, const TraceSig& expected);

// The full driver: detect, resolve, override, repeat until no admissible
// absorption or the execution cap is reached.
DriveResult repo_drive(const kernel::Program& p, const std::vector<double>& inputs,
                       const DriveOptions& opts);

}  // namespace resdbg::ro
