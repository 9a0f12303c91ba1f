#include <bit>
#include <cstring>

#include "kernel/inputs.h"
#include "ro/orchestrator.h"

namespace resdbg::ro {

namespace {

std::uint64_t bits_of(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

void add_op(std::set<OpId>& s, OpId id) {
    if (id != kNoneOp) s.insert(id);
}

bool contains_any(const std::set<OpId>& s, OpId a, OpId b) {
    return (a != kNoneOp && s.count(a)) || (b != kNoneOp && s.count(b));
}

// Value-bit comparison: NaN probe values must still compare equal to
// themselves so the no-progress check terminates.
bool overrides_equal(const std::map<OpId, double>& a, const std::map<OpId, double>& b) {
    if (a.size() != b.size()) return false;
    auto ia = a.begin();
    for (auto ib = b.begin(); ib != b.end(); ++ia, ++ib)
        if (ia->first != ib->first || bits_of(ia->second) != bits_of(ib->second)) return false;
    return true;
}

void check_signature(const Trace& t, const TraceSig& expected) {
    if (t.size() != expected.size())
        throw OrchestratorError("nondeterministic re-execution: trace length " +
                                std::to_string(t.size()) + " vs " +
                                std::to_string(expected.size()));
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i].kind != expected[i].first)
            throw OrchestratorError("nondeterministic re-execution: op " +
                                    std::to_string(t[i].id) + " is " + op_name(t[i].kind) +
                                    ", expected " + op_name(expected[i].first));
        if (bits_of(t[i].actual) != expected[i].second)
            throw OrchestratorError("nondeterministic re-execution: op " +
                                    std::to_string(t[i].id) + " changed value");
    }
}

void mirror(const DriveOptions& opts, const RunState& state) {
    if (opts.stateDir.empty()) return;
    write_state_file(state_path(opts.stateDir, opts.programName, state.inputKey), state);
}

}  // namespace

TraceSig trace_signature(const Trace& t) {
    TraceSig sig;
    sig.reserve(t.size());
    for (const TraceRecord& r : t) sig.emplace_back(r.kind, bits_of(r.actual));
    return sig;
}

RunOutcome execute_run(const kernel::Program& p, const std::vector<double>& inputs,
                       RunState& state, const EngineConfig& cfg,
                       const kernel::ExecOptions& exec, const TraceSig* expected) {
    state.tempResOverride.clear();
    ResidueEngine engine(cfg,
                         RoSets{&state.silentOps, &state.probeOps, &state.resOverride,
                                &state.tempResOverride});
    RunOutcome out;
    out.exec = kernel::execute(p, inputs, engine, exec);
    ++state.runCount;
    if (expected) check_signature(out.exec.trace, *expected);
    out.absorptions = engine.absorptions();
    out.tempResOverride = state.tempResOverride;
    return out;
}

std::map<OpId, double> resolve(const kernel::Program& p, const std::vector<double>& inputs,
                               RunState& state, const EngineConfig& cfg,
                               const kernel::ExecOptions& exec, int cap, int& executions,
                               bool& truncated, const TraceSig& expected) {
    std::map<OpId, double> temp;
    while (true) {
        if (executions >= cap) {
            truncated = true;
            break;
        }
        RunOutcome out = execute_run(p, inputs, state, cfg, exec, &expected);
        ++executions;
        temp = out.tempResOverride;

        bool stillCancel = false;
        std::set<OpId> localMax, localSnd;
        size_t silentBefore = state.silentOps.size();
        for (const AbsorptionRecord& rec : out.absorptions) {
            if (!state.probeOps.count(rec.k)) continue;
            if (rec.ix == kNoneOp && rec.iy == kNoneOp) continue;
            if (contains_any(localSnd, rec.ix, rec.iy)) continue;
            if (contains_any(localMax, rec.jx, rec.jy)) continue;
            stillCancel = true;
            add_op(state.silentOps, rec.ix);
            add_op(state.silentOps, rec.iy);
            add_op(localMax, rec.ix);
            add_op(localMax, rec.iy);
            add_op(localSnd, rec.jx);
            add_op(localSnd, rec.jy);
        }
        if (!stillCancel) break;
        // Admitted contributors that are all already silenced cannot change
        // the next run; bail out rather than burning the budget.
        if (state.silentOps.size() == silentBefore) break;
    }
    return temp;
}

DriveResult repo_drive(const kernel::Program& p, const std::vector<double>& inputs,
                       const DriveOptions& opts) {
    EngineConfig cfg = opts.engine;
    cfg.mode = EngineMode::Repo;

    DriveResult res;
    res.state.inputKey = kernel::input_key(inputs);

    TraceSig sig;
    bool haveSig = false;
    while (true) {
        if (res.stats.executions >= opts.cap) {
            res.stats.capHit = true;
            break;
        }
        res.last = execute_run(p, inputs, res.state, cfg, opts.exec, haveSig ? &sig : nullptr);
        ++res.stats.executions;
        if (!haveSig) {
            sig = trace_signature(res.last.exec.trace);
            haveSig = true;
        }
        mirror(opts, res.state);

        bool hasCancel = false;
        for (const AbsorptionRecord& rec : res.last.absorptions) {
            if (rec.ix == kNoneOp && rec.iy == kNoneOp) continue;
            if (contains_any(res.state.sndErrOps, rec.ix, rec.iy)) continue;
            if (contains_any(res.state.maxErrOps, rec.jx, rec.jy)) continue;
            hasCancel = true;
            add_op(res.state.silentOps, rec.ix);
            add_op(res.state.silentOps, rec.iy);
            add_op(res.state.maxErrOps, rec.ix);
            add_op(res.state.maxErrOps, rec.iy);
            add_op(res.state.sndErrOps, rec.jx);
            add_op(res.state.sndErrOps, rec.jy);
            res.state.probeOps.insert(rec.k);
        }
        if (!hasCancel) break;

        std::map<OpId, double> before = res.state.resOverride;
        std::map<OpId, double> temp =
            resolve(p, inputs, res.state, cfg, opts.exec, opts.cap, res.stats.executions,
                    res.stats.truncatedResolve, sig);
        for (const auto& [k, v] : temp) res.state.resOverride[k] = v;
        bool progressed = !overrides_equal(res.state.resOverride, before);

        res.state.silentOps.clear();
        res.state.probeOps.clear();
        res.state.maxErrOps.clear();
        res.state.sndErrOps.clear();
        res.state.tempResOverride.clear();
        mirror(opts, res.state);
        if (!progressed) break;
    }
    mirror(opts, res.state);
    return res;
}

}  // namespace resdbg::ro
