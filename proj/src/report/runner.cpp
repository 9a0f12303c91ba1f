#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "kernel/ast.h"
#include "report/runner.h"

namespace resdbg::report {

namespace {

std::string dec17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dec6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string hex16(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llX", static_cast<unsigned long long>(bits));
    return buf;
}

std::string column_label(const backend::BackendId& id, bool reexec) {
    std::string name = id.name();
    if (reexec && id.kind == backend::BackendKind::Repo) name += "+ro";
    return name;
}

RunRequest request_for(const CorpusColumnSpec& col, const std::string& programName,
                       const CorpusOptions& opts) {
    RunRequest req;
    req.backend = col.id;
    req.reexec = col.reexec;
    req.engine = opts.engine;
    req.drive.cap = opts.cap;
    req.drive.stateDir = opts.stateDir;
    req.drive.programName = programName;
    req.warn = opts.warn;
    req.exec = opts.exec;
    return req;
}

// Runs `job(i)` for i in [0, count) on a small pool; rethrows the first
// worker exception. Results must be written to per-index slots by the job.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job job) {
    if (count == 0) return;
    unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    n = static_cast<unsigned>(std::min<std::size_t>(n, count));
    if (n == 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex errMu;
    std::exception_ptr err;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                job(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(errMu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

RunResult run_backend(const kernel::Program& prog, const std::vector<double>& inputs,
                      const RunRequest& req) {
    RunResult out;
    if (req.backend.kind == backend::BackendKind::Repo && req.reexec) {
        ro::DriveOptions d = req.drive;
        d.engine = req.engine;
        d.exec = req.exec;
        ro::DriveResult res = ro::repo_drive(prog, inputs, d);
        out.exec = std::move(res.last.exec);
        out.executions = res.stats.executions;
        out.capHit = res.stats.capHit;
    } else {
        std::unique_ptr<Hook> hook = backend::make_hook(req.backend, req.engine);
        out.exec = kernel::execute(prog, inputs, *hook, req.exec);
    }
    out.warnings = compute_warnings(out.exec.trace, req.warn);
    return out;
}

WarningSet oracle_truth(const kernel::Program& prog, const std::vector<double>& inputs,
                        int precBits, const WarningConfig& warn,
                        const kernel::ExecOptions& exec) {
    backend::BackendId id;
    id.kind = backend::BackendKind::Oracle;
    id.oracleBits = precBits;
    std::unique_ptr<Hook> hook = backend::make_hook(id, EngineConfig{});
    kernel::ExecResult res = kernel::execute(prog, inputs, *hook, exec);
    return compute_warnings(res.trace, warn);
}

RunReport run_report(const kernel::Program& prog, const std::string& programName,
                     const std::vector<double>& inputs, const RunRequest& req) {
    RunRequest r = req;
    r.drive.programName = programName;
    RunResult res = run_backend(prog, inputs, r);
    RunReport rep;
    rep.program = programName;
    rep.backend = req.backend.name();
    rep.reexec = req.backend.kind == backend::BackendKind::Repo && req.reexec;
    rep.inputKey = kernel::input_key(inputs);
    rep.inputs = inputs;
    rep.output = res.exec.output.actual;
    rep.opCount = res.exec.trace.size();
    rep.executions = res.executions;
    rep.capHit = res.capHit;
    rep.warnUlps = req.warn.warnUlps;
    rep.hookSeconds = req.exec.timing ? res.exec.hookSeconds : -1.0;
    rep.warnings = std::move(res.warnings.warnings);
    return rep;
}

CompareReport compare_backends(const kernel::Program& prog, const std::string& programName,
                               const std::vector<double>& inputs, const RunRequest& test,
                               const RunRequest& truth, std::optional<double> margin) {
    RunRequest t = test;
    t.drive.programName = programName;
    RunRequest u = truth;
    u.drive.programName = programName;
    RunResult rt = run_backend(prog, inputs, t);
    RunResult ru = run_backend(prog, inputs, u);
    CompareReport rep;
    rep.program = programName;
    rep.testBackend = column_label(test.backend, test.reexec);
    rep.truthBackend = column_label(truth.backend, truth.reexec);
    rep.inputKey = kernel::input_key(inputs);
    rep.opCount = rt.exec.trace.size();
    rep.warnUlps = test.warn.warnUlps;
    rep.margin = margin;
    rep.testWarnings = static_cast<int>(rt.warnings.warnings.size());
    rep.truthWarnings = static_cast<int>(ru.warnings.warnings.size());
    rep.card = score(rt.warnings, ru.warnings, margin, test.warn.warnUlps);
    return rep;
}

std::vector<CorpusColumnSpec> default_corpus_columns() {
    auto id = [](const char* s) { return *backend::BackendId::parse(s); };
    return {
        {id("repo"), true, "repo+ro"},
        {id("repo"), false, "repo"},
        {id("eftsan-fixed"), false, "eftsan-fixed"},
        {id("eftsan-buggy"), false, "eftsan-buggy"},
        {id("dd"), false, "dd"},
    };
}

CorpusReport run_corpus(const std::vector<const CorpusEntry*>& entries,
                        const std::vector<CorpusColumnSpec>& columns, const CorpusOptions& opts) {
    CorpusReport rep;
    rep.oracleBits = opts.oracleBits;
    rep.margin = opts.margin;
    rep.warnUlps = opts.warn.warnUlps;
    for (const CorpusEntry* entry : entries) {
        kernel::Program prog = kernel::parse_program(entry->source);
        std::size_t arity = prog.entry_fn().params.size();
        std::vector<std::vector<double>> inputs =
            kernel::generate_inputs(entry->input_spec(), arity);

        CorpusEntryReport er;
        er.entry = entry->name;
        er.genspec = entry->genspec;
        er.inputCount = inputs.size();
        er.columns.resize(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            CorpusColumn& col = er.columns[c];
            col.label = columns[c].label.empty() ? column_label(columns[c].id, columns[c].reexec)
                                                 : columns[c].label;
            col.backend = columns[c].id.name();
            col.reexec =
                columns[c].reexec && columns[c].id.kind == backend::BackendKind::Repo;
            col.perInput.resize(inputs.size());
        }

        std::atomic<std::size_t> firstOps{0};
        parallel_for(inputs.size(), opts.threads, [&](std::size_t i) {
            WarningSet truth =
                oracle_truth(prog, inputs[i], opts.oracleBits, opts.warn, opts.exec);
            if (i == 0) firstOps = truth.ulps.size();
            std::string key = kernel::input_key(inputs[i]);
            for (std::size_t c = 0; c < columns.size(); ++c) {
                RunRequest req = request_for(columns[c], entry->name, opts);
                RunResult res = run_backend(prog, inputs[i], req);
                ScoreCard card = score(res.warnings, truth, opts.margin, opts.warn.warnUlps);
                InputScore& s = er.columns[c].perInput[i];
                s.inputKey = key;
                s.falsePositives = card.falsePositives;
                s.falseNegatives = card.falseNegatives;
                s.executions = res.executions;
                s.capHit = res.capHit;
            }
        });

        er.opCount = firstOps.load();
        for (CorpusColumn& col : er.columns)
            for (const InputScore& s : col.perInput) {
                col.falsePositives += s.falsePositives;
                col.falseNegatives += s.falseNegatives;
                col.executions += s.executions;
                if (s.capHit) ++col.capHits;
            }
        rep.entries.push_back(std::move(er));
    }
    return rep;
}

OracleCheckReport oracle_check(const std::vector<const CorpusEntry*>& entries, int bits,
                               const CorpusOptions& opts) {
    OracleCheckReport rep;
    rep.bitsLo = bits;
    rep.bitsHi = 2 * bits;
    for (const CorpusEntry* entry : entries) {
        kernel::Program prog = kernel::parse_program(entry->source);
        std::size_t arity = prog.entry_fn().params.size();
        std::vector<std::vector<double>> inputs =
            kernel::generate_inputs(entry->input_spec(), arity);
        std::vector<int> differing(inputs.size(), 0);
        parallel_for(inputs.size(), opts.threads, [&](std::size_t i) {
            WarningSet lo = oracle_truth(prog, inputs[i], rep.bitsLo, opts.warn, opts.exec);
            WarningSet hi = oracle_truth(prog, inputs[i], rep.bitsHi, opts.warn, opts.exec);
            differing[i] = score(lo, hi, std::nullopt, opts.warn.warnUlps).total();
        });
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            ++rep.inputsChecked;
            if (differing[i] > 0)
                rep.mismatches.push_back(
                    {entry->name, kernel::input_key(inputs[i]), differing[i]});
        }
    }
    return rep;
}

std::string report_text(const RunReport& r) {
    std::ostringstream os;
    os << "run report\n";
    os << "  program:    " << r.program << "\n";
    os << "  backend:    " << r.backend << (r.reexec ? "+ro" : "") << "\n";
    os << "  inputs:    ";
    for (double v : r.inputs) os << " " << dec17(v);
    os << "\n";
    os << "  input key:  " << r.inputKey << "\n";
    os << "  output:     " << dec17(r.output) << "\n";
    os << "  ops:        " << r.opCount << "\n";
    os << "  executions: " << r.executions << (r.capHit ? "  (cap hit)" : "") << "\n";
    if (r.hookSeconds >= 0.0) os << "  hook time:  " << dec6(r.hookSeconds) << " s\n";
    os << "  threshold:  2^" << dec6(r.warnUlps) << " ulps\n";
    os << "  warnings:   " << r.warnings.size() << "\n";
    for (const Warning& w : r.warnings) {
        os << "    op " << std::setw(4) << w.opId << " (" << op_name(w.op) << ")"
           << "  actual " << dec17(w.actual) << "  residue " << dec17(w.residue) << "  ulps "
           << dec6(w.ulpCount) << "\n";
    }
    return os.str();
}

std::string report_text(const CompareReport& r) {
    std::ostringstream os;
    os << "compare report\n";
    os << "  program:   " << r.program << "\n";
    os << "  test:      " << r.testBackend << "\n";
    os << "  truth:     " << r.truthBackend << "\n";
    os << "  input key: " << r.inputKey << "\n";
    os << "  ops:       " << r.opCount << "\n";
    os << "  threshold: 2^" << dec6(r.warnUlps) << " ulps";
    if (r.margin) os << ", margin " << dec6(*r.margin);
    os << "\n";
    os << "  warnings:  test " << r.testWarnings << ", truth " << r.truthWarnings << "\n";
    os << "  false positives: " << r.card.falsePositives << "\n";
    os << "  false negatives: " << r.card.falseNegatives << "\n";
    if (!r.card.perOp.empty()) {
        os << "  diffs:\n";
        for (const ScoreCard::Diff& d : r.card.perOp) {
            os << "    op " << std::setw(4) << d.opId << "  test "
               << (d.inTest ? "warn" : "  no") << " / truth " << (d.inTruth ? "warn" : "  no")
               << "  truth ulps " << dec6(d.truthUlps) << (d.excluded ? "  [margin]" : "")
               << "\n";
        }
    }
    return os.str();
}

std::string report_text(const CorpusReport& r) {
    std::ostringstream os;
    os << "corpus report: oracle " << r.oracleBits << " bits, threshold 2^" << dec6(r.warnUlps)
       << " ulps";
    if (r.margin) os << ", margin " << dec6(*r.margin);
    os << "\n\n";
    os << std::left << std::setw(14) << "entry" << std::right << std::setw(7) << "inputs"
       << std::setw(6) << "ops" << "  " << std::left << std::setw(14) << "column" << std::right
       << std::setw(8) << "FP" << std::setw(8) << "FN" << std::setw(8) << "execs" << std::setw(5)
       << "cap" << "\n";
    for (const CorpusEntryReport& e : r.entries) {
        bool first = true;
        for (const CorpusColumn& c : e.columns) {
            if (first)
                os << std::left << std::setw(14) << e.entry << std::right << std::setw(7)
                   << e.inputCount << std::setw(6) << e.opCount;
            else
                os << std::setw(27) << "";
            first = false;
            os << "  " << std::left << std::setw(14) << c.label << std::right << std::setw(8)
               << c.falsePositives << std::setw(8) << c.falseNegatives << std::setw(8)
               << c.executions << std::setw(5) << c.capHits << "\n";
        }
    }
    return os.str();
}

std::string report_text(const OracleCheckReport& r) {
    std::ostringstream os;
    os << "oracle stability: " << r.bitsLo << " vs " << r.bitsHi << " bits on "
       << r.inputsChecked << " inputs: ";
    if (r.identical()) {
        os << "identical warning sets\n";
    } else {
        os << r.mismatches.size() << " mismatching inputs\n";
        for (const OracleCheckReport::Mismatch& m : r.mismatches)
            os << "  " << m.entry << " " << m.inputKey << ": " << m.differingOps
               << " ops differ\n";
    }
    return os.str();
}

nlohmann::ordered_json report_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["report"] = "run";
    j["program"] = r.program;
    j["backend"] = r.backend;
    j["reexec"] = r.reexec;
    j["inputKey"] = r.inputKey;
    nlohmann::ordered_json ins = nlohmann::ordered_json::array();
    for (double v : r.inputs) ins.push_back({{"value", dec17(v)}, {"bits", hex16(v)}});
    j["inputs"] = std::move(ins);
    j["output"] = dec17(r.output);
    j["outputBits"] = hex16(r.output);
    j["opCount"] = r.opCount;
    j["executions"] = r.executions;
    j["capHit"] = r.capHit;
    j["warnUlps"] = r.warnUlps;
    if (r.hookSeconds >= 0.0) j["hookSeconds"] = r.hookSeconds;
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const Warning& w : r.warnings) {
        ws.push_back({{"op", w.opId},
                      {"operator", op_name(w.op)},
                      {"actual", dec17(w.actual)},
                      {"actualBits", hex16(w.actual)},
                      {"residue", dec17(w.residue)},
                      {"residueBits", hex16(w.residue)},
                      {"ulps", dec6(w.ulpCount)}});
    }
    j["warnings"] = std::move(ws);
    return j;
}

nlohmann::ordered_json report_json(const CompareReport& r) {
    nlohmann::ordered_json j;
    j["report"] = "compare";
    j["program"] = r.program;
    j["test"] = r.testBackend;
    j["truth"] = r.truthBackend;
    j["inputKey"] = r.inputKey;
    j["opCount"] = r.opCount;
    j["warnUlps"] = r.warnUlps;
    if (r.margin)
        j["margin"] = *r.margin;
    else
        j["margin"] = nullptr;
    j["testWarnings"] = r.testWarnings;
    j["truthWarnings"] = r.truthWarnings;
    j["falsePositives"] = r.card.falsePositives;
    j["falseNegatives"] = r.card.falseNegatives;
    nlohmann::ordered_json diffs = nlohmann::ordered_json::array();
    for (const ScoreCard::Diff& d : r.card.perOp) {
        diffs.push_back({{"op", d.opId},
                         {"inTest", d.inTest},
                         {"inTruth", d.inTruth},
                         {"testUlps", dec6(d.testUlps)},
                         {"truthUlps", dec6(d.truthUlps)},
                         {"excluded", d.excluded}});
    }
    j["diffs"] = std::move(diffs);
    return j;
}

nlohmann::ordered_json report_json(const CorpusReport& r) {
    nlohmann::ordered_json j;
    j["report"] = "corpus";
    j["oracleBits"] = r.oracleBits;
    if (r.margin)
        j["margin"] = *r.margin;
    else
        j["margin"] = nullptr;
    j["warnUlps"] = r.warnUlps;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const CorpusEntryReport& e : r.entries) {
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (const CorpusColumn& c : e.columns) {
            nlohmann::ordered_json per = nlohmann::ordered_json::array();
            for (const InputScore& s : c.perInput) {
                per.push_back({{"key", s.inputKey},
                               {"fp", s.falsePositives},
                               {"fn", s.falseNegatives},
                               {"executions", s.executions},
                               {"capHit", s.capHit}});
            }
            cols.push_back({{"label", c.label},
                            {"backend", c.backend},
                            {"reexec", c.reexec},
                            {"falsePositives", c.falsePositives},
                            {"falseNegatives", c.falseNegatives},
                            {"executions", c.executions},
                            {"capHits", c.capHits},
                            {"perInput", std::move(per)}});
        }
        entries.push_back({{"entry", e.entry},
                           {"genspec", e.genspec},
                           {"inputs", e.inputCount},
                           {"ops", e.opCount},
                           {"columns", std::move(cols)}});
    }
    j["entries"] = std::move(entries);
    return j;
}

nlohmann::ordered_json report_json(const OracleCheckReport& r) {
    nlohmann::ordered_json j;
    j["report"] = "oracle-check";
    j["bitsLo"] = r.bitsLo;
    j["bitsHi"] = r.bitsHi;
    j["inputsChecked"] = r.inputsChecked;
    j["identical"] = r.identical();
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const OracleCheckReport::Mismatch& m : r.mismatches)
        ms.push_back(
            {{"entry", m.entry}, {"inputKey", m.inputKey}, {"differingOps", m.differingOps}});
    j["mismatches"] = std::move(ms);
    return j;
}

}  // namespace resdbg::report
