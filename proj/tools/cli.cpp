#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "resdbg/resdbg.h"

// Thin front end over the C API: every computation goes through resdbg.h,
// this file only handles flags, report files, and exit codes.
//   0  clean run
//   1  false reports (or an unstable oracle) under --strict
//   2  usage, IO, or runtime failure

namespace {

struct CtxDel {
    void operator()(rd_context* c) const { rd_context_free(c); }
};
struct ProgDel {
    void operator()(rd_program* p) const { rd_program_free(p); }
};
struct InDel {
    void operator()(rd_inputset* s) const { rd_inputs_free(s); }
};
struct RepDel {
    void operator()(rd_report* r) const { rd_report_free(r); }
};

using CtxPtr = std::unique_ptr<rd_context, CtxDel>;
using ProgPtr = std::unique_ptr<rd_program, ProgDel>;
using InPtr = std::unique_ptr<rd_inputset, InDel>;
using RepPtr = std::unique_ptr<rd_report, RepDel>;

int fail(rd_context* ctx) {
    std::fprintf(stderr, "resdbg: %s\n", rd_last_error(ctx));
    return 2;
}

int usage(const std::string& msg) {
    std::fprintf(stderr, "resdbg: %s\n", msg.c_str());
    return 2;
}

// Tuning knobs shared by every subcommand; sentinels mean "not given".
struct Shared {
    std::string ro, trick, margin, stateDir;
    int maxReexec = -1;
    int oracleBits = -1;
    int threads = -1;
    double warnUlps = NAN, condThreshold = NAN, absorbUlps = NAN;
    bool timing = false;
    bool zeroUlpDenormal = false;
    bool strict = false;
    std::string reportPath;
};

struct InputArgs {
    std::string inputs;      // one row, "x=1e99" or "1e99 2.0"
    std::string inputsFile;  // one row per line
    std::string gen;         // generator spec, e.g. "seed=7,count=100,e=[54,250],sign=pos"
};

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int apply_shared(rd_context* ctx, const Shared& o) {
    auto set = [&](const char* key, const std::string& val) {
        return rd_context_set_option(ctx, key, val.c_str()) == RD_OK;
    };
    if (!o.ro.empty() && !set("ro", o.ro)) return fail(ctx);
    if (!o.trick.empty() && !set("trick", o.trick)) return fail(ctx);
    if (!o.margin.empty() && !set("margin", o.margin)) return fail(ctx);
    if (!o.stateDir.empty() && !set("state-dir", o.stateDir)) return fail(ctx);
    if (o.maxReexec >= 0 && !set("max-reexec", std::to_string(o.maxReexec))) return fail(ctx);
    if (o.oracleBits >= 0 && !set("oracle-bits", std::to_string(o.oracleBits))) return fail(ctx);
    if (o.threads >= 0 && !set("threads", std::to_string(o.threads))) return fail(ctx);
    if (!std::isnan(o.warnUlps) && !set("warn-ulps", fmt_num(o.warnUlps))) return fail(ctx);
    if (!std::isnan(o.condThreshold) && !set("cond-threshold", fmt_num(o.condThreshold)))
        return fail(ctx);
    if (!std::isnan(o.absorbUlps) && !set("absorb-ulps", fmt_num(o.absorbUlps))) return fail(ctx);
    if (o.timing && !set("timing", "on")) return fail(ctx);
    if (o.zeroUlpDenormal && !set("zero-ulp-denormal", "on")) return fail(ctx);
    return 0;
}

// A program argument is a path when the file exists; otherwise it is tried
// as a bundled corpus entry ("diff-roots" or "diff-roots.fpk").
int load_program(rd_context* ctx, const std::string& arg, ProgPtr& out, std::string& corpusName) {
    rd_program* raw = nullptr;
    if (std::filesystem::exists(arg)) {
        if (rd_program_load(ctx, arg.c_str(), &raw) != RD_OK) return fail(ctx);
        out.reset(raw);
        return 0;
    }
    std::string name = arg;
    if (name.size() > 4 && name.substr(name.size() - 4) == ".fpk")
        name = name.substr(0, name.size() - 4);
    const char* source = rd_corpus_source(name.c_str());
    if (!source)
        return usage("no such file or corpus entry: '" + arg + "' (entries: " +
                     rd_corpus_entries() + ")");
    if (rd_program_parse(ctx, source, &raw) != RD_OK) return fail(ctx);
    out.reset(raw);
    corpusName = name;
    return 0;
}

// `fallbackGen` (a corpus entry's genspec) is used when no input flag was given.
int make_inputs(rd_context* ctx, const rd_program* prog, const InputArgs& ia,
                const char* fallbackGen, InPtr& out) {
    int given = !ia.inputs.empty() + !ia.inputsFile.empty() + !ia.gen.empty();
    if (given > 1) return usage("give at most one of --inputs, --inputs-file, --gen");
    rd_inputset* raw = nullptr;
    rd_status st;
    if (!ia.inputs.empty())
        st = rd_inputs_assign(ctx, prog, ia.inputs.c_str(), &raw);
    else if (!ia.inputsFile.empty())
        st = rd_inputs_load(ctx, prog, ia.inputsFile.c_str(), &raw);
    else if (!ia.gen.empty())
        st = rd_inputs_generate(ctx, prog, ia.gen.c_str(), &raw);
    else if (fallbackGen)
        st = rd_inputs_generate(ctx, prog, fallbackGen, &raw);
    else
        return usage("inputs required: --inputs, --inputs-file, or --gen");
    if (st != RD_OK) return fail(ctx);
    out.reset(raw);
    if (rd_inputs_count(out.get()) < 1) return usage("input set is empty");
    return 0;
}

int write_report_file(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return usage("cannot write report file '" + path + "'");
    f << j.dump(2) << "\n";
    if (!f.flush()) return usage("cannot write report file '" + path + "'");
    return 0;
}

// Single report -> the object itself; several -> a wrapper with one element
// per input so the file shape stays self-describing.
int finish_report_file(const std::string& path, std::vector<nlohmann::ordered_json>& parts) {
    if (path.empty()) return 0;
    if (parts.size() == 1) return write_report_file(path, parts.front());
    nlohmann::ordered_json batch;
    batch["report"] = "batch";
    batch["reports"] = parts;
    return write_report_file(path, batch);
}

double stat_or(const rd_report* rep, const char* key, double dflt) {
    double v = dflt;
    if (rd_report_stat(rep, key, &v) != RD_OK) return dflt;
    return v;
}

int do_run(rd_context* ctx, const std::string& progArg, const InputArgs& ia,
           const std::string& backend, const Shared& o) {
    ProgPtr prog;
    std::string corpusName;
    if (int rc = load_program(ctx, progArg, prog, corpusName)) return rc;
    const char* fallback = corpusName.empty() ? nullptr : rd_corpus_genspec(corpusName.c_str());
    InPtr in;
    if (int rc = make_inputs(ctx, prog.get(), ia, fallback, in)) return rc;

    long long n = rd_inputs_count(in.get());
    std::vector<nlohmann::ordered_json> parts;
    double falseReports = 0.0;
    for (long long i = 0; i < n; ++i) {
        rd_report* raw = nullptr;
        if (rd_run(ctx, prog.get(), in.get(), i, backend.c_str(), &raw) != RD_OK)
            return fail(ctx);
        RepPtr rep(raw);
        if (i > 0) std::fputs("\n", stdout);
        std::fputs(rd_report_text(rep.get()), stdout);
        if (!o.reportPath.empty()) parts.push_back(nlohmann::ordered_json::parse(rd_report_json(rep.get())));
        if (o.strict) {
            rd_report* craw = nullptr;
            if (rd_compare(ctx, prog.get(), in.get(), i, backend.c_str(), nullptr, &craw) != RD_OK)
                return fail(ctx);
            RepPtr cmp(craw);
            double fp = stat_or(cmp.get(), "fp", 0), fn = stat_or(cmp.get(), "fn", 0);
            std::printf("strict: vs oracle fp=%g fn=%g\n", fp, fn);
            falseReports += fp + fn;
        }
    }
    if (int rc = finish_report_file(o.reportPath, parts)) return rc;
    return (o.strict && falseReports > 0.0) ? 1 : 0;
}

int do_compare(rd_context* ctx, const std::string& progArg, const std::string& corpusEntry,
               const InputArgs& ia, const std::string& a, const std::string& b,
               const std::string& truth, const Shared& o) {
    if (progArg.empty() && corpusEntry.empty())
        return usage("compare needs a program argument or --corpus");
    ProgPtr prog;
    std::string corpusName = corpusEntry;
    if (!corpusEntry.empty()) {
        const char* source = rd_corpus_source(corpusEntry.c_str());
        if (!source)
            return usage("no such corpus entry: '" + corpusEntry + "' (entries: " +
                         rd_corpus_entries() + ")");
        rd_program* raw = nullptr;
        if (rd_program_parse(ctx, source, &raw) != RD_OK) return fail(ctx);
        prog.reset(raw);
    } else if (int rc = load_program(ctx, progArg, prog, corpusName)) {
        return rc;
    }
    const char* fallback = corpusName.empty() ? nullptr : rd_corpus_genspec(corpusName.c_str());
    InPtr in;
    if (int rc = make_inputs(ctx, prog.get(), ia, fallback, in)) return rc;

    const char* truthArg = truth.empty() ? nullptr : truth.c_str();
    long long n = rd_inputs_count(in.get());
    std::vector<nlohmann::ordered_json> parts;
    double totalA = 0.0, totalB = 0.0;
    for (long long i = 0; i < n; ++i) {
        rd_report* rawA = nullptr;
        if (rd_compare(ctx, prog.get(), in.get(), i, a.c_str(), truthArg, &rawA) != RD_OK)
            return fail(ctx);
        RepPtr repA(rawA);
        rd_report* rawB = nullptr;
        if (rd_compare(ctx, prog.get(), in.get(), i, b.c_str(), truthArg, &rawB) != RD_OK)
            return fail(ctx);
        RepPtr repB(rawB);
        totalA += stat_or(repA.get(), "total", 0);
        totalB += stat_or(repB.get(), "total", 0);
        if (n == 1) {
            std::printf("--- a: %s ---\n", a.c_str());
            std::fputs(rd_report_text(repA.get()), stdout);
            std::printf("--- b: %s ---\n", b.c_str());
            std::fputs(rd_report_text(repB.get()), stdout);
        }
        if (!o.reportPath.empty()) {
            nlohmann::ordered_json pair;
            pair["report"] = "compare-pair";
            pair["a"] = nlohmann::ordered_json::parse(rd_report_json(repA.get()));
            pair["b"] = nlohmann::ordered_json::parse(rd_report_json(repB.get()));
            parts.push_back(std::move(pair));
        }
    }
    std::printf("false reports over %lld input%s: a(%s)=%g  b(%s)=%g\n", n, n == 1 ? "" : "s",
                a.c_str(), totalA, b.c_str(), totalB);
    if (int rc = finish_report_file(o.reportPath, parts)) return rc;
    return (o.strict && totalA + totalB > 0.0) ? 1 : 0;
}

int do_corpus(rd_context* ctx, const std::string& entries, const std::string& backends,
              const Shared& o) {
    rd_report* raw = nullptr;
    if (rd_corpus_run(ctx, entries.empty() ? nullptr : entries.c_str(),
                      backends.empty() ? nullptr : backends.c_str(), &raw) != RD_OK)
        return fail(ctx);
    RepPtr rep(raw);
    std::fputs(rd_report_text(rep.get()), stdout);
    if (!o.reportPath.empty()) {
        std::vector<nlohmann::ordered_json> parts{
            nlohmann::ordered_json::parse(rd_report_json(rep.get()))};
        if (int rc = finish_report_file(o.reportPath, parts)) return rc;
    }
    double bad = stat_or(rep.get(), "fp", 0) + stat_or(rep.get(), "fn", 0);
    return (o.strict && bad > 0.0) ? 1 : 0;
}

int do_oracle_check(rd_context* ctx, const std::string& entries, int bits, const Shared& o) {
    rd_report* raw = nullptr;
    if (rd_oracle_check(ctx, entries.empty() ? nullptr : entries.c_str(), bits, &raw) != RD_OK)
        return fail(ctx);
    RepPtr rep(raw);
    std::fputs(rd_report_text(rep.get()), stdout);
    if (!o.reportPath.empty()) {
        std::vector<nlohmann::ordered_json> parts{
            nlohmann::ordered_json::parse(rd_report_json(rep.get()))};
        if (int rc = finish_report_file(o.reportPath, parts)) return rc;
    }
    return (o.strict && stat_or(rep.get(), "identical", 1) == 0.0) ? 1 : 0;
}

void add_shared(CLI::App* cmd, Shared& o) {
    cmd->add_option("--ro", o.ro, "re-execution drive for the repo backend (default on)")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--trick", o.trick, "rounding-trick detection (default on)")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--max-reexec", o.maxReexec, "re-execution cap (default 20)");
    cmd->add_option("--warn-ulps", o.warnUlps, "warning threshold exponent (default 45)");
    cmd->add_option("--cond-threshold", o.condThreshold,
                    "ill-conditioning exponent for the zero flag (default 40)");
    cmd->add_option("--absorb-ulps", o.absorbUlps, "absorption tolerance in ulps (default 4)");
    cmd->add_option("--margin", o.margin,
                    "scoring margin in ulp exponents, or 'none' (default 1)");
    cmd->add_option("--oracle-bits", o.oracleBits, "oracle precision (default 512)");
    cmd->add_option("--state-dir", o.stateDir, "persist drive state under DIR");
    cmd->add_option("--threads", o.threads, "corpus worker threads (0 = auto)");
    cmd->add_option("--report", o.reportPath, "also write the report as JSON to PATH");
    cmd->add_flag("--emit-timing", o.timing, "measure time spent in the residue hook");
    cmd->add_flag("--zero-ulp-denormal", o.zeroUlpDenormal,
                  "measure residues at actual=0 against the smallest denormal");
    cmd->add_flag("--strict", o.strict, "exit 1 when the report contains false reports");
}

void add_input_args(CLI::App* cmd, InputArgs& ia) {
    cmd->add_option("--inputs", ia.inputs, "one input row: 'x=1e99' or '1e99 2.0'");
    cmd->add_option("--inputs-file", ia.inputsFile, "input rows, one per line");
    cmd->add_option("--gen", ia.gen, "generator spec, e.g. 'seed=7,count=100,e=[54,250],sign=pos'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"residue-based floating-point debugger"};
    app.set_version_flag("--version", rd_version());
    app.require_subcommand(1);

    Shared o;
    InputArgs ia;
    std::string progArg, backend = "repo", a, b, truth, corpusEntry, entries, backends;
    int bits = 0;

    CLI::App* runCmd = app.add_subcommand("run", "run one program and report warnings");
    runCmd->add_option("program", progArg, "program file or corpus entry name")->required();
    add_input_args(runCmd, ia);
    runCmd->add_option("--backend", backend,
                       "repo, repo+ro, eftsan-fixed, eftsan-buggy, dd, oracle[:BITS]");
    add_shared(runCmd, o);

    CLI::App* cmpCmd =
        app.add_subcommand("compare", "score two backends against a shared truth");
    cmpCmd->add_option("program", progArg, "program file or corpus entry name");
    cmpCmd->add_option("--a", a, "first backend")->required();
    cmpCmd->add_option("--b", b, "second backend")->required();
    cmpCmd->add_option("--truth", truth, "truth backend (default oracle at --oracle-bits)");
    cmpCmd->add_option("--corpus", corpusEntry, "take program and inputs from a corpus entry");
    add_input_args(cmpCmd, ia);
    add_shared(cmpCmd, o);

    CLI::App* corCmd = app.add_subcommand("corpus", "sweep the bundled corpus");
    corCmd->add_option("--entries", entries, "comma-separated entry names (default all)");
    corCmd->add_option("--backends", backends,
                       "comma-separated columns (default repo+ro,repo,eftsan-fixed,"
                       "eftsan-buggy,dd)");
    add_shared(corCmd, o);

    CLI::App* oraCmd =
        app.add_subcommand("oracle-check", "warning stability of the oracle at p vs 2p bits");
    oraCmd->add_option("--entries", entries, "comma-separated entry names (default all)");
    oraCmd->add_option("--bits", bits, "lower precision p (default --oracle-bits)");
    add_shared(oraCmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CtxPtr ctx(rd_context_new());
    if (!ctx) return usage("out of memory");
    if (int rc = apply_shared(ctx.get(), o)) return rc;

    if (runCmd->parsed()) return do_run(ctx.get(), progArg, ia, backend, o);
    if (cmpCmd->parsed()) return do_compare(ctx.get(), progArg, corpusEntry, ia, a, b, truth, o);
    if (corCmd->parsed()) return do_corpus(ctx.get(), entries, backends, o);
    return do_oracle_check(ctx.get(), entries, bits, o);
}
