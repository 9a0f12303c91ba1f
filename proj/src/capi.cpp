#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "resdbg/resdbg.h"

#include "backend/backend.h"
#include "kernel/ast.h"
#include "kernel/inputs.h"
#include "kernel/interp.h"
#include "report/corpus.h"
#include "report/runner.h"
#include "ro/orchestrator.h"
#include "ro/state.h"

namespace rb = resdbg::backend;
namespace rk = resdbg::kernel;
namespace rr = resdbg::report;
namespace rro = resdbg::ro;

struct rd_context {
    std::string lastError;
    std::map<std::string, std::string> options;
};

struct rd_program {
    rk::Program prog;
    std::string name;
};

struct rd_inputset {
    std::vector<std::vector<double>> rows;
};

struct rd_report {
    std::variant<rr::RunReport, rr::CompareReport, rr::CorpusReport, rr::OracleCheckReport>
        payload;
    std::string text;
    std::string json;
};

namespace {

rd_status fail(rd_context* ctx, rd_status st, const std::string& msg) {
    if (ctx) ctx->lastError = msg;
    return st;
}

template <typename Fn>
rd_status guarded(rd_context* ctx, Fn&& fn) {
    if (!ctx) return RD_ERR_BAD_ARG;
    ctx->lastError.clear();
    try {
        return fn();
    } catch (const rk::ValidateError& e) {
        return fail(ctx, RD_ERR_VALIDATE, e.what());
    } catch (const rk::ParseError& e) {
        return fail(ctx, RD_ERR_PARSE, e.what());
    } catch (const rk::InputError& e) {
        return fail(ctx, RD_ERR_BAD_ARG, e.what());
    } catch (const rro::StateError& e) {
        return fail(ctx, RD_ERR_IO, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(ctx, RD_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(ctx, RD_ERR_RUNTIME, e.what());
    }
}

bool parse_onoff(const std::string& v, bool& out) {
    if (v == "on" || v == "true" || v == "1") {
        out = true;
        return true;
    }
    if (v == "off" || v == "false" || v == "0") {
        out = false;
        return true;
    }
    return false;
}

bool parse_number(const std::string& v, double& out) {
    if (v.empty()) return false;
    char* end = nullptr;
    out = std::strtod(v.c_str(), &end);
    return end && *end == '\0';
}

bool parse_integer(const std::string& v, long& out) {
    if (v.empty()) return false;
    char* end = nullptr;
    out = std::strtol(v.c_str(), &end, 10);
    return end && *end == '\0';
}

std::string opt_str(const rd_context* ctx, const char* key, const std::string& dflt) {
    auto it = ctx->options.find(key);
    return it == ctx->options.end() ? dflt : it->second;
}

double opt_number(const rd_context* ctx, const char* key, double dflt) {
    double v = dflt;
    auto it = ctx->options.find(key);
    if (it != ctx->options.end()) parse_number(it->second, v);
    return v;
}

long opt_integer(const rd_context* ctx, const char* key, long dflt) {
    long v = dflt;
    auto it = ctx->options.find(key);
    if (it != ctx->options.end()) parse_integer(it->second, v);
    return v;
}

bool opt_flag(const rd_context* ctx, const char* key, bool dflt) {
    bool v = dflt;
    auto it = ctx->options.find(key);
    if (it != ctx->options.end()) parse_onoff(it->second, v);
    return v;
}

std::optional<double> opt_margin(const rd_context* ctx) {
    std::string v = opt_str(ctx, "margin", "1");
    if (v == "none") return std::nullopt;
    double m = 1.0;
    parse_number(v, m);
    return m;
}

rr::RunRequest base_request(const rd_context* ctx) {
    rr::RunRequest req;
    req.engine.condThreshold = std::exp2(opt_number(ctx, "cond-threshold", 40.0));
    req.engine.absorbUlps = opt_number(ctx, "absorb-ulps", 4.0);
    req.engine.trickDetection = opt_flag(ctx, "trick", true);
    req.drive.cap = static_cast<int>(opt_integer(ctx, "max-reexec", 20));
    req.drive.stateDir = opt_str(ctx, "state-dir", "");
    req.warn.warnUlps = opt_number(ctx, "warn-ulps", 45.0);
    req.warn.zeroUlpDenormal = opt_flag(ctx, "zero-ulp-denormal", false);
    req.exec.timing = opt_flag(ctx, "timing", false);
    return req;
}

// "repo+ro" forces the drive on; plain "repo" takes `roDefault`. Only repo
// re-executes; the suffix on anything else is rejected.
bool parse_backend_label(const std::string& label, bool roDefault, rb::BackendId& id,
                         bool& reexec) {
    std::string base = label;
    bool forced = false;
    if (base.size() > 3 && base.substr(base.size() - 3) == "+ro") {
        base = base.substr(0, base.size() - 3);
        forced = true;
    }
    std::optional<rb::BackendId> parsed = rb::BackendId::parse(base);
    if (!parsed) return false;
    id = *parsed;
    if (id.kind != rb::BackendKind::Repo) {
        if (forced) return false;
        reexec = false;
        return true;
    }
    reexec = forced || roDefault;
    return true;
}

std::vector<std::string> split_csv(const char* s) {
    std::vector<std::string> out;
    if (!s) return out;
    std::string cur;
    for (const char* p = s; *p; ++p) {
        if (*p == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (*p != ' ') {
            cur += *p;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<const rr::CorpusEntry*> select_entries(const char* csv) {
    std::vector<const rr::CorpusEntry*> out;
    std::vector<std::string> names = split_csv(csv);
    if (names.empty()) {
        for (const rr::CorpusEntry& e : rr::bundled_corpus()) out.push_back(&e);
        return out;
    }
    for (const std::string& n : names) {
        const rr::CorpusEntry* e = rr::find_corpus_entry(n);
        if (!e) throw rk::InputError("unknown corpus entry '" + n + "'");
        out.push_back(e);
    }
    return out;
}

rr::CorpusOptions corpus_options(const rd_context* ctx) {
    rr::CorpusOptions opts;
    rr::RunRequest base = base_request(ctx);
    opts.oracleBits = static_cast<int>(opt_integer(ctx, "oracle-bits", rb::kOracleDefaultBits));
    opts.margin = opt_margin(ctx);
    opts.warn = base.warn;
    opts.engine = base.engine;
    opts.cap = base.drive.cap;
    opts.stateDir = base.drive.stateDir;
    opts.threads = static_cast<int>(opt_integer(ctx, "threads", 0));
    opts.exec = base.exec;
    return opts;
}

rd_status finish_report(rd_report** out, rd_report* rep) {
    *out = rep;
    return RD_OK;
}

template <typename Report>
rd_report* wrap_report(Report&& r) {
    auto* rep = new rd_report;
    rep->text = rr::report_text(r);
    rep->json = rr::report_json(r).dump(2) + "\n";
    rep->payload = std::forward<Report>(r);
    return rep;
}

std::string file_stem(const std::string& path) {
    std::filesystem::path p(path);
    std::string stem = p.stem().string();
    return stem.empty() ? "program" : stem;
}

}  // namespace

rd_context* rd_context_new(void) {
    return new rd_context;
}

void rd_context_free(rd_context* ctx) {
    delete ctx;
}

const char* rd_last_error(const rd_context* ctx) {
    return ctx ? ctx->lastError.c_str() : "";
}

rd_status rd_context_set_option(rd_context* ctx, const char* key, const char* value) {
    if (!ctx || !key || !value) return RD_ERR_BAD_ARG;
    ctx->lastError.clear();
    std::string k = key, v = value;
    bool b;
    double d;
    long n;
    bool ok;
    if (k == "ro" || k == "trick" || k == "zero-ulp-denormal" || k == "timing") {
        ok = parse_onoff(v, b);
    } else if (k == "warn-ulps" || k == "cond-threshold" || k == "absorb-ulps") {
        ok = parse_number(v, d);
    } else if (k == "margin") {
        ok = v == "none" || (parse_number(v, d) && d >= 0.0);
    } else if (k == "max-reexec") {
        ok = parse_integer(v, n) && n >= 1;
    } else if (k == "threads") {
        ok = parse_integer(v, n) && n >= 0;
    } else if (k == "oracle-bits") {
        ok = parse_integer(v, n) && n >= rb::kOracleMinBits && n <= rb::kOracleMaxBits;
    } else if (k == "state-dir") {
        ok = true;
    } else {
        return fail(ctx, RD_ERR_BAD_ARG, "unknown option '" + k + "'");
    }
    if (!ok) return fail(ctx, RD_ERR_BAD_ARG, "bad value '" + v + "' for option '" + k + "'");
    ctx->options[k] = v;
    return RD_OK;
}

rd_status rd_program_parse(rd_context* ctx, const char* source, rd_program** out) {
    if (!ctx || !source || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&] {
        auto prog = std::make_unique<rd_program>();
        prog->prog = rk::parse_program(source);
        prog->name = prog->prog.entry;
        *out = prog.release();
        return RD_OK;
    });
}

rd_status rd_program_load(rd_context* ctx, const char* path, rd_program** out) {
    if (!ctx || !path || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        std::ifstream in(path, std::ios::binary);
        if (!in) return fail(ctx, RD_ERR_IO, std::string("cannot open '") + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        auto prog = std::make_unique<rd_program>();
        prog->prog = rk::parse_program(text.str());
        prog->name = file_stem(path);
        *out = prog.release();
        return RD_OK;
    });
}

void rd_program_free(rd_program* prog) {
    delete prog;
}

int rd_program_arity(const rd_program* prog) {
    if (!prog) return -1;
    return static_cast<int>(prog->prog.entry_fn().params.size());
}

rd_status rd_inputs_parse(rd_context* ctx, const rd_program* prog, const char* text,
                          rd_inputset** out) {
    if (!ctx || !prog || !text || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&] {
        auto set = std::make_unique<rd_inputset>();
        set->rows = rk::parse_input_lines(text, prog->prog.entry_fn().params.size());
        *out = set.release();
        return RD_OK;
    });
}

rd_status rd_inputs_load(rd_context* ctx, const rd_program* prog, const char* path,
                         rd_inputset** out) {
    if (!ctx || !prog || !path || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        std::ifstream in(path, std::ios::binary);
        if (!in) return fail(ctx, RD_ERR_IO, std::string("cannot open '") + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        auto set = std::make_unique<rd_inputset>();
        set->rows = rk::parse_input_lines(text.str(), prog->prog.entry_fn().params.size());
        *out = set.release();
        return RD_OK;
    });
}

rd_status rd_inputs_assign(rd_context* ctx, const rd_program* prog, const char* text,
                           rd_inputset** out) {
    if (!ctx || !prog || !text || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&] {
        auto set = std::make_unique<rd_inputset>();
        set->rows.push_back(rk::parse_assignments(text, prog->prog.entry_fn().params));
        *out = set.release();
        return RD_OK;
    });
}

rd_status rd_inputs_generate(rd_context* ctx, const rd_program* prog, const char* genspec,
                             rd_inputset** out) {
    if (!ctx || !prog || !genspec || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&] {
        std::size_t arity = prog->prog.entry_fn().params.size();
        auto set = std::make_unique<rd_inputset>();
        set->rows = rk::generate_inputs(rk::parse_genspec(genspec, arity), arity);
        *out = set.release();
        return RD_OK;
    });
}

void rd_inputs_free(rd_inputset* inputs) {
    delete inputs;
}

long long rd_inputs_count(const rd_inputset* inputs) {
    return inputs ? static_cast<long long>(inputs->rows.size()) : -1;
}

rd_status rd_run(rd_context* ctx, const rd_program* prog, const rd_inputset* inputs,
                 long long index, const char* backend, rd_report** out) {
    if (!ctx || !prog || !inputs || !backend || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        if (index < 0 || index >= rd_inputs_count(inputs))
            return fail(ctx, RD_ERR_BAD_ARG, "input index out of range");
        rb::BackendId id;
        bool reexec = false;
        if (!parse_backend_label(backend, opt_flag(ctx, "ro", true), id, reexec))
            return fail(ctx, RD_ERR_BAD_ARG, std::string("unknown backend '") + backend + "'");
        rr::RunRequest req = base_request(ctx);
        req.backend = id;
        req.reexec = reexec;
        rr::RunReport rep = rr::run_report(prog->prog, prog->name,
                                           inputs->rows[static_cast<std::size_t>(index)], req);
        return finish_report(out, wrap_report(std::move(rep)));
    });
}

rd_status rd_compare(rd_context* ctx, const rd_program* prog, const rd_inputset* inputs,
                     long long index, const char* test_backend, const char* truth_backend,
                     rd_report** out) {
    if (!ctx || !prog || !inputs || !test_backend || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        if (index < 0 || index >= rd_inputs_count(inputs))
            return fail(ctx, RD_ERR_BAD_ARG, "input index out of range");
        bool roDefault = opt_flag(ctx, "ro", true);
        rb::BackendId testId, truthId;
        bool testRe = false, truthRe = false;
        if (!parse_backend_label(test_backend, roDefault, testId, testRe))
            return fail(ctx, RD_ERR_BAD_ARG,
                        std::string("unknown backend '") + test_backend + "'");
        std::string truthLabel =
            (truth_backend && *truth_backend)
                ? truth_backend
                : "oracle:" + std::to_string(opt_integer(ctx, "oracle-bits", 512));
        if (!parse_backend_label(truthLabel, roDefault, truthId, truthRe))
            return fail(ctx, RD_ERR_BAD_ARG, "unknown backend '" + truthLabel + "'");
        rr::RunRequest test = base_request(ctx);
        test.backend = testId;
        test.reexec = testRe;
        rr::RunRequest truth = base_request(ctx);
        truth.backend = truthId;
        truth.reexec = truthRe;
        rr::CompareReport rep =
            rr::compare_backends(prog->prog, prog->name,
                                 inputs->rows[static_cast<std::size_t>(index)], test, truth,
                                 opt_margin(ctx));
        return finish_report(out, wrap_report(std::move(rep)));
    });
}

rd_status rd_corpus_run(rd_context* ctx, const char* entries, const char* backends,
                        rd_report** out) {
    if (!ctx || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        std::vector<const rr::CorpusEntry*> selected = select_entries(entries);
        std::vector<rr::CorpusColumnSpec> columns;
        std::vector<std::string> labels = split_csv(backends);
        if (labels.empty()) {
            columns = rr::default_corpus_columns();
        } else {
            for (const std::string& label : labels) {
                rr::CorpusColumnSpec spec;
                bool reexec = false;
                if (!parse_backend_label(label, false, spec.id, reexec))
                    return fail(ctx, RD_ERR_BAD_ARG, "unknown backend '" + label + "'");
                spec.reexec = reexec;
                spec.label = label;
                columns.push_back(spec);
            }
        }
        rr::CorpusReport rep = rr::run_corpus(selected, columns, corpus_options(ctx));
        return finish_report(out, wrap_report(std::move(rep)));
    });
}

rd_status rd_oracle_check(rd_context* ctx, const char* entries, int bits, rd_report** out) {
    if (!ctx || !out) return RD_ERR_BAD_ARG;
    return guarded(ctx, [&]() -> rd_status {
        int lo = bits > 0 ? bits : static_cast<int>(opt_integer(ctx, "oracle-bits", 512));
        if (lo < rb::kOracleMinBits || 2 * lo > rb::kOracleMaxBits)
            return fail(ctx, RD_ERR_BAD_ARG,
                        "bits must lie in [" + std::to_string(rb::kOracleMinBits) + ", " +
                            std::to_string(rb::kOracleMaxBits / 2) + "]");
        rr::OracleCheckReport rep =
            rr::oracle_check(select_entries(entries), lo, corpus_options(ctx));
        return finish_report(out, wrap_report(std::move(rep)));
    });
}

const char* rd_corpus_entries(void) {
    static const std::string joined = [] {
        std::string s;
        for (const rr::CorpusEntry& e : rr::bundled_corpus()) {
            if (!s.empty()) s += ',';
            s += e.name;
        }
        return s;
    }();
    return joined.c_str();
}

const char* rd_corpus_source(const char* entry) {
    const rr::CorpusEntry* e = entry ? rr::find_corpus_entry(entry) : nullptr;
    return e ? e->source.c_str() : nullptr;
}

const char* rd_corpus_genspec(const char* entry) {
    const rr::CorpusEntry* e = entry ? rr::find_corpus_entry(entry) : nullptr;
    return e ? e->genspec.c_str() : nullptr;
}

const char* rd_report_text(const rd_report* rep) {
    return rep ? rep->text.c_str() : "";
}

const char* rd_report_json(const rd_report* rep) {
    return rep ? rep->json.c_str() : "";
}

namespace {

bool run_stat(const rr::RunReport& r, const std::string& key, double& out) {
    if (key == "warnings") out = static_cast<double>(r.warnings.size());
    else if (key == "executions") out = r.executions;
    else if (key == "capHit") out = r.capHit ? 1.0 : 0.0;
    else if (key == "output") out = r.output;
    else if (key == "opCount") out = static_cast<double>(r.opCount);
    else if (key == "hookSeconds") out = r.hookSeconds;
    else return false;
    return true;
}

bool compare_stat(const rr::CompareReport& r, const std::string& key, double& out) {
    if (key == "fp") out = r.card.falsePositives;
    else if (key == "fn") out = r.card.falseNegatives;
    else if (key == "total") out = r.card.total();
    else if (key == "testWarnings") out = r.testWarnings;
    else if (key == "truthWarnings") out = r.truthWarnings;
    else if (key == "opCount") out = static_cast<double>(r.opCount);
    else return false;
    return true;
}

bool corpus_cell_stat(const rr::CorpusColumn& c, const std::string& stat, double& out) {
    if (stat == "fp") out = static_cast<double>(c.falsePositives);
    else if (stat == "fn") out = static_cast<double>(c.falseNegatives);
    else if (stat == "executions") out = static_cast<double>(c.executions);
    else if (stat == "capHits") out = c.capHits;
    else return false;
    return true;
}

bool corpus_stat(const rr::CorpusReport& r, const std::string& key, double& out) {
    std::size_t s1 = key.find('/');
    if (s1 == std::string::npos) {
        double total = 0.0;
        for (const rr::CorpusEntryReport& e : r.entries)
            for (const rr::CorpusColumn& c : e.columns) {
                double cell = 0.0;
                if (!corpus_cell_stat(c, key, cell)) return false;
                total += cell;
            }
        out = total;
        return true;
    }
    std::size_t s2 = key.find('/', s1 + 1);
    if (s2 == std::string::npos) return false;
    std::string stat = key.substr(0, s1);
    std::string entry = key.substr(s1 + 1, s2 - s1 - 1);
    std::string column = key.substr(s2 + 1);
    for (const rr::CorpusEntryReport& e : r.entries) {
        if (e.entry != entry) continue;
        for (const rr::CorpusColumn& c : e.columns)
            if (c.label == column) return corpus_cell_stat(c, stat, out);
    }
    return false;
}

bool oracle_stat(const rr::OracleCheckReport& r, const std::string& key, double& out) {
    if (key == "identical") out = r.identical() ? 1.0 : 0.0;
    else if (key == "mismatches") out = static_cast<double>(r.mismatches.size());
    else if (key == "inputs") out = static_cast<double>(r.inputsChecked);
    else return false;
    return true;
}

}  // namespace

rd_status rd_report_stat(const rd_report* rep, const char* key, double* out) {
    if (!rep || !key || !out) return RD_ERR_BAD_ARG;
    std::string k = key;
    bool ok = std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, rr::RunReport>) return run_stat(payload, k, *out);
            else if constexpr (std::is_same_v<T, rr::CompareReport>)
                return compare_stat(payload, k, *out);
            else if constexpr (std::is_same_v<T, rr::CorpusReport>)
                return corpus_stat(payload, k, *out);
            else
                return oracle_stat(payload, k, *out);
        },
        rep->payload);
    return ok ? RD_OK : RD_ERR_BAD_ARG;
}

void rd_report_free(rd_report* rep) {
    delete rep;
}

const char* rd_version(void) {
    return "0.1.0";
}
