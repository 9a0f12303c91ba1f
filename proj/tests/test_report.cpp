#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "backend/backend.h"
#include "kernel/inputs.h"
#include "kernel/interp.h"
#include "report/corpus.h"
#include "report/runner.h"
#include "report/score.h"
#include "report/warnings.h"

using namespace resdbg;
using namespace resdbg::report;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();

TraceRecord rec(OpId id, double actual, double residue) {
    TraceRecord r;
    r.id = id;
    r.kind = OpKind::Add;
    r.actual = actual;
    r.residue.value = residue;
    return r;
}

// Residue sized as `ulps` ulps of `actual` (actual = 1.0 keeps this exact).
Trace trace_of_ulps(const std::vector<double>& ulps) {
    Trace t;
    for (size_t i = 0; i < ulps.size(); ++i)
        t.push_back(rec(static_cast<OpId>(i), 1.0, ulps[i] * 0x1p-52));
    return t;
}

RunRequest repo_request(bool reexec) {
    RunRequest req;
    req.backend = *backend::BackendId::parse("repo");
    req.reexec = reexec;
    return req;
}

const CorpusEntry& entry(const std::string& name) {
    const CorpusEntry* e = find_corpus_entry(name);
    REQUIRE(e != nullptr);
    return *e;
}

const CorpusColumn& column(const CorpusEntryReport& e, const std::string& label) {
    for (const CorpusColumn& c : e.columns)
        if (c.label == label) return c;
    REQUIRE_MESSAGE(false, "missing column ", label);
    static CorpusColumn dummy;
    return dummy;
}

}  // namespace

TEST_CASE("ulp_count measures residues against the actual's grid") {
    CHECK(ulp_count(1.0, 0.0) == 0.0);
    CHECK(ulp_count(0.0, 0.0) == 0.0);
    CHECK(ulp_count(1.0, 0x1p-52) == 1.0);
    CHECK(ulp_count(1.0, -0x1p-52) == 1.0);
    CHECK(ulp_count(-1.0, 0x1p-52) == 1.0);
    CHECK(ulp_count(2.0, 0x1p-51) == 1.0);
    CHECK(ulp_count(1.5, 0x1p-50) == 4.0);

    // A nonzero residue on a zero actual is infinitely many ulps away...
    CHECK(ulp_count(0.0, 2.5e-100) == kInf);
    CHECK(ulp_count(0.0, -DBL_TRUE_MIN) == kInf);
    // ...unless the denormal-min alternative is chosen.
    CHECK(ulp_count(0.0, DBL_TRUE_MIN, true) == 1.0);
    CHECK(ulp_count(0.0, 2.5e-100, true) == 2.5e-100 / DBL_TRUE_MIN);

    CHECK(std::isnan(ulp_count(1.0, kNaN)));
    CHECK(std::isnan(ulp_count(0.0, kNaN)));
}

TEST_CASE("warnings fire exactly at the threshold") {
    Trace t;
    t.push_back(rec(0, 1.0, 0x1p-7));                      // exactly 2^45 ulps
    t.push_back(rec(1, 1.0, std::nextafter(0x1p-7, 0.0)));  // one bit short
    t.push_back(rec(2, 0.0, 2.5e-100));                     // inf ulps
    t.push_back(rec(3, 0.0, kNaN));                         // poisoned
    t.push_back(rec(4, 1.0, 0.0));                          // clean
    t.push_back(rec(5, 4.0, 0x1p-5));                       // 2^45 at the next binade

    WarningSet ws = compute_warnings(t);
    REQUIRE(ws.ulps.size() == 6);
    CHECK(ws.ulps[0] == 0x1p45);
    CHECK(ws.ulps[1] < 0x1p45);
    CHECK(ws.ulps[2] == kInf);
    CHECK(std::isnan(ws.ulps[3]));
    CHECK(ws.ulps[4] == 0.0);
    CHECK(ws.ulps[5] == 0x1p45);

    CHECK(ws.ids() == std::set<OpId>{0, 2, 5});
    CHECK(ws.warned(0));
    CHECK_FALSE(ws.warned(1));
    CHECK(ws.warned(2));
    CHECK_FALSE(ws.warned(3));  // poisoned residues never warn
    CHECK_FALSE(ws.warned(4));
    // Warnings come out in ascending op order with the trace values attached.
    REQUIRE(ws.warnings.size() == 3);
    CHECK(ws.warnings[0].opId == 0);
    CHECK(ws.warnings[1].opId == 2);
    CHECK(ws.warnings[2].opId == 5);
    CHECK(ws.warnings[0].residue == 0x1p-7);
    CHECK(ws.warnings[1].ulpCount == kInf);

    // The zero-ulp alternative re-scores zero actuals against DBL_TRUE_MIN.
    WarningConfig alt;
    alt.zeroUlpDenormal = true;
    Trace z;
    z.push_back(rec(0, 0.0, 10 * DBL_TRUE_MIN));  // 10 ulps: quiet under alt
    z.push_back(rec(1, 0.0, 2.5e-100));           // astronomically many: warns anyway
    WarningSet wz = compute_warnings(z, alt);
    CHECK(wz.ids() == std::set<OpId>{1});
    CHECK(compute_warnings(z).ids() == std::set<OpId>{0, 1});

    WarningConfig low;
    low.warnUlps = 3.0;
    Trace s;
    s.push_back(rec(0, 1.0, 8 * 0x1p-52));
    s.push_back(rec(1, 1.0, 7.99 * 0x1p-52));
    CHECK(compute_warnings(s, low).ids() == std::set<OpId>{0});
}

TEST_CASE("score counts the symmetric difference of warning sets") {
    WarningSet a = compute_warnings(trace_of_ulps({0x1p50, 0.0, 0x1p46, 0.0}));
    WarningSet b = compute_warnings(trace_of_ulps({0x1p50, 0x1p47, 0.0, 0.0}));

    ScoreCard same = score(a, a);
    CHECK(same.falsePositives == 0);
    CHECK(same.falseNegatives == 0);
    CHECK(same.perOp.empty());

    ScoreCard card = score(a, b);
    CHECK(card.falsePositives == 1);  // op 2 warned only by the test set
    CHECK(card.falseNegatives == 1);  // op 1 warned only by the truth set
    REQUIRE(card.perOp.size() == 2);
    CHECK(card.perOp[0].opId == 1);
    CHECK_FALSE(card.perOp[0].inTest);
    CHECK(card.perOp[0].inTruth);
    CHECK(card.perOp[1].opId == 2);
    CHECK(card.perOp[1].inTest);
    CHECK_FALSE(card.perOp[1].inTruth);
    CHECK(card.total() == 2);

    WarningSet shorter = compute_warnings(trace_of_ulps({0.0, 0.0}));
    CHECK_THROWS_WITH_AS(score(a, shorter), doctest::Contains("different traces"),
                         ScoreError);

    // Property: FP + FN equals the symmetric difference size, any sets.
    kernel::SplitMix64 rng{0xd1ff5};
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 1 + rng.next() % 30;
        std::vector<double> ua(n), ub(n);
        for (size_t i = 0; i < n; ++i) {
            ua[i] = (rng.next() % 3) * 0x1p44;  // 0, 2^44 (quiet), 2^45 (warns)
            ub[i] = (rng.next() % 3) * 0x1p44;
        }
        WarningSet wa = compute_warnings(trace_of_ulps(ua));
        WarningSet wb = compute_warnings(trace_of_ulps(ub));
        std::set<OpId> ia = wa.ids(), ib = wb.ids(), sym;
        std::set_symmetric_difference(ia.begin(), ia.end(), ib.begin(), ib.end(),
                                      std::inserter(sym, sym.begin()));
        CHECK(score(wa, wb).total() == static_cast<int>(sym.size()));
    }
}

TEST_CASE("the margin band suppresses near-threshold disagreements") {
    // Band with margin 2 around 2^45: oracle ulp counts in [2^43, 2^47].
    Trace test;
    test.push_back(rec(0, 1.0, 0x1p-7));  // warns
    test.push_back(rec(1, 1.0, 0x1p-7));  // warns
    test.push_back(rec(2, 1.0, 0.0));
    test.push_back(rec(3, 1.0, 0.0));
    test.push_back(rec(4, 1.0, 0x1p-7));  // warns
    test.push_back(rec(5, 1.0, 0x1p-7));  // warns

    Trace truth;
    truth.push_back(rec(0, 1.0, 0x1p-9));                        // 2^43: on the low edge
    truth.push_back(rec(1, 1.0, std::nextafter(0x1p-9, 0.0)));  // just below the band
    truth.push_back(rec(2, 1.0, 0x1p-5));                        // 2^47: on the high edge
    truth.push_back(rec(3, 1.0, std::nextafter(0x1p-5, 1.0)));  // just above the band
    truth.push_back(rec(4, 1.0, kNaN));                          // poisoned truth
    truth.push_back(rec(5, 1.0, 0x1p-7));                        // agrees

    WarningSet wt = compute_warnings(test);
    WarningSet wu = compute_warnings(truth);

    ScoreCard raw = score(wt, wu);
    CHECK(raw.falsePositives == 3);  // ops 0, 1, 4
    CHECK(raw.falseNegatives == 2);  // ops 2, 3

    ScoreCard banded = score(wt, wu, 2.0);
    CHECK(banded.falsePositives == 2);  // op 0 excluded; 1 and 4 remain
    CHECK(banded.falseNegatives == 1);  // op 2 excluded; 3 remains
    REQUIRE(banded.perOp.size() == 5);
    CHECK(banded.perOp[0].excluded);
    CHECK_FALSE(banded.perOp[1].excluded);
    CHECK(banded.perOp[2].excluded);
    CHECK_FALSE(banded.perOp[3].excluded);
    CHECK_FALSE(banded.perOp[4].excluded);  // NaN truth is never "near" the band
}

TEST_CASE("diff-roots scores two false negatives without re-execution") {
    const CorpusEntry& e = entry("diff-roots");
    kernel::Program prog = kernel::parse_program(e.source);

    WarningSet truth = oracle_truth(prog, {1e99}, 512);
    CHECK(truth.ids() == std::set<OpId>{3, 4});

    RunResult off = run_backend(prog, {1e99}, repo_request(false));
    CHECK(off.executions == 1);
    CHECK(off.warnings.warnings.empty());
    ScoreCard cardOff = score(off.warnings, truth);
    CHECK(cardOff.falsePositives == 0);
    CHECK(cardOff.falseNegatives == 2);
    REQUIRE(cardOff.perOp.size() == 2);
    CHECK(cardOff.perOp[0].opId == 3);
    CHECK(cardOff.perOp[1].opId == 4);

    RunResult on = run_backend(prog, {1e99}, repo_request(true));
    CHECK(on.executions == 3);
    CHECK_FALSE(on.capHit);
    CHECK(on.warnings.ids() == std::set<OpId>{3, 4});
    ScoreCard cardOn = score(on.warnings, truth);
    CHECK(cardOn.falsePositives == 0);
    CHECK(cardOn.falseNegatives == 0);

    // Same comparison through the report layer.
    RunRequest oracleReq;
    oracleReq.backend = *backend::BackendId::parse("oracle:512");
    CompareReport cmp =
        compare_backends(prog, "diff-roots", {1e99}, repo_request(false), oracleReq, {});
    CHECK(cmp.testBackend == "repo");
    CHECK(cmp.truthBackend == "oracle:512");
    CHECK(cmp.card.falseNegatives == 2);
    CHECK(cmp.truthWarnings == 2);
    CHECK(cmp.testWarnings == 0);
}

TEST_CASE("every backend scores zero against itself") {
    for (const char* name : {"oracle:512", "repo", "eftsan-fixed", "dd"}) {
        RunRequest req;
        req.backend = *backend::BackendId::parse(name);
        req.reexec = false;
        for (const char* en : {"diff-roots", "poly-expand", "cast-chain"}) {
            const CorpusEntry& e = entry(en);
            kernel::Program prog = kernel::parse_program(e.source);
            std::vector<std::vector<double>> ins =
                kernel::generate_inputs(e.input_spec(), e.arity);
            RunResult a = run_backend(prog, ins[0], req);
            RunResult b = run_backend(prog, ins[0], req);
            ScoreCard card = score(a.warnings, b.warnings);
            CHECK(card.falsePositives == 0);
            CHECK(card.falseNegatives == 0);
        }
    }
}

TEST_CASE("cast-chain keeps the narrowing residue under the threshold") {
    const CorpusEntry& e = entry("cast-chain");
    kernel::Program prog = kernel::parse_program(e.source);
    double x = 1.0 + 0x1p-24;

    RunResult repo = run_backend(prog, {x}, repo_request(false));
    const Trace& t = repo.exec.trace;
    REQUIRE(t.size() == 6);
    CHECK(t[0].residue.value == 0x1p-24);   // the narrowing cast itself
    CHECK(t[1].residue.value == 0x1p-24);   // carried through the widening
    CHECK_FALSE(repo.warnings.warned(0));   // 2^28 ulps of 1.0: quiet
    CHECK_FALSE(repo.warnings.warned(1));

    // d, h and d+h reconstruct the dropped low part, so they sit far from
    // the ideal values on purpose and both sides agree on warning there.
    WarningSet truth = oracle_truth(prog, {x}, 512);
    CHECK(repo.warnings.warned(2));
    CHECK(truth.warned(2));
    CHECK_FALSE(repo.warnings.warned(5));  // the reassembled result is fine
    CHECK_FALSE(truth.warned(5));
    ScoreCard card = score(repo.warnings, truth);
    CHECK(card.falsePositives == 0);
    CHECK(card.falseNegatives == 0);
}

TEST_CASE("bundled corpus entries parse and match their shipped files") {
    const std::vector<CorpusEntry>& all = bundled_corpus();
    REQUIRE(all.size() == 6);
    for (const char* name : {"diff-roots", "cancel-mul", "poly-expand", "harmonic-acc",
                             "sin-reduce", "cast-chain"})
        CHECK(find_corpus_entry(name) != nullptr);
    CHECK(find_corpus_entry("no-such-entry") == nullptr);

    for (const CorpusEntry& e : all) {
        CAPTURE(e.name);
        kernel::Program prog = kernel::parse_program(e.source);
        CHECK(prog.entry_fn().params.size() == e.arity);
        kernel::InputSpec spec = e.input_spec();
        std::vector<std::vector<double>> ins = kernel::generate_inputs(spec, e.arity);
        CHECK(ins.size() == 100);
        CHECK_FALSE(e.notes.empty());

        // The embedded copy and the file on disk are interchangeable.
        std::ifstream f("corpus/" + e.fileName, std::ios::binary);
        REQUIRE_MESSAGE(f.good(), "corpus/", e.fileName, " missing (run from repo root)");
        std::ostringstream buf;
        buf << f.rdbuf();
        CHECK(buf.str() == e.source);
    }
}

TEST_CASE("corpus sweep upholds the backend ordering invariants") {
    std::vector<const CorpusEntry*> entries;
    for (const CorpusEntry& e : bundled_corpus()) entries.push_back(&e);

    CorpusOptions opts;  // oracle 512, threads = hardware, cap 20
    CorpusReport rep = run_corpus(entries, default_corpus_columns(), opts);
    REQUIRE(rep.entries.size() == 6);

    long long repoFalse = 0, fixedFalse = 0, buggyFalse = 0;
    for (const CorpusEntryReport& e : rep.entries) {
        CAPTURE(e.entry);
        CHECK(e.inputCount == 100);
        CHECK(e.opCount > 0);

        const CorpusColumn& ro = column(e, "repo+ro");
        const CorpusColumn& repo = column(e, "repo");
        const CorpusColumn& fixed = column(e, "eftsan-fixed");
        const CorpusColumn& buggy = column(e, "eftsan-buggy");

        long long roTotal = ro.falsePositives + ro.falseNegatives;
        long long repoTotal = repo.falsePositives + repo.falseNegatives;
        long long fixedTotal = fixed.falsePositives + fixed.falseNegatives;
        long long buggyTotal = buggy.falsePositives + buggy.falseNegatives;
        repoFalse += repoTotal;
        fixedFalse += fixedTotal;
        buggyFalse += buggyTotal;

        // Wherever the first-order tracker reports falsely, the baseline
        // with the same op coverage but cruder residues does too.
        if (repoTotal > 0) CHECK(fixedTotal > 0);

        // Re-execution only ever removes false reports.
        CHECK(roTotal <= repoTotal);

        // Single-shot columns run once per input; the driven column stays
        // within its execution budget.
        CHECK(repo.executions == 100);
        CHECK(fixed.executions == 100);
        CHECK(buggy.executions == 100);
        CHECK(ro.capHits == 0);
        for (const InputScore& s : ro.perInput) {
            CHECK(s.executions <= 20);
            CHECK_FALSE(s.capHit);
        }
    }
    CHECK(repoFalse <= fixedFalse);
    CHECK(fixedFalse <= buggyFalse);

    // The engineered higher-order and trick entries separate repo from the
    // fixed baseline on their own.
    auto entryReport = [&](const char* name) -> const CorpusEntryReport& {
        for (const CorpusEntryReport& e : rep.entries)
            if (e.entry == name) return e;
        REQUIRE(false);
        return rep.entries[0];
    };
    {
        const CorpusEntryReport& cm = entryReport("cancel-mul");
        const CorpusColumn& repo = column(cm, "repo");
        const CorpusColumn& fixed = column(cm, "eftsan-fixed");
        CHECK(repo.falsePositives + repo.falseNegatives <
              fixed.falsePositives + fixed.falseNegatives);
        // No absorption to chase: the driven column does not re-execute.
        CHECK(column(cm, "repo+ro").executions == 100);
    }
    {
        const CorpusEntryReport& sr = entryReport("sin-reduce");
        const CorpusColumn& repo = column(sr, "repo");
        const CorpusColumn& fixed = column(sr, "eftsan-fixed");
        CHECK(repo.falsePositives + repo.falseNegatives <
              fixed.falsePositives + fixed.falseNegatives);
    }
    {
        // Re-execution clears diff-roots and cancel-mul completely.
        for (const char* name : {"diff-roots", "cancel-mul"}) {
            const CorpusColumn& ro = column(entryReport(name), "repo+ro");
            CHECK(ro.falsePositives == 0);
            CHECK(ro.falseNegatives == 0);
        }
        // Inputs large enough to absorb the +1 drive the full three-run
        // cycle; the rest are accurate on the first pass.
        const CorpusColumn& ro = column(entryReport("diff-roots"), "repo+ro");
        int threes = 0;
        for (const InputScore& s : ro.perInput) {
            CHECK((s.executions == 1 || s.executions == 3));
            if (s.executions == 3) ++threes;
        }
        CHECK(threes > 50);
    }
    {
        const CorpusEntryReport& ha = entryReport("harmonic-acc");
        for (const CorpusColumn& c : ha.columns) {
            CHECK(c.falsePositives == 0);
            CHECK(c.falseNegatives == 0);
        }
    }
}

TEST_CASE("oracle warnings are stable once precision covers the range") {
    std::vector<const CorpusEntry*> one = {&entry("diff-roots")};
    CorpusOptions opts;

    OracleCheckReport ok = oracle_check(one, 512, opts);
    CHECK(ok.bitsLo == 512);
    CHECK(ok.bitsHi == 1024);
    CHECK(ok.inputsChecked == 100);
    CHECK(ok.identical());

    // At 128 bits the shadow itself absorbs the +1 for the larger inputs,
    // so doubling the precision genuinely changes the verdicts: the check
    // is not a tautology.
    OracleCheckReport low = oracle_check(one, 128, opts);
    CHECK_FALSE(low.identical());
    for (const auto& m : low.mismatches) CHECK(m.differingOps > 0);
}

TEST_CASE("reports are deterministic and carry the pinned fields") {
    const CorpusEntry& e = entry("diff-roots");
    kernel::Program prog = kernel::parse_program(e.source);

    RunReport r1 = run_report(prog, "diff-roots", {1e99}, repo_request(true));
    RunReport r2 = run_report(prog, "diff-roots", {1e99}, repo_request(true));
    CHECK(report_json(r1).dump(2) == report_json(r2).dump(2));
    CHECK(report_text(r1) == report_text(r2));

    CHECK(r1.program == "diff-roots");
    CHECK(r1.backend == "repo");
    CHECK(r1.reexec);
    CHECK(r1.inputKey == "66EC2955FC36B64A");
    CHECK(r1.opCount == 5);
    CHECK(r1.executions == 3);
    CHECK(r1.hookSeconds < 0.0);  // timing not requested
    REQUIRE(r1.warnings.size() == 2);
    CHECK(r1.warnings[0].opId == 3);
    CHECK(r1.warnings[1].opId == 4);

    nlohmann::ordered_json j = report_json(r1);
    CHECK(j["report"] == "run");
    CHECK(j["backend"] == "repo");
    CHECK(j["reexec"] == true);
    CHECK(j["inputKey"] == "66EC2955FC36B64A");
    CHECK(j["executions"] == 3);
    CHECK(j["capHit"] == false);
    CHECK(j["inputs"][0]["bits"] == "547D42AEA2879F2E");  // 1e99
    CHECK(j["warnings"].size() == 2);
    CHECK(j["warnings"][0]["op"] == 3);
    CHECK(j["warnings"][0]["residue"] == "1.5811388300841898e-50");
    CHECK(j["warnings"][0]["residueBits"] == "3597A9B873C4B28B");
    CHECK(j["warnings"][1]["residueBits"] == "2B417F7D4ED8C33F");
    CHECK(j.contains("hookSeconds") == false);

    std::string text = report_text(r1);
    CHECK(text.find("run report") != std::string::npos);
    CHECK(text.find("executions: 3") != std::string::npos);
    CHECK(text.find("warnings:   2") != std::string::npos);
    CHECK(text.find("repo+ro") != std::string::npos);

    // Timing, when asked for, lands in both renderings.
    RunRequest timed = repo_request(true);
    timed.exec.timing = true;
    RunReport rt = run_report(prog, "diff-roots", {1e99}, timed);
    CHECK(rt.hookSeconds >= 0.0);
    CHECK(report_json(rt).contains("hookSeconds"));
    CHECK(report_text(rt).find("hook time") != std::string::npos);

    // Compare rendering.
    RunRequest oracleReq;
    oracleReq.backend = *backend::BackendId::parse("oracle:512");
    CompareReport cmp =
        compare_backends(prog, "diff-roots", {1e99}, repo_request(false), oracleReq, 1.0);
    nlohmann::ordered_json cj = report_json(cmp);
    CHECK(cj["report"] == "compare");
    CHECK(cj["test"] == "repo");
    CHECK(cj["truth"] == "oracle:512");
    CHECK(cj["falseNegatives"] == 2);
    CHECK(cj["margin"] == 1.0);
    CHECK(cj["diffs"].size() == 2);
    CHECK(cj["diffs"][0]["inTruth"] == true);
    std::string ctext = report_text(cmp);
    CHECK(ctext.find("false negatives: 2") != std::string::npos);

    CompareReport cmp2 =
        compare_backends(prog, "diff-roots", {1e99}, repo_request(false), oracleReq, {});
    CHECK(report_json(cmp2)["margin"].is_null());
}

TEST_CASE("default corpus columns cover the standard comparison") {
    std::vector<CorpusColumnSpec> cols = default_corpus_columns();
    REQUIRE(cols.size() == 5);
    CHECK(cols[0].label == "repo+ro");
    CHECK(cols[0].reexec);
    CHECK(cols[1].label == "repo");
    CHECK_FALSE(cols[1].reexec);
    CHECK(cols[2].label == "eftsan-fixed");
    CHECK(cols[3].label == "eftsan-buggy");
    CHECK(cols[4].label == "dd");
}

TEST_CASE("corpus and oracle-check reports render with stable fields") {
    std::vector<const CorpusEntry*> one = {&entry("cast-chain")};
    CorpusOptions opts;
    opts.margin = 1.0;
    CorpusReport rep = run_corpus(one, default_corpus_columns(), opts);
    nlohmann::ordered_json j = report_json(rep);
    CHECK(j["report"] == "corpus");
    CHECK(j["oracleBits"] == 512);
    CHECK(j["margin"] == 1.0);
    REQUIRE(j["entries"].size() == 1);
    CHECK(j["entries"][0]["entry"] == "cast-chain");
    CHECK(j["entries"][0]["inputs"] == 100);
    REQUIRE(j["entries"][0]["columns"].size() == 5);
    CHECK(j["entries"][0]["columns"][0]["label"] == "repo+ro");
    CHECK(j["entries"][0]["columns"][0]["perInput"].size() == 100);
    std::string text = report_text(rep);
    CHECK(text.find("corpus report") != std::string::npos);
    CHECK(text.find("cast-chain") != std::string::npos);
    CHECK(text.find("eftsan-buggy") != std::string::npos);

    OracleCheckReport chk = oracle_check(one, 256, opts);
    nlohmann::ordered_json cj = report_json(chk);
    CHECK(cj["report"] == "oracle-check");
    CHECK(cj["bitsLo"] == 256);
    CHECK(cj["bitsHi"] == 512);
    CHECK(cj["identical"] == chk.identical());
    std::string ctext = report_text(chk);
    CHECK(ctext.find("oracle stability: 256 vs 512 bits") != std::string::npos);
}
