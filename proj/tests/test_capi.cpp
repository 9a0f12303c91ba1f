#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "resdbg/resdbg.h"

namespace {

// Everything in this file goes through the shared library's C surface; the
// C++ here is only test scaffolding.

struct Ctx {
    rd_context* p;
    Ctx() : p(rd_context_new()) { REQUIRE(p != nullptr); }
    ~Ctx() { rd_context_free(p); }
    operator rd_context*() const { return p; }
};

struct Cleanup {
    rd_program* prog = nullptr;
    rd_inputset* ins = nullptr;
    rd_report* rep = nullptr;
    ~Cleanup() {
        rd_report_free(rep);
        rd_inputs_free(ins);
        rd_program_free(prog);
    }
};

double stat(const rd_report* rep, const char* key) {
    double v = -12345.0;
    REQUIRE(rd_report_stat(rep, key, &v) == RD_OK);
    return v;
}

std::string temp_dir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "resdbg-capi-XXXXXX").string();
    char* d = mkdtemp(tmpl.data());
    REQUIRE(d != nullptr);
    return d;
}

}  // namespace

TEST_CASE("context lifecycle and error text") {
    CHECK(std::strcmp(rd_version(), "0.1.0") == 0);
    CHECK(std::string(rd_last_error(nullptr)).empty());

    Ctx ctx;
    CHECK(std::string(rd_last_error(ctx)).empty());

    CHECK(rd_context_set_option(ctx, "no-such-option", "1") == RD_ERR_BAD_ARG);
    CHECK(std::string(rd_last_error(ctx)).find("unknown option") != std::string::npos);

    // The next successful call clears the sticky message.
    CHECK(rd_context_set_option(ctx, "warn-ulps", "40") == RD_OK);
    CHECK(std::string(rd_last_error(ctx)).empty());
}

TEST_CASE("option validation") {
    Ctx ctx;
    CHECK(rd_context_set_option(ctx, "ro", "off") == RD_OK);
    CHECK(rd_context_set_option(ctx, "ro", "on") == RD_OK);
    CHECK(rd_context_set_option(ctx, "trick", "off") == RD_OK);
    CHECK(rd_context_set_option(ctx, "zero-ulp-denormal", "on") == RD_OK);
    CHECK(rd_context_set_option(ctx, "timing", "on") == RD_OK);
    CHECK(rd_context_set_option(ctx, "max-reexec", "5") == RD_OK);
    CHECK(rd_context_set_option(ctx, "warn-ulps", "38.5") == RD_OK);
    CHECK(rd_context_set_option(ctx, "cond-threshold", "41") == RD_OK);
    CHECK(rd_context_set_option(ctx, "absorb-ulps", "2") == RD_OK);
    CHECK(rd_context_set_option(ctx, "oracle-bits", "256") == RD_OK);
    CHECK(rd_context_set_option(ctx, "margin", "none") == RD_OK);
    CHECK(rd_context_set_option(ctx, "margin", "1.5") == RD_OK);
    CHECK(rd_context_set_option(ctx, "threads", "2") == RD_OK);
    CHECK(rd_context_set_option(ctx, "state-dir", "/tmp/anything") == RD_OK);

    for (auto [key, value] : {std::pair<const char*, const char*>{"ro", "maybe"},
                              {"max-reexec", "0"},
                              {"max-reexec", "two"},
                              {"threads", "-1"},
                              {"oracle-bits", "64"},
                              {"oracle-bits", "8192"},
                              {"margin", "-1"},
                              {"warn-ulps", "abc"}}) {
        CAPTURE(key);
        CHECK(rd_context_set_option(ctx, key, value) == RD_ERR_BAD_ARG);
        CHECK(std::string(rd_last_error(ctx)).find("bad value") != std::string::npos);
    }

    CHECK(rd_context_set_option(nullptr, "ro", "on") == RD_ERR_BAD_ARG);
    CHECK(rd_context_set_option(ctx, nullptr, "on") == RD_ERR_BAD_ARG);
    CHECK(rd_context_set_option(ctx, "ro", nullptr) == RD_ERR_BAD_ARG);
}

TEST_CASE("program parsing separates syntax from validation") {
    Ctx ctx;
    Cleanup c;

    CHECK(rd_program_parse(ctx, "(define (f x w) (* (+ x 1.0) w))", &c.prog) == RD_OK);
    CHECK(rd_program_arity(c.prog) == 2);
    CHECK(rd_program_arity(nullptr) == -1);

    rd_program* bad = nullptr;
    CHECK(rd_program_parse(ctx, "(define (f x", &bad) == RD_ERR_PARSE);
    CHECK_FALSE(std::string(rd_last_error(ctx)).empty());
    CHECK(bad == nullptr);

    CHECK(rd_program_parse(ctx, "(define (f x) (+ x y))", &bad) == RD_ERR_VALIDATE);
    CHECK_FALSE(std::string(rd_last_error(ctx)).empty());

    CHECK(rd_program_parse(ctx, nullptr, &bad) == RD_ERR_BAD_ARG);
    CHECK(rd_program_parse(nullptr, "(define (f x) x)", &bad) == RD_ERR_BAD_ARG);
}

TEST_CASE("program files load by path and report a stem name") {
    Ctx ctx;
    Cleanup c;
    std::string dir = temp_dir();
    std::string path = dir + "/roundtrip.fpk";
    {
        std::ofstream f(path);
        f << "(define (main x) (* x x))\n";
    }

    CHECK(rd_program_load(ctx, path.c_str(), &c.prog) == RD_OK);
    CHECK(rd_program_arity(c.prog) == 1);

    CHECK(rd_inputs_assign(ctx, c.prog, "x=3.0", &c.ins) == RD_OK);
    CHECK(rd_run(ctx, c.prog, c.ins, 0, "repo", &c.rep) == RD_OK);
    CHECK(stat(c.rep, "output") == 9.0);
    CHECK(std::string(rd_report_json(c.rep)).find("\"program\": \"roundtrip\"") !=
          std::string::npos);

    rd_program* missing = nullptr;
    CHECK(rd_program_load(ctx, (dir + "/absent.fpk").c_str(), &missing) == RD_ERR_IO);
    CHECK(std::string(rd_last_error(ctx)).find("cannot open") != std::string::npos);

    std::filesystem::remove_all(dir);
}

TEST_CASE("input sets: assignment, positional text, hex tokens, generation") {
    Ctx ctx;
    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(ctx, rd_corpus_source("diff-roots"), &prog) == RD_OK);
    CHECK(rd_program_arity(prog) == 1);

    rd_inputset* one = nullptr;
    CHECK(rd_inputs_assign(ctx, prog, "x=1e99", &one) == RD_OK);
    CHECK(rd_inputs_count(one) == 1);

    rd_inputset* pos = nullptr;
    CHECK(rd_inputs_assign(ctx, prog, "1e99", &pos) == RD_OK);
    CHECK(rd_inputs_count(pos) == 1);

    rd_inputset* bad = nullptr;
    CHECK(rd_inputs_assign(ctx, prog, "y=1.0", &bad) == RD_ERR_BAD_ARG);
    CHECK(rd_inputs_assign(ctx, prog, "1.0 2.0", &bad) == RD_ERR_BAD_ARG);
    CHECK(bad == nullptr);

    // Multi-line positional text with comments; a 16-hex-digit token is a
    // raw bit pattern (547D42AEA2879F2E == 1e99, pinned by the input key).
    rd_inputset* lines = nullptr;
    CHECK(rd_inputs_parse(ctx, prog,
                          "# header\n"
                          "547D42AEA2879F2E\n"
                          "\n"
                          "2.5  # trailing comment\n",
                          &lines) == RD_OK);
    CHECK(rd_inputs_count(lines) == 2);
    rd_report* rep = nullptr;
    CHECK(rd_run(ctx, prog, lines, 0, "repo", &rep) == RD_OK);
    CHECK(std::string(rd_report_json(rep)).find("66EC2955FC36B64A") != std::string::npos);
    rd_report_free(rep);

    rd_inputset* gen = nullptr;
    CHECK(rd_inputs_generate(ctx, prog, "seed=7,count=12,e=[-3,8],sign=mixed", &gen) == RD_OK);
    CHECK(rd_inputs_count(gen) == 12);
    rd_inputset* genBad = nullptr;
    CHECK(rd_inputs_generate(ctx, prog, "seed=7,count=", &genBad) == RD_ERR_BAD_ARG);

    std::string dir = temp_dir();
    {
        std::ofstream f(dir + "/inputs.txt");
        f << "1e10\n2e10\n3e10\n";
    }
    rd_inputset* fromFile = nullptr;
    CHECK(rd_inputs_load(ctx, prog, (dir + "/inputs.txt").c_str(), &fromFile) == RD_OK);
    CHECK(rd_inputs_count(fromFile) == 3);
    rd_inputset* noFile = nullptr;
    CHECK(rd_inputs_load(ctx, prog, (dir + "/nope.txt").c_str(), &noFile) == RD_ERR_IO);
    std::filesystem::remove_all(dir);

    CHECK(rd_inputs_count(nullptr) == -1);

    rd_inputs_free(fromFile);
    rd_inputs_free(gen);
    rd_inputs_free(lines);
    rd_inputs_free(pos);
    rd_inputs_free(one);
    rd_program_free(prog);
}

TEST_CASE("rd_run wires backends, the ro option and the +ro suffix") {
    Ctx ctx;
    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(ctx, rd_corpus_source("diff-roots"), &prog) == RD_OK);
    rd_inputset* ins = nullptr;
    REQUIRE(rd_inputs_assign(ctx, prog, "x=1e99", &ins) == RD_OK);

    rd_report* rep = nullptr;
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo", &rep) == RD_OK);  // ro defaults on
    CHECK(stat(rep, "executions") == 3.0);
    CHECK(stat(rep, "warnings") == 2.0);
    CHECK(stat(rep, "capHit") == 0.0);
    CHECK(stat(rep, "opCount") == 5.0);
    CHECK(stat(rep, "output") == 0.0);
    CHECK(std::string(rd_report_text(rep)).find("run report") != std::string::npos);
    CHECK(std::string(rd_report_json(rep)).find("\"executions\": 3") != std::string::npos);
    rd_report_free(rep);
    rep = nullptr;

    REQUIRE(rd_context_set_option(ctx, "ro", "off") == RD_OK);
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo", &rep) == RD_OK);
    CHECK(stat(rep, "executions") == 1.0);
    CHECK(stat(rep, "warnings") == 0.0);
    rd_report_free(rep);
    rep = nullptr;

    // The suffix overrides the option.
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo+ro", &rep) == RD_OK);
    CHECK(stat(rep, "executions") == 3.0);
    CHECK(stat(rep, "warnings") == 2.0);
    rd_report_free(rep);
    rep = nullptr;

    REQUIRE(rd_run(ctx, prog, ins, 0, "oracle:512", &rep) == RD_OK);
    CHECK(stat(rep, "executions") == 1.0);
    CHECK(stat(rep, "warnings") == 2.0);
    rd_report_free(rep);
    rep = nullptr;

    REQUIRE(rd_run(ctx, prog, ins, 0, "dd", &rep) == RD_OK);
    CHECK(stat(rep, "warnings") == 0.0);  // dd's shadow absorbs the gap too
    rd_report_free(rep);
    rep = nullptr;

    CHECK(rd_run(ctx, prog, ins, 0, "quantum", &rep) == RD_ERR_BAD_ARG);
    CHECK(std::string(rd_last_error(ctx)).find("unknown backend") != std::string::npos);
    CHECK(rd_run(ctx, prog, ins, 0, "dd+ro", &rep) == RD_ERR_BAD_ARG);
    CHECK(rd_run(ctx, prog, ins, 5, "repo", &rep) == RD_ERR_BAD_ARG);
    CHECK(std::string(rd_last_error(ctx)).find("out of range") != std::string::npos);
    CHECK(rd_run(ctx, prog, ins, 0, nullptr, &rep) == RD_ERR_BAD_ARG);
    CHECK(rep == nullptr);

    // Timing shows up as a stat only when requested.
    double v = 0.0;
    REQUIRE(rd_context_set_option(ctx, "timing", "on") == RD_OK);
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo", &rep) == RD_OK);
    CHECK(rd_report_stat(rep, "hookSeconds", &v) == RD_OK);
    CHECK(v >= 0.0);
    rd_report_free(rep);

    rd_inputs_free(ins);
    rd_program_free(prog);
}

TEST_CASE("rd_compare scores against the default oracle truth") {
    Ctx ctx;
    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(ctx, rd_corpus_source("diff-roots"), &prog) == RD_OK);
    rd_inputset* ins = nullptr;
    REQUIRE(rd_inputs_assign(ctx, prog, "x=1e99", &ins) == RD_OK);
    REQUIRE(rd_context_set_option(ctx, "ro", "off") == RD_OK);

    rd_report* rep = nullptr;
    REQUIRE(rd_compare(ctx, prog, ins, 0, "repo", nullptr, &rep) == RD_OK);
    CHECK(stat(rep, "fp") == 0.0);
    CHECK(stat(rep, "fn") == 2.0);
    CHECK(stat(rep, "total") == 2.0);
    CHECK(stat(rep, "testWarnings") == 0.0);
    CHECK(stat(rep, "truthWarnings") == 2.0);
    CHECK(std::string(rd_report_json(rep)).find("\"truth\": \"oracle:512\"") !=
          std::string::npos);
    rd_report_free(rep);
    rep = nullptr;

    REQUIRE(rd_compare(ctx, prog, ins, 0, "repo+ro", "", &rep) == RD_OK);
    CHECK(stat(rep, "fn") == 0.0);
    CHECK(stat(rep, "total") == 0.0);
    rd_report_free(rep);
    rep = nullptr;

    CHECK(rd_compare(ctx, prog, ins, 0, "repo", "bogus", &rep) == RD_ERR_BAD_ARG);
    CHECK(rd_compare(ctx, prog, ins, 9, "repo", nullptr, &rep) == RD_ERR_BAD_ARG);

    rd_inputs_free(ins);
    rd_program_free(prog);
}

TEST_CASE("corpus access and sweeps through the C surface") {
    CHECK(std::string(rd_corpus_entries()) ==
          "diff-roots,cancel-mul,poly-expand,harmonic-acc,sin-reduce,cast-chain");
    CHECK(rd_corpus_source("nope") == nullptr);
    CHECK(rd_corpus_genspec("nope") == nullptr);
    CHECK(std::string(rd_corpus_source("diff-roots")).find("roots-gap") != std::string::npos);
    CHECK(std::string(rd_corpus_genspec("diff-roots")) ==
          "seed=101,count=100,e=[54,250],sign=pos");

    Ctx ctx;
    rd_report* rep = nullptr;
    REQUIRE(rd_corpus_run(ctx, "cast-chain", "repo,eftsan-fixed", &rep) == RD_OK);
    CHECK(stat(rep, "executions") == 200.0);  // 100 inputs x 2 single-shot columns
    CHECK(stat(rep, "capHits") == 0.0);
    CHECK(stat(rep, "executions/cast-chain/repo") == 100.0);
    double cell = 0.0;
    CHECK(rd_report_stat(rep, "fp/cast-chain/unknown-col", &cell) == RD_ERR_BAD_ARG);
    CHECK(rd_report_stat(rep, "fp/cast-chain", &cell) == RD_ERR_BAD_ARG);
    CHECK(std::string(rd_report_text(rep)).find("cast-chain") != std::string::npos);
    rd_report_free(rep);
    rep = nullptr;

    CHECK(rd_corpus_run(ctx, "no-such-entry", nullptr, &rep) == RD_ERR_BAD_ARG);
    CHECK(std::string(rd_last_error(ctx)).find("unknown corpus entry") != std::string::npos);
    CHECK(rd_corpus_run(ctx, "cast-chain", "warp-drive", &rep) == RD_ERR_BAD_ARG);

    REQUIRE(rd_oracle_check(ctx, "cast-chain", 256, &rep) == RD_OK);
    CHECK(stat(rep, "identical") == 1.0);
    CHECK(stat(rep, "inputs") == 100.0);
    CHECK(stat(rep, "mismatches") == 0.0);
    rd_report_free(rep);
    rep = nullptr;

    CHECK(rd_oracle_check(ctx, "cast-chain", 100, &rep) == RD_ERR_BAD_ARG);
    CHECK(rd_oracle_check(ctx, "cast-chain", 3000, &rep) == RD_ERR_BAD_ARG);
}

TEST_CASE("report stats reject keys from the wrong report kind") {
    Ctx ctx;
    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(ctx, "(define (f x) (+ x 1.0))", &prog) == RD_OK);
    rd_inputset* ins = nullptr;
    REQUIRE(rd_inputs_assign(ctx, prog, "x=1.0", &ins) == RD_OK);
    rd_report* rep = nullptr;
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo", &rep) == RD_OK);

    double v = 0.0;
    CHECK(rd_report_stat(rep, "fp", &v) == RD_ERR_BAD_ARG);        // compare-only key
    CHECK(rd_report_stat(rep, "warnings", &v) == RD_OK);
    CHECK(rd_report_stat(rep, "warnings", nullptr) == RD_ERR_BAD_ARG);
    CHECK(rd_report_stat(nullptr, "warnings", &v) == RD_ERR_BAD_ARG);
    CHECK(rd_report_stat(rep, nullptr, &v) == RD_ERR_BAD_ARG);

    CHECK(std::string(rd_report_text(nullptr)).empty());
    CHECK(std::string(rd_report_json(nullptr)).empty());

    rd_report_free(rep);
    rd_report_free(nullptr);  // free is null-safe
    rd_inputs_free(ins);
    rd_program_free(prog);
}

TEST_CASE("execution failures surface as runtime errors") {
    Ctx ctx;
    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(
                ctx, "(define (f x) (while (<= i 1e18) ((i 1.0 (+ i 1.0)) (s 0.0 (+ s x))) s))",
                &prog) == RD_OK);
    rd_inputset* ins = nullptr;
    REQUIRE(rd_inputs_assign(ctx, prog, "x=1.0", &ins) == RD_OK);
    rd_report* rep = nullptr;
    CHECK(rd_run(ctx, prog, ins, 0, "repo", &rep) == RD_ERR_RUNTIME);
    CHECK_FALSE(std::string(rd_last_error(ctx)).empty());
    rd_inputs_free(ins);
    rd_program_free(prog);
}

TEST_CASE("state directory persistence works end to end") {
    std::string dir = temp_dir();
    Ctx ctx;
    REQUIRE(rd_context_set_option(ctx, "state-dir", dir.c_str()) == RD_OK);

    rd_program* prog = nullptr;
    REQUIRE(rd_program_parse(ctx, rd_corpus_source("diff-roots"), &prog) == RD_OK);
    rd_inputset* ins = nullptr;
    REQUIRE(rd_inputs_assign(ctx, prog, "x=1e99", &ins) == RD_OK);
    rd_report* rep = nullptr;
    REQUIRE(rd_run(ctx, prog, ins, 0, "repo+ro", &rep) == RD_OK);
    CHECK(stat(rep, "executions") == 3.0);
    rd_report_free(rep);

    // Program name for parsed sources is the entry function.
    std::filesystem::path state =
        std::filesystem::path(dir) / "main" / "66EC2955FC36B64A.v1";
    CHECK(std::filesystem::exists(state));
    std::ifstream f(state);
    std::string firstLine;
    std::getline(f, firstLine);
    CHECK(firstLine == "repo-state v1");

    rd_inputs_free(ins);
    rd_program_free(prog);
    std::filesystem::remove_all(dir);
}
