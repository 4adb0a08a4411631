#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"
#include "plstatic/report.hpp"

#include <memory>

using namespace plstatic;

namespace {

struct Run {
    Program program;
    std::unique_ptr<SpecDb> db;
    std::vector<ReadDiagnostic> annotationDiags;
    AnalysisResult result;

    explicit Run(const std::string& source, bool builtins = true) {
        Reader reader(Dialect::Swipl);
        reader.readString(source, "test.pl", program);
        db = std::make_unique<SpecDb>(Dialect::Swipl);
        if (builtins) db->loadBuiltins(PLSTATIC_ANNOTATION_DIR);
        annotationDiags = db->registerAnnotations(program);
        db->prepareInitialConditions(program);
        result = runAnalysis(program, *db, {});
    }

    std::vector<Diagnostic> diagnostics() {
        return collectDiagnostics(program, annotationDiags, result);
    }
};

}  // namespace

TEST_CASE("stats on the converged rate-my-ship program") {
    Run run(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n");
    Stats stats = computeStats(run.program, run.result);
    CHECK(stats.variableCount == 4);  // Ship, Rate, S, R
    CHECK(stats.inferredCount == 4);
    CHECK(stats.inferredPct == doctest::Approx(100.0));
    CHECK(stats.unknownCalls == 0);
    CHECK(stats.totalCalls == 4);
    CHECK(stats.unknownPct == doctest::Approx(0.0));
}

TEST_CASE("stats with no information source") {
    Run run("p(X) :- foo(X).\n", /*builtins=*/false);
    Stats stats = computeStats(run.program, run.result);
    CHECK(stats.variableCount == 1);
    CHECK(stats.inferredCount == 0);
    CHECK(stats.inferredPct == doctest::Approx(0.0));
    CHECK(stats.unknownCalls == 1);
    CHECK(stats.totalCalls == 1);
    CHECK(stats.unknownPct == doctest::Approx(100.0));
}

TEST_CASE("stats: one unknown call out of four goals") {
    Run run("p(X, Y, Z) :- member(X, [1,2,3]), length(Y, X), reverse(Y, Z), mystery(X, Z).\n");
    Stats stats = computeStats(run.program, run.result);
    CHECK(stats.totalCalls == 4);
    CHECK(stats.unknownCalls == 1);
    CHECK(stats.unknownPct == doctest::Approx(25.0));
    CHECK(stats.variableCount == 3);
    CHECK(stats.inferredCount == 3);  // X int, Y list(any), Z list via reverse
    CHECK(stats.inferredPct == doctest::Approx(100.0));
}

TEST_CASE("an annotation-constrained var counts as inferred, an untouched one does not") {
    Run run(
        ":- spec_pre(must_be_var/1, [var]).\n"
        ":- spec_post(must_be_var/1, [any], [var]).\n"
        "must_be_var(_).\n"
        "touched(X) :- must_be_var(X).\n"
        "untouched(X) :- mystery(X).\n",
        /*builtins=*/false);
    Stats stats = computeStats(run.program, run.result);
    CHECK(stats.variableCount == 2);
    CHECK(stats.inferredCount == 1);
}

TEST_CASE("emitted annotations round-trip through the reader") {
    Run run(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "append2([], Y, Y).\nappend2([H|T], Y, [H|R]) :- append2(T, Y, R).\n");
    std::string text = emitAnnotations(*run.db);
    CHECK(text.find(":- spec_post(ship/1, [any], [atom]).") != std::string::npos);
    CHECK(text.find(":- spec_post(append2/3, [any,any,any], [list(any),any,any]).") !=
          std::string::npos);

    // parse the emitted text back and compare against the inferred entries
    Program annotations;
    Reader reader(Dialect::Swipl);
    reader.readString(text, "emitted.pl", annotations);
    REQUIRE(annotations.diagnostics.empty());
    SpecDb reparsed(Dialect::Swipl);
    auto diags = reparsed.registerAnnotations(annotations);
    REQUIRE(diags.empty());
    int inferredCount = 0;
    for (const auto& [pi, conds] : run.db->table()) {
        for (const PostEntry& post : conds.posts) {
            if (post.origin != Origin::Inferred) continue;
            ++inferredCount;
            const Conditions* other = reparsed.find({"user", pi.name, pi.arity});
            REQUIRE(other != nullptr);
            bool matched = false;
            for (const PostEntry& candidate : other->posts) {
                if (candidate.premise == post.premise &&
                    candidate.conclusion == post.conclusion) {
                    matched = true;
                }
            }
            CAPTURE(pi.str());
            CHECK(matched);
        }
    }
    CHECK(inferredCount >= 2);
}

TEST_CASE("diagnostic rendering and exit codes") {
    Run bad(
        ":- spec_pre(takes_atom/1, [atom]).\n"
        "takes_atom(a).\n"
        "main_pred :- takes_atom(1).\n",
        /*builtins=*/false);
    auto diags = bad.diagnostics();
    int errors = 0;
    for (const auto& d : diags) {
        if (d.severity == Diagnostic::Severity::Error) ++errors;
    }
    CHECK(errors == 1);
    CHECK(exitCode(diags) == 1);

    std::string text = renderText(diags, std::nullopt);
    CHECK(text.find("test.pl:3:") != std::string::npos);
    CHECK(text.find("error:") != std::string::npos);
    CHECK(text.find("expected atom, got int") != std::string::npos);

    Run clean(
        ":- spec_pre(takes_atom/1, [atom]).\n"
        "takes_atom(a).\n"
        "main_pred :- true.\n",
        /*builtins=*/false);
    auto cleanDiags = clean.diagnostics();
    CHECK(exitCode(cleanDiags) == 0);

    Run broken("f(a.\n", /*builtins=*/false);
    CHECK(exitCode(broken.diagnostics()) == 2);
}

TEST_CASE("json lines format carries one record per diagnostic plus stats") {
    Run run(
        ":- spec_pre(takes_atom/1, [atom]).\n"
        "takes_atom(a).\n"
        "main_pred :- takes_atom(1).\n",
        /*builtins=*/false);
    Stats stats = computeStats(run.program, run.result);
    std::string text = renderJsonLines(run.diagnostics(), stats);
    int lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    CHECK(lines >= 2);
    CHECK(text.find("\"kind\":\"stats\"") != std::string::npos);
    CHECK(text.find("\"severity\":\"error\"") != std::string::npos);
    CHECK(text.find("\"expected\":\"atom\"") != std::string::npos);
}

TEST_CASE("stats are deterministic across runs") {
    const char* source =
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rate_my_ship(S,R) :- ship(S), mystery(R).\n";
    Run a(source);
    Run b(source);
    Stats sa = computeStats(a.program, a.result);
    Stats sb = computeStats(b.program, b.result);
    CHECK(sa.variableCount == sb.variableCount);
    CHECK(sa.inferredCount == sb.inferredCount);
    CHECK(sa.unknownCalls == sb.unknownCalls);
    CHECK(sa.totalCalls == sb.totalCalls);
}
