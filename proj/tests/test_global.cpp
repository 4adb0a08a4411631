#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plstatic/global.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"

#include <memory>

using namespace plstatic;

namespace {

struct Run {
    Program program;
    std::unique_ptr<SpecDb> db;
    AnalysisResult result;

    explicit Run(const std::string& source, bool builtins = true, AnalysisOptions options = {}) {
        Reader reader(Dialect::Swipl);
        reader.readString(source, "test.pl", program);
        REQUIRE(program.diagnostics.empty());
        db = std::make_unique<SpecDb>(Dialect::Swipl);
        if (builtins) db->loadBuiltins(PLSTATIC_ANNOTATION_DIR);
        db->registerAnnotations(program);
        db->prepareInitialConditions(program);
        result = runAnalysis(program, *db, options);
    }

    Spec specOf(const std::string& text) {
        return normalize(specFromTerm(*parseTermString(text), Dialect::Swipl), db->typeDefs());
    }

    const std::vector<Spec>* inferredConclusion(const std::string& name, int arity) {
        const Conditions* c = db->find({"user", name, arity});
        if (!c) return nullptr;
        for (const PostEntry& post : c->posts) {
            if (post.origin == Origin::Inferred) return &post.conclusion;
        }
        return nullptr;
    }

    std::vector<const ClauseResult*> resultsFor(const std::string& name, int arity) {
        std::vector<const ClauseResult*> out;
        for (const ClauseResult& r : result.clauseResults) {
            if (r.pi.name == name && r.pi.arity == arity) out.push_back(&r);
        }
        return out;
    }
};

}  // namespace

TEST_CASE("append: per-clause results and merged conclusion") {
    Run run("append([], Y, Y).\nappend([H|T], Y, [H|R]) :- append(T, Y, R).\n",
            /*builtins=*/false);
    CHECK(run.result.errors.empty());

    auto clauses = run.resultsFor("append", 3);
    REQUIRE(clauses.size() == 2);
    CHECK(clauses[0]->argDoms ==
          std::vector<Spec>{run.specOf("list(any)"), Spec::any(), Spec::any()});
    CHECK(clauses[1]->argDoms ==
          std::vector<Spec>{run.specOf("list(any)"), Spec::any(), run.specOf("list(any)")});

    auto merged = mergePredicate(clauses, 3, run.db->typeDefs());
    REQUIRE(merged.has_value());
    CHECK(*merged == std::vector<Spec>{run.specOf("list(any)"), Spec::any(), Spec::any()});

    // the installed post carries the same conclusion
    const Conditions* c = run.db->find({"user", "append", 3});
    REQUIRE(c != nullptr);
    bool found = false;
    for (const PostEntry& post : c->posts) {
        if (post.conclusion ==
            std::vector<Spec>{run.specOf("list(any)"), Spec::any(), Spec::any()}) {
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("rate my ship: propagation reaches the fixed point in three iterations") {
    Run run(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n");
    CHECK(run.result.errors.empty());
    CHECK(!run.result.truncated);
    CHECK(run.result.iterations == 3);

    const std::vector<Spec>* ship = run.inferredConclusion("ship", 1);
    REQUIRE(ship != nullptr);
    CHECK(*ship == std::vector<Spec>{Spec::atom()});

    const std::vector<Spec>* rating = run.inferredConclusion("rating", 1);
    REQUIRE(rating != nullptr);
    CHECK(*rating == std::vector<Spec>{run.specOf("compound(stars(int))")});

    // the final environments see the propagated knowledge
    auto rms = run.resultsFor("rate_my_ship", 2);
    REQUIRE(rms.size() == 1);
    CHECK(rms[0]->argDoms[0] == Spec::atom());
    CHECK(rms[0]->argDoms[1] == run.specOf("compound(stars(int))"));
}

TEST_CASE("merge skips erroring clauses and keeps order-insensitivity") {
    Run run(
        ":- spec_pre(f/1, [int]).\n"
        ":- spec_post(f/1, [any], [int]).\n"
        "f(1).\n"
        "ok(X) :- f(X).\n"
        "ok(a).\n",
        /*builtins=*/false);
    auto clauses = run.resultsFor("ok", 1);
    REQUIRE(clauses.size() == 2);
    auto merged = mergePredicate(clauses, 1, run.db->typeDefs());
    REQUIRE(merged.has_value());
    CHECK((*merged)[0] == run.specOf("one_of([int, atom])"));

    std::vector<const ClauseResult*> reversed{clauses[1], clauses[0]};
    auto mergedReversed = mergePredicate(reversed, 1, run.db->typeDefs());
    REQUIRE(mergedReversed.has_value());
    CHECK(*merged == *mergedReversed);
}

TEST_CASE("a predicate whose clauses all fail is reported") {
    Run run(
        ":- spec_pre(wants_atom/1, [atom]).\n"
        "wants_atom(a).\n"
        "doomed :- wants_atom(1).\n",
        /*builtins=*/false);
    REQUIRE(!run.result.errors.empty());
    bool noted = false;
    for (const AnalysisNote& n : run.result.notes) {
        if (n.message.find("no clause of user:doomed/0 can succeed") != std::string::npos ||
            n.message.find("no clause of doomed/0 can succeed") != std::string::npos) {
            noted = true;
        }
    }
    CHECK(noted);
}

TEST_CASE("propagation is idempotent at the fixed point") {
    Run run("append([], Y, Y).\nappend([H|T], Y, [H|R]) :- append(T, Y, R).\n",
            /*builtins=*/false);
    // run again on the converged database: nothing may change
    AnalysisResult second = runAnalysis(run.program, *run.db, {});
    CHECK(second.iterations == 1);
    CHECK(second.errors.empty());
    for (size_t i = 0; i < second.clauseResults.size(); ++i) {
        CHECK(second.clauseResults[i].argDoms == run.result.clauseResults[i].argDoms);
    }
}

TEST_CASE("user posts stay verbatim through propagation") {
    Run run(
        ":- spec_post(loose/1, [any], [any]).\n"
        "loose(1).\n",
        /*builtins=*/false);
    const Conditions* c = run.db->find({"user", "loose", 1});
    REQUIRE(c != nullptr);
    bool userKept = false;
    for (const PostEntry& post : c->posts) {
        if (post.origin == Origin::User && post.conclusion == std::vector<Spec>{Spec::any()}) {
            userKept = true;
        }
    }
    CHECK(userKept);
    // the inferred one is added alongside
    const std::vector<Spec>* inferred = run.inferredConclusion("loose", 1);
    REQUIRE(inferred != nullptr);
    CHECK((*inferred)[0] == Spec::intType());
}

TEST_CASE("mutual recursion halts within the caps") {
    Run run(
        "is_even([]).\n"
        "is_even([_|T]) :- is_odd(T).\n"
        "is_odd([_|T]) :- is_even(T).\n",
        /*builtins=*/false);
    CHECK(!run.result.truncated);
    CHECK(run.result.errors.empty());
    // the generated conclusion is already the fixed point here
    const Conditions* even = run.db->find({"user", "is_even", 1});
    REQUIRE(even != nullptr);
    REQUIRE(!even->posts.empty());
    CHECK(even->posts[0].conclusion == std::vector<Spec>{run.specOf("list(any)")});
    auto clauses = run.resultsFor("is_even", 1);
    REQUIRE(clauses.size() == 2);
    CHECK(clauses[0]->argDoms[0] == run.specOf("list(any)"));
    CHECK(clauses[1]->argDoms[0] == run.specOf("list(any)"));
}

TEST_CASE("empty program: one iteration, empty report") {
    Run run(":- use_module(library(lists)).\n");
    CHECK(run.result.iterations == 1);
    CHECK(run.result.clauseResults.empty());
    CHECK(run.result.errors.empty());
    CHECK(run.result.totalGoals == 0);
}

TEST_CASE("global cap truncates with a warning") {
    // widening normally prevents long chains; force the cap with 1 iteration
    Run run(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n",
        /*builtins=*/true, AnalysisOptions{1, 50});
    CHECK(run.result.truncated);
    bool warned = false;
    for (const AnalysisNote& n : run.result.notes) {
        if (n.message.find("truncated") != std::string::npos) warned = true;
    }
    CHECK(warned);
}

TEST_CASE("deterministic across two full runs") {
    const char* source =
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n";
    Run first(source);
    Run second(source);
    REQUIRE(first.result.clauseResults.size() == second.result.clauseResults.size());
    for (size_t i = 0; i < first.result.clauseResults.size(); ++i) {
        CHECK(first.result.clauseResults[i].argDoms == second.result.clauseResults[i].argDoms);
    }
    CHECK(first.result.iterations == second.result.iterations);
    CHECK(first.result.totalGoals == second.result.totalGoals);
}
