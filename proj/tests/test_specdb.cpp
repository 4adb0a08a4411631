#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"
#include "plstatic/spec_db.hpp"

using namespace plstatic;

namespace {

Program readProgram(const std::string& text, Dialect dialect = Dialect::Swipl) {
    Program program;
    Reader reader(dialect);
    reader.readString(text, "test.pl", program);
    return program;
}

Spec specOf(const std::string& text, const TypeDefs& defs) {
    return normalize(specFromTerm(*parseTermString(text), Dialect::Swipl), defs);
}

int errorCount(const std::vector<ReadDiagnostic>& diags) {
    int n = 0;
    for (const auto& d : diags) {
        if (d.severity == ReadDiagnostic::Severity::Error) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("user annotations are registered") {
    Program p = readProgram(
        ":- spec_pre(atom_member/2, [var, list(atom)]).\n"
        ":- spec_pre(atom_member/2, [atom, list(atom)]).\n"
        ":- spec_post(atom_member/2, [var, list(atom)], [atom, list(atom)]).\n"
        "atom_member(H,[H|_]).\n"
        "atom_member(E,[_|T]) :- atom_member(E,T).\n");
    SpecDb db(Dialect::Swipl);
    auto diags = db.registerAnnotations(p);
    CHECK(errorCount(diags) == 0);
    const Conditions* c = db.find({"user", "atom_member", 2});
    REQUIRE(c != nullptr);
    REQUIRE(c->pres.size() == 2);
    CHECK(c->pres[0].specs[0] == Spec::var());
    CHECK(c->pres[0].specs[1] == specOf("list(atom)", db.typeDefs()));
    CHECK(c->pres[1].specs[0] == Spec::atom());
    REQUIRE(c->posts.size() == 1);
    CHECK(c->posts[0].premise[0] == Spec::var());
    CHECK(c->posts[0].conclusion[0] == Spec::atom());
    CHECK(c->pres[0].origin == Origin::User);
}

TEST_CASE("arity mismatch is an annotation error") {
    Program p = readProgram(":- spec_pre(foo/2, [int]).\nfoo(1, 2).\n");
    SpecDb db(Dialect::Swipl);
    auto diags = db.registerAnnotations(p);
    REQUIRE(errorCount(diags) == 1);
    bool mentionsArity = diags[0].message.find("arity mismatch") != std::string::npos;
    CHECK(mentionsArity);
    const Conditions* c = db.find({"user", "foo", 2});
    CHECK((c == nullptr || c->pres.empty()));
}

TEST_CASE("undefined spec names are rejected") {
    Program p = readProgram(":- spec_pre(foo/1, [mystery_type]).\nfoo(1).\n");
    SpecDb db(Dialect::Swipl);
    auto diags = db.registerAnnotations(p);
    REQUIRE(errorCount(diags) == 1);
    CHECK(diags[0].message.find("undefined spec") != std::string::npos);
}

TEST_CASE("defspec registration and parametric types") {
    Program p = readProgram(
        ":- defspec(tree, one_of([int, compound(node(tree, int, tree))])).\n"
        ":- defspec(pair(specvar(X)), tuple([specvar(X), specvar(X)])).\n"
        ":- spec_pre(takes_tree/1, [tree]).\n"
        "takes_tree(1).\n");
    SpecDb db(Dialect::Swipl);
    auto diags = db.registerAnnotations(p);
    CHECK(errorCount(diags) == 0);
    CHECK(db.typeDefs().defined("tree", 0));
    CHECK(db.typeDefs().defined("pair", 1));
    CHECK(!db.typeDefs().defined("tree", 1));
}

TEST_CASE("builtin db loads per dialect") {
    SpecDb swi(Dialect::Swipl);
    auto diags = swi.loadBuiltins(PLSTATIC_ANNOTATION_DIR);
    CHECK(errorCount(diags) == 0);

    const Conditions* member = swi.findBuiltin("member", 2);
    REQUIRE(member != nullptr);
    REQUIRE(member->posts.size() == 1);
    // post_spec(member/2, [any, any], [compatible(X), list(union(X))])
    CHECK(member->posts[0].premise[0] == Spec::any());
    CHECK(member->posts[0].premise[1] == Spec::any());
    CHECK(member->posts[0].conclusion[0].is(SpecKind::CompatVar));
    REQUIRE(member->posts[0].conclusion[1].is(SpecKind::List));
    CHECK(member->posts[0].conclusion[1].args()[0].is(SpecKind::UnionVar));
    CHECK(member->posts[0].origin == Origin::Builtin);

    // ground/1 accepts anything
    const Conditions* ground = swi.findBuiltin("ground", 1);
    REQUIRE(ground != nullptr);
    CHECK(ground->pres[0].specs[0] == Spec::any());

    // is/2: both dialects require an evaluable expression on the right
    const Conditions* is2 = swi.findBuiltin("is", 2);
    REQUIRE(is2 != nullptr);
    CHECK(is2->pres[0].specs[0] == specOf("one_of([var, number])", swi.typeDefs()));
    Spec swiExpr = is2->pres[0].specs[1];
    REQUIRE(swiExpr.is(SpecKind::UserDef));

    // integer(3.14) is admitted under sicstus but not under swipl
    SpecDb sic(Dialect::Sicstus);
    sic.loadBuiltins(PLSTATIC_ANNOTATION_DIR);
    Spec intCall = Spec::compound("integer", {Spec::floatType()});
    CHECK(glb(intCall, swiExpr, swi.typeDefs()).isError());
    const Conditions* sicIs = sic.findBuiltin("is", 2);
    REQUIRE(sicIs != nullptr);
    CHECK(!glb(intCall, sicIs->pres[0].specs[1], sic.typeDefs()).isError());
    Spec logCall = Spec::compound("log", {Spec::intType(), Spec::intType()});
    CHECK(glb(logCall, swiExpr, swi.typeDefs()).isError());
    CHECK(!glb(logCall, sicIs->pres[0].specs[1], sic.typeDefs()).isError());

    // string specs only exist under swipl
    CHECK(swi.findBuiltin("string", 1) != nullptr);
    CHECK(sic.findBuiltin("string", 1) == nullptr);
}

TEST_CASE("preparation generates the documented conditions") {
    Program p = readProgram(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n");
    SpecDb db(Dialect::Swipl);
    db.registerAnnotations(p);
    db.prepareInitialConditions(p);

    const Conditions* ship = db.find({"user", "ship", 1});
    REQUIRE(ship != nullptr);
    REQUIRE(ship->pres.size() == 1);
    CHECK(ship->pres[0].specs[0] == Spec::any());
    CHECK(ship->pres[0].origin == Origin::Generated);
    REQUIRE(ship->posts.size() == 1);
    CHECK(ship->posts[0].premise[0] == Spec::any());
    CHECK(ship->posts[0].conclusion[0] == Spec::any());

    const Conditions* rating = db.find({"user", "rating", 1});
    REQUIRE(rating != nullptr);
    CHECK(rating->pres[0].specs[0] ==
          specOf("one_of([var, compound(stars(any))])", db.typeDefs()));
    CHECK(rating->posts[0].conclusion[0] == specOf("compound(stars(any))", db.typeDefs()));

    const Conditions* rms = db.find({"user", "rate_my_ship", 2});
    REQUIRE(rms != nullptr);
    CHECK(rms->pres[0].specs == std::vector<Spec>{Spec::any(), Spec::any()});
    CHECK(rms->posts[0].conclusion == std::vector<Spec>{Spec::any(), Spec::any()});
}

TEST_CASE("preparation never overwrites user annotations") {
    Program p = readProgram(
        ":- spec_pre(f/1, [atom]).\n"
        "f(99).\n");
    SpecDb db(Dialect::Swipl);
    db.registerAnnotations(p);
    db.prepareInitialConditions(p);
    const Conditions* c = db.find({"user", "f", 1});
    REQUIRE(c != nullptr);
    REQUIRE(c->pres.size() == 1);  // user pre fully replaces generation
    CHECK(c->pres[0].origin == Origin::User);
    CHECK(c->pres[0].specs[0] == Spec::atom());
    // no user post, so one is generated
    REQUIRE(c->posts.size() == 1);
    CHECK(c->posts[0].origin == Origin::Generated);
    CHECK(c->posts[0].conclusion[0] == Spec::intType());
}

TEST_CASE("every generated pre admits the var vector") {
    Program p = readProgram(
        "f(1, foo, [a]).\n"
        "g(stars(X)) :- f(X, _, _).\n");
    SpecDb db(Dialect::Swipl);
    db.prepareInitialConditions(p);
    for (const auto& [pi, conds] : db.table()) {
        for (const auto& pre : conds.pres) {
            for (const Spec& s : pre.specs) {
                CAPTURE(pi.str());
                CAPTURE(s.str());
                CHECK(!glb(s, Spec::var(), db.typeDefs()).isError());
            }
        }
    }
}

TEST_CASE("lookup resolution order") {
    Program p = readProgram(
        ":- use_module(library(lists)).\n"
        "member(X, Y) :- my_own(X, Y).\n"  // user definition shadows the library
        "my_own(a, b).\n"
        "caller(X, L) :- member(X, L), length(L, _), call(X), unknown_thing(X).\n");
    SpecDb db(Dialect::Swipl);
    db.loadBuiltins(PLSTATIC_ANNOTATION_DIR);
    db.registerAnnotations(p);
    db.prepareInitialConditions(p);
    Resolver resolver(p, db);

    auto member = resolver.lookup(*parseTermString("member(X, L)"), "user");
    REQUIRE(member.status == LookupResult::Status::Found);
    CHECK(member.resolved.module == "user");  // own definition wins

    auto length = resolver.lookup(*parseTermString("length(L, N)"), "user");
    REQUIRE(length.status == LookupResult::Status::Found);
    CHECK(length.resolved.module == "builtins");

    auto unknown = resolver.lookup(*parseTermString("unknown_thing(X)"), "user");
    CHECK(unknown.status == LookupResult::Status::Unknown);

    auto metaCall = resolver.lookup(*parseTermString("call(G)"), "user");
    CHECK(metaCall.status == LookupResult::Status::Unknown);

    // explicit qualifier bypasses the caller module
    auto qualified = resolver.lookup(*parseTermString("lists:member(X, L)"), "user");
    REQUIRE(qualified.status == LookupResult::Status::Found);

    // determinism
    auto again = resolver.lookup(*parseTermString("member(X, L)"), "user");
    CHECK(again.resolved.module == member.resolved.module);
    CHECK(again.conditions == member.conditions);
}

TEST_CASE("cross-module lookup honors exports") {
    std::string dir = std::string(PLSTATIC_FIXTURE_DIR) + "/modules";
    Program p = parseProgram({dir}, Dialect::Swipl);
    SpecDb db(Dialect::Swipl);
    db.prepareInitialConditions(p);
    Resolver resolver(p, db);

    auto exported = resolver.lookup(*parseTermString("exported_pred(X)"), "mod_b");
    REQUIRE(exported.status == LookupResult::Status::Found);
    CHECK(exported.resolved.module == "mod_a");

    // private helpers are not importable
    auto priv = resolver.lookup(*parseTermString("private_helper(X)"), "mod_b");
    CHECK(priv.status == LookupResult::Status::Unknown);
}

TEST_CASE("inferred post updates respect precision and user entries") {
    Program p = readProgram(
        ":- spec_post(annotated/1, [any], [one_of([int, atom])]).\n"
        "annotated(1).\n"
        "plain(X) :- annotated(X).\n");
    SpecDb db(Dialect::Swipl);
    db.registerAnnotations(p);
    db.prepareInitialConditions(p);

    PredicateIndicator plain{"user", "plain", 1};
    CHECK(db.updateInferredPost(plain, {Spec::intType()}));
    CHECK(!db.updateInferredPost(plain, {Spec::intType()}));  // no change at fixed point
    CHECK(!db.updateInferredPost(plain, {Spec::number()}));   // less precise is ignored

    PredicateIndicator annotated{"user", "annotated", 1};
    CHECK(db.updateInferredPost(annotated, {Spec::intType()}));
    const Conditions* c = db.find(annotated);
    REQUIRE(c != nullptr);
    REQUIRE(c->posts.size() == 2);  // user post kept verbatim, inferred added alongside
    CHECK(c->posts[0].origin == Origin::User);
    CHECK(c->posts[0].conclusion[0] == specOf("one_of([int, atom])", db.typeDefs()));
    CHECK(c->posts[1].origin == Origin::Inferred);
}

TEST_CASE("markers outside conclusions are stripped with a warning") {
    Program p = readProgram(
        ":- spec_pre(f/1, [list(union(X))]).\n"
        "f([]).\n");
    SpecDb db(Dialect::Swipl);
    auto diags = db.registerAnnotations(p);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == ReadDiagnostic::Severity::Warning);
    const Conditions* c = db.find({"user", "f", 1});
    REQUIRE(c != nullptr);
    CHECK(c->pres[0].specs[0] == specOf("list(any)", db.typeDefs()));
}
