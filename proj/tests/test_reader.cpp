#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plstatic/reader.hpp"
#include "plstatic/term.hpp"

using namespace plstatic;

namespace {

Program readProgram(const std::string& text, Dialect dialect = Dialect::Swipl,
                    const std::string& name = "test.pl") {
    Program program;
    Reader reader(dialect);
    reader.readString(text, name, program);
    return program;
}

bool sameShape(const TermPtr& a, const TermPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TermKind::Var: return true;  // names normalized
        case TermKind::Atom: return a->text == b->text;
        case TermKind::Int: return a->intValue == b->intValue;
        case TermKind::Float: return a->floatValue == b->floatValue;
        case TermKind::Str: return a->text == b->text;
        case TermKind::Compound: {
            if (a->text != b->text || a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i) {
                if (!sameShape(a->args[i], b->args[i])) return false;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("tokenize ship clause") {
    auto tokens = tokenize("ship(Ship).", "t.pl");
    REQUIRE(tokens.size() == 6);  // atom ( var ) end eof
    CHECK(tokens[0].kind == TokenKind::Atom);
    CHECK(tokens[0].text == "ship");
    CHECK(tokens[1].kind == TokenKind::Punct);
    CHECK(tokens[1].text == "(");
    CHECK(tokens[2].kind == TokenKind::Var);
    CHECK(tokens[2].text == "Ship");
    CHECK(tokens[3].kind == TokenKind::Punct);
    CHECK(tokens[3].text == ")");
    CHECK(tokens[4].kind == TokenKind::End);
    CHECK(tokens[5].kind == TokenKind::Eof);
}

TEST_CASE("tokenize arithmetic expression") {
    auto tokens = tokenize("X is integer(3.14)", "t.pl");
    REQUIRE(tokens.size() == 7);
    CHECK(tokens[0].kind == TokenKind::Var);
    CHECK(tokens[1].text == "is");
    CHECK(tokens[2].text == "integer");
    CHECK(tokens[3].text == "(");
    CHECK(tokens[4].kind == TokenKind::Float);
    CHECK(tokens[4].floatValue == doctest::Approx(3.14));
    CHECK(tokens[5].text == ")");
}

TEST_CASE("tokenize locations and comments") {
    auto tokens = tokenize("% comment\nfoo. /* block\n */ bar.", "t.pl");
    REQUIRE(tokens.size() >= 4);
    CHECK(tokens[0].text == "foo");
    CHECK(tokens[0].loc.line == 2);
    CHECK(tokens[2].text == "bar");
    CHECK(tokens[2].loc.line == 3);
}

TEST_CASE("tokenize char code and radix literals") {
    auto tokens = tokenize("0'a 0'\\n 0x1f 0o17 0b101", "t.pl");
    CHECK(tokens[0].intValue == 97);
    CHECK(tokens[1].intValue == 10);
    CHECK(tokens[2].intValue == 31);
    CHECK(tokens[3].intValue == 15);
    CHECK(tokens[4].intValue == 5);
}

TEST_CASE("unterminated tokens raise lex errors with location") {
    CHECK_THROWS_AS(tokenize("foo('bar", "t.pl"), ReaderError);
    CHECK_THROWS_AS(tokenize("/* never closed", "t.pl"), ReaderError);
    try {
        tokenize("x :- 'oops", "t.pl");
        FAIL("expected lex error");
    } catch (const ReaderError& e) {
        CHECK(e.loc().line == 1);
        CHECK(e.loc().column > 1);
    }
}

TEST_CASE("operator priorities") {
    TermPtr t = parseTermString("1 + 2 * 3");
    REQUIRE(t->isCompound("+", 2));
    CHECK(t->args[0]->intValue == 1);
    REQUIRE(t->args[1]->isCompound("*", 2));
    CHECK(t->args[1]->args[0]->intValue == 2);
    CHECK(t->args[1]->args[1]->intValue == 3);
}

TEST_CASE("clause term parses to :-/2 with cons cells") {
    TermPtr t = parseTermString("atom_member(E,[_|T]) :- atom_member(E,T)");
    REQUIRE(t->isCompound(":-", 2));
    const TermPtr& head = t->args[0];
    REQUIRE(head->isCompound("atom_member", 2));
    REQUIRE(head->args[1]->isCons());
    CHECK(head->args[1]->args[0]->isVar());
    CHECK(head->args[1]->args[1]->isVar());
    const TermPtr& body = t->args[1];
    REQUIRE(body->isCompound("atom_member", 2));
    // E is the same variable in head and body
    CHECK(head->args[0]->varId == body->args[0]->varId);
    // _ gets its own id
    CHECK(head->args[1]->args[0]->varId != head->args[0]->varId);
}

TEST_CASE("nested compounds") {
    TermPtr t = parseTermString("node(node(0,1,2), 3, 4)");
    REQUIRE(t->isCompound("node", 3));
    REQUIRE(t->args[0]->isCompound("node", 3));
    CHECK(t->args[1]->intValue == 3);
}

TEST_CASE("list sugar equivalence") {
    TermPtr sugar = parseTermString("[1,a]");
    TermPtr plain = parseTermString("'.'(1,'.'(a,[]))");
    CHECK(sameShape(sugar, plain));
    CHECK(structurallyEqual(*sugar, *plain));

    TermPtr ab = parseTermString("[a,b]");
    TermPtr abPlain = parseTermString("'.'(a,'.'(b,[]))");
    CHECK(structurallyEqual(*ab, *abPlain));
}

TEST_CASE("partial lists and tails") {
    TermPtr t = parseTermString("[H|T]");
    REQUIRE(t->isCons());
    CHECK(t->args[0]->isVar());
    CHECK(t->args[1]->isVar());
    CHECK(!t->properListElements().has_value());
    CHECK(parseTermString("[1,2,3]")->properListElements()->size() == 3);
}

TEST_CASE("negative literals and operators as atoms") {
    CHECK(parseTermString("-1")->intValue == -1);
    TermPtr spaced = parseTermString("- 1");
    REQUIRE(spaced->isCompound("-", 1));
    TermPtr list = parseTermString("[+, -]");
    auto elements = list->properListElements();
    REQUIRE(elements.has_value());
    CHECK((*elements)[0]->isAtom("+"));
    CHECK((*elements)[1]->isAtom("-"));
}

TEST_CASE("curly braces") {
    TermPtr t = parseTermString("{X > 1}");
    REQUIRE(t->isCompound("{}", 1));
    CHECK(t->args[0]->isCompound(">", 2));
    CHECK(parseTermString("{}")->isAtom("{}"));
}

TEST_CASE("strings by dialect") {
    TermPtr swi = parseTermString("\"ab\"", Dialect::Swipl);
    CHECK(swi->kind == TermKind::Str);
    CHECK(swi->text == "ab");

    TermPtr sic = parseTermString("\"ab\"", Dialect::Sicstus);
    auto codes = sic->properListElements();
    REQUIRE(codes.has_value());
    REQUIRE(codes->size() == 2);
    CHECK((*codes)[0]->intValue == 97);
    CHECK((*codes)[1]->intValue == 98);
}

TEST_CASE("module qualifier parses with standard priority") {
    TermPtr t = parseTermString("lists:member(X, L)");
    REQUIRE(t->isCompound(":", 2));
    CHECK(t->args[0]->isAtom("lists"));
    CHECK(t->args[1]->isCompound("member", 2));
}

TEST_CASE("rate my ship program") {
    Program p = readProgram(
        "ship(Ship) :- member(Ship, [destiny, galactica, enterprise]).\n"
        "rating(stars(Rate)) :- member(Rate, [1,2,3,4,5]).\n"
        "rate_my_ship(S,R) :- ship(S), rating(R).\n");
    CHECK(p.diagnostics.empty());
    REQUIRE(p.predicates.size() == 3);
    PredicateIndicator ship{"user", "ship", 1};
    PredicateIndicator rating{"user", "rating", 1};
    PredicateIndicator rms{"user", "rate_my_ship", 2};
    REQUIRE(p.predicates.count(ship) == 1);
    REQUIRE(p.predicates.count(rating) == 1);
    REQUIRE(p.predicates.count(rms) == 1);
    CHECK(p.predicates[ship].clauses.size() == 1);
    CHECK(p.predicates[rms].clauses[0].body.size() == 2);
    // conjunction flattened
    CHECK(p.predicates[rms].clauses[0].body[0]->isCompound("ship", 1));
    CHECK(p.predicates[rms].clauses[0].body[1]->isCompound("rating", 1));
}

TEST_CASE("directives-only file yields no clauses") {
    Program p = readProgram(":- module(m, []).\n:- use_module(library(lists)).\n");
    CHECK(p.predicates.empty());
    CHECK(p.directives.size() == 2);
}

TEST_CASE("halt directive is never executed") {
    Program p = readProgram(":- halt.\nfoo(a).\n");
    CHECK(p.predicates.size() == 1);
}

TEST_CASE("module directory with cross-module call") {
    std::string dir = std::string(PLSTATIC_FIXTURE_DIR) + "/modules";
    Program p = parseProgram({dir}, Dialect::Swipl);
    CHECK(p.diagnostics.empty());
    PredicateIndicator exported{"mod_a", "exported_pred", 1};
    PredicateIndicator caller{"mod_b", "caller", 1};
    REQUIRE(p.predicates.count(exported) == 1);
    REQUIRE(p.predicates.count(caller) == 1);
    const FileModule* modB = nullptr;
    for (const auto& [file, mod] : p.fileModules) {
        if (mod.name == "mod_b") modB = &mod;
    }
    REQUIRE(modB != nullptr);
    REQUIRE(modB->uses.size() == 1);
    CHECK(modB->uses[0].target == "mod_a");
}

TEST_CASE("op directive honored after its occurrence") {
    Program p = readProgram(
        ":- op(700, xfx, ===).\n"
        "check(X, Y) :- X === Y.\n");
    CHECK(p.diagnostics.empty());
    PredicateIndicator check{"user", "check", 2};
    REQUIRE(p.predicates.count(check) == 1);
    CHECK(p.predicates[check].clauses[0].body[0]->isCompound("===", 2));
}

TEST_CASE("malformed op directive warns") {
    Program p = readProgram(":- op(foo, bar, baz).\nf(a).\n");
    REQUIRE(p.diagnostics.size() == 1);
    CHECK(p.diagnostics[0].severity == ReadDiagnostic::Severity::Warning);
    CHECK(p.predicates.size() == 1);
}

TEST_CASE("conditional compilation takes the if branch") {
    Program p = readProgram(
        ":- if(current_prolog_flag(dialect, swi)).\n"
        "in_if(a).\n"
        ":- else.\n"
        "in_else(b).\n"
        ":- endif.\n"
        "after(c).\n");
    CHECK(p.predicates.count({"user", "in_if", 1}) == 1);
    CHECK(p.predicates.count({"user", "in_else", 1}) == 0);
    CHECK(p.predicates.count({"user", "after", 1}) == 1);
    bool warned = false;
    for (const auto& d : p.diagnostics) {
        if (d.severity == ReadDiagnostic::Severity::Warning) warned = true;
    }
    CHECK(warned);
}

TEST_CASE("DCG clauses are skipped with a warning") {
    Program p = readProgram("greeting --> [hello], name.\nfact(1).\n");
    CHECK(p.predicates.size() == 1);
    REQUIRE(p.diagnostics.size() == 1);
    CHECK(p.diagnostics[0].severity == ReadDiagnostic::Severity::Warning);
}

TEST_CASE("parse errors are collected and reading continues") {
    Program p = readProgram("broken(:- .\ngood(a).\n");
    CHECK(!p.diagnostics.empty());
    CHECK(p.predicates.count({"user", "good", 1}) == 1);
}

TEST_CASE("print / reparse round trip") {
    const char* samples[] = {
        "foo(bar, Baz)",
        "1 + 2 * 3",
        "f(X) :- g(X), h(X, [a,b|T])",
        "- 1",
        "'quoted atom'(weird)",
        "[[1,2],[3|X]]",
        "a = b",
        "\\+ foo(X)",
        "(a ; b)",
        "(a -> b ; c)",
        "X is Y + 1.5",
        "{X, Y}",
        "node(node(0,1,2), 3, 4)",
        "[a] = '.'(a, [])",
    };
    for (const char* sample : samples) {
        CAPTURE(sample);
        TermPtr first = parseTermString(sample);
        std::string printed = printTerm(first);
        CAPTURE(printed);
        TermPtr second = parseTermString(printed);
        CHECK(sameShape(first, second));
    }
}

TEST_CASE("variable names recorded per clause") {
    Program p = readProgram("f(X, Y, _) :- g(X, Y).\n");
    const Clause& clause = p.predicates[{"user", "f", 3}].clauses[0];
    REQUIRE(clause.varNames.size() == 3);
    CHECK(clause.varNames[0] == "X");
    CHECK(clause.varNames[1] == "Y");
    CHECK(clause.varNames[2] == "_");
}
