#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace plstatic {

enum class Dialect { Swipl, Sicstus };

std::optional<Dialect> dialectFromString(const std::string& name);
std::string dialectName(Dialect dialect);

struct SourceLoc {
    std::string file;
    int line = 0;
    int column = 0;

    std::string str() const;
};

enum class TermKind { Var, Atom, Int, Float, Str, Compound };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// A parsed Prolog term. Atoms, variables and strings carry their text in
/// `text`; compounds use `text` as the functor name. Variables additionally
/// carry a clause-local id so that occurrences of the same variable can be
/// identified (every `_` gets a fresh id).
struct Term {
    TermKind kind = TermKind::Atom;
    std::string text;
    long long intValue = 0;
    double floatValue = 0.0;
    std::vector<TermPtr> args;
    SourceLoc loc;
    int varId = -1;

    bool isVar() const { return kind == TermKind::Var; }
    bool isAtom() const { return kind == TermKind::Atom; }
    bool isAtom(const std::string& name) const { return kind == TermKind::Atom && text == name; }
    bool isCompound() const { return kind == TermKind::Compound; }
    bool isCompound(const std::string& functor, size_t arity) const {
        return kind == TermKind::Compound && text == functor && args.size() == arity;
    }
    bool isCallable() const { return isAtom() || isCompound(); }
    bool isNil() const { return isAtom("[]"); }
    bool isCons() const { return isCompound(".", 2); }
    size_t arity() const { return kind == TermKind::Compound ? args.size() : 0; }

    /// True when no variable occurs anywhere in the term.
    bool isGround() const;
    /// Walks a '.'/2 chain; returns the elements iff the term is a proper list.
    std::optional<std::vector<TermPtr>> properListElements() const;

    static TermPtr makeVar(std::string name, int id, SourceLoc loc = {});
    static TermPtr makeAtom(std::string name, SourceLoc loc = {});
    static TermPtr makeInt(long long value, SourceLoc loc = {});
    static TermPtr makeFloat(double value, SourceLoc loc = {});
    static TermPtr makeString(std::string value, SourceLoc loc = {});
    static TermPtr makeCompound(std::string functor, std::vector<TermPtr> args, SourceLoc loc = {});
    /// Builds a proper list term out of `elements`.
    static TermPtr makeList(const std::vector<TermPtr>& elements, SourceLoc loc = {});
};

/// Structural equality; variables compare by id, locations are ignored.
bool structurallyEqual(const Term& a, const Term& b);

struct PredicateIndicator {
    std::string module = "user";
    std::string name;
    int arity = 0;

    std::string str() const;

    friend bool operator==(const PredicateIndicator& a, const PredicateIndicator& b) {
        return a.module == b.module && a.name == b.name && a.arity == b.arity;
    }
    friend bool operator<(const PredicateIndicator& a, const PredicateIndicator& b) {
        if (a.module != b.module) return a.module < b.module;
        if (a.name != b.name) return a.name < b.name;
        return a.arity < b.arity;
    }
};

struct Clause {
    TermPtr head;
    std::vector<TermPtr> body;  // conjunction flattened, facts have an empty body
    SourceLoc loc;
    std::vector<std::string> varNames;  // indexed by varId; "_" for anonymous
};

struct Directive {
    TermPtr goal;
    SourceLoc loc;
};

struct UseModule {
    std::string target;  // module or library name, e.g. "lists" for library(lists)
    std::optional<std::vector<std::pair<std::string, int>>> imports;  // name/arity filter
};

struct FileModule {
    std::string name = "user";
    std::vector<std::pair<std::string, int>> exports;
    std::vector<UseModule> uses;
};

struct ReadDiagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    SourceLoc loc;
    std::string message;
};

struct PredicateDef {
    PredicateIndicator pi;
    std::vector<Clause> clauses;  // source order
};

struct Program {
    Dialect dialect = Dialect::Swipl;
    std::map<PredicateIndicator, PredicateDef> predicates;
    std::vector<Directive> directives;            // file order
    std::map<std::string, FileModule> fileModules;  // keyed by file path
    std::vector<ReadDiagnostic> diagnostics;

    const FileModule* moduleOfFile(const std::string& file) const;
    /// Module name a clause in `file` belongs to ("user" when undeclared).
    std::string moduleName(const std::string& file) const;
};

}  // namespace plstatic
