#pragma once

#include "plstatic/term.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace plstatic {

/// Kinds of abstract type expressions. The leaf types mirror the built-in
/// type domain; Exact is the singleton type of one atom. OneOf/And combine
/// types; UserDef refers to a defspec; SpecVar is a type parameter; UnionVar
/// and CompatVar are the type-variable markers that only occur in
/// postcondition conclusions and environments. Error is the empty type and
/// carries a conflict description.
enum class SpecKind {
    Any,
    Var,
    Nonvar,
    Ground,
    CompoundAny,
    Atomic,
    Number,
    Int,
    Float,
    Atom,
    Str,
    EmptyList,
    Exact,
    List,
    Tuple,
    Compound,
    OneOf,
    And,
    UserDef,
    SpecVar,
    UnionVar,
    CompatVar,
    Error,
};

class Spec {
public:
    Spec() : kind_(SpecKind::Any) {}

    SpecKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<Spec>& args() const { return args_; }
    bool is(SpecKind k) const { return kind_ == k; }
    bool isError() const { return kind_ == SpecKind::Error; }

    static Spec leaf(SpecKind kind);
    static Spec any() { return leaf(SpecKind::Any); }
    static Spec var() { return leaf(SpecKind::Var); }
    static Spec nonvar() { return leaf(SpecKind::Nonvar); }
    static Spec ground() { return leaf(SpecKind::Ground); }
    static Spec compoundAny() { return leaf(SpecKind::CompoundAny); }
    static Spec atomic() { return leaf(SpecKind::Atomic); }
    static Spec atom() { return leaf(SpecKind::Atom); }
    static Spec stringType() { return leaf(SpecKind::Str); }
    static Spec number() { return leaf(SpecKind::Number); }
    static Spec intType() { return leaf(SpecKind::Int); }
    static Spec floatType() { return leaf(SpecKind::Float); }
    static Spec emptyList() { return leaf(SpecKind::EmptyList); }
    static Spec exact(std::string atomText);
    static Spec list(Spec element);
    static Spec tuple(std::vector<Spec> args);
    static Spec compound(std::string functor, std::vector<Spec> args);
    static Spec oneOf(std::vector<Spec> alternatives);
    static Spec conj(std::vector<Spec> conjuncts);
    static Spec userDef(std::string name, std::vector<Spec> params = {});
    static Spec specVar(std::string id);
    static Spec unionVar(std::string id);
    static Spec compatVar(std::string id);
    static Spec error(std::string description);

    /// Surface syntax, re-parseable by the annotation reader (except Error).
    std::string str() const;

    /// True when a union/compatible marker occurs anywhere inside.
    bool containsMarker() const;

    friend bool operator==(const Spec& a, const Spec& b) {
        if (a.kind_ != b.kind_) return false;
        if (a.kind_ == SpecKind::Error) return true;  // notes are diagnostics only
        return a.name_ == b.name_ && a.args_ == b.args_;
    }
    friend bool operator!=(const Spec& a, const Spec& b) { return !(a == b); }

private:
    SpecKind kind_;
    std::string name_;        // exact atom / functor / user name / type-var id / error note
    std::vector<Spec> args_;
};

/// Deterministic structural total order (used to canonicalize one_of).
int compareSpecs(const Spec& a, const Spec& b);
inline bool specLess(const Spec& a, const Spec& b) { return compareSpecs(a, b) < 0; }

struct TypeDef {
    std::vector<std::string> params;  // specvar names, positional
    Spec body;
};

class UndefinedSpecError : public std::runtime_error {
public:
    UndefinedSpecError(const std::string& name, int paramCount)
        : std::runtime_error("undefined spec: " + name + "/" + std::to_string(paramCount)),
          name_(name),
          paramCount_(paramCount) {}

    const std::string& specName() const { return name_; }
    int paramCount() const { return paramCount_; }

private:
    std::string name_;
    int paramCount_;
};

/// User type definitions (defspec). Resolution is lazy: bodies are only
/// unfolded during intersection, subtyping and inhabitation checks.
class TypeDefs {
public:
    explicit TypeDefs(Dialect dialect = Dialect::Swipl) : dialect_(dialect) {}

    Dialect dialect() const { return dialect_; }

    bool add(const std::string& name, TypeDef def);  // false if already defined
    const TypeDef* find(const std::string& name, int paramCount) const;
    bool defined(const std::string& name, int paramCount) const {
        return find(name, paramCount) != nullptr;
    }

    /// Substitutes `user.args()` for the definition's parameters.
    /// Throws UndefinedSpecError for unknown names.
    Spec unfold(const Spec& user) const;

private:
    std::map<std::pair<std::string, int>, TypeDef> defs_;
    Dialect dialect_;
};

/// Converts a parsed annotation term into a Spec. Unknown compound shapes
/// become user-type references; validation against TypeDefs happens later.
/// Returns an Error spec with a message for malformed expressions.
Spec specFromTerm(const Term& term, Dialect dialect);

}  // namespace plstatic
