#pragma once

#include "plstatic/spec.hpp"
#include "plstatic/term.hpp"

#include <map>
#include <string>
#include <vector>

namespace plstatic {

enum class Origin { User, Builtin, Generated, Inferred };

struct PreEntry {
    std::vector<Spec> specs;  // one per argument position
    Origin origin = Origin::User;
};

struct PostEntry {
    std::vector<Spec> premise;
    std::vector<Spec> conclusion;
    Origin origin = Origin::User;
};

struct Conditions {
    int arity = 0;
    std::vector<PreEntry> pres;
    std::vector<PostEntry> posts;

    bool hasUserPre() const;
    bool hasUserPost() const;
};

/// Per-predicate pre/postconditions: user annotations from the analyzed
/// program, bundled built-in annotations (keyed by name/arity), generated
/// initial conditions and inferred postconditions. Also owns the user type
/// definitions.
class SpecDb {
public:
    explicit SpecDb(Dialect dialect) : defs_(dialect), dialect_(dialect) {}

    Dialect dialect() const { return dialect_; }
    const TypeDefs& typeDefs() const { return defs_; }

    /// Registers spec_pre/spec_post/defspec directives of an analyzed
    /// program under origin=user. Malformed annotations are reported and not
    /// stored.
    std::vector<ReadDiagnostic> registerAnnotations(const Program& program);

    /// Loads the bundled annotation data file for the dialect from `dataDir`
    /// (swipl.pl / sicstus.pl). Throws std::runtime_error when missing.
    std::vector<ReadDiagnostic> loadBuiltins(const std::string& dataDir);

    /// Loads an additional annotation file into the built-in table.
    std::vector<ReadDiagnostic> loadAnnotationFile(const std::string& path, Origin origin);

    /// Seeds generated pre/postconditions for every program predicate that
    /// has no user annotation of the respective kind.
    void prepareInitialConditions(const Program& program);

    const Conditions* find(const PredicateIndicator& pi) const;
    const Conditions* findBuiltin(const std::string& name, int arity) const;

    /// Installs/updates the inferred all-any-premise postcondition for `pi`
    /// when `conclusion` is strictly more precise than the current one.
    /// User/builtin posts are never touched. Returns true when changed.
    bool updateInferredPost(const PredicateIndicator& pi, const std::vector<Spec>& conclusion);

    const std::map<PredicateIndicator, Conditions>& table() const { return table_; }

private:
    std::vector<ReadDiagnostic> registerDirectives(const std::vector<Directive>& directives,
                                                   const Program* moduleContext, Origin origin);

    std::map<PredicateIndicator, Conditions> table_;
    std::map<std::pair<std::string, int>, Conditions> builtins_;
    TypeDefs defs_;
    Dialect dialect_;
};

struct LookupResult {
    enum class Status { Found, Unknown };
    Status status = Status::Unknown;
    const Conditions* conditions = nullptr;
    PredicateIndicator resolved;
};

/// Resolves goals to conditions: explicit module qualifier, the caller
/// module's own predicates, imports via use_module, the global user module,
/// then the built-in table. Everything else is unknown.
class Resolver {
public:
    Resolver(const Program& program, const SpecDb& db);

    LookupResult lookup(const Term& goal, const std::string& callerModule) const;

private:
    const SpecDb& db_;
    std::map<std::string, const FileModule*> modulesByName_;
};

}  // namespace plstatic
