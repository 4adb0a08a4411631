#include "plstatic/spec_db.hpp"

#include "plstatic/abstraction.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"

#include <filesystem>
#include <sstream>

namespace plstatic {

namespace {

bool hasOrigin(const std::vector<PreEntry>& entries, Origin origin) {
    for (const auto& e : entries) {
        if (e.origin == origin) return true;
    }
    return false;
}

bool hasOrigin(const std::vector<PostEntry>& entries, Origin origin) {
    for (const auto& e : entries) {
        if (e.origin == origin) return true;
    }
    return false;
}

/// Checks that every user type referenced in `s` is defined; unlike
/// normalize this never widens, so large defspec bodies survive verbatim.
void collectUndefined(const Spec& s, const TypeDefs& defs, std::vector<std::string>& out) {
    if (s.is(SpecKind::UserDef) &&
        !defs.defined(s.name(), static_cast<int>(s.args().size()))) {
        out.push_back(s.name() + "/" + std::to_string(s.args().size()));
    }
    for (const Spec& a : s.args()) collectUndefined(a, defs, out);
}

std::optional<std::pair<std::string, int>> predIndicator(const TermPtr& t) {
    if (!t->isCompound("/", 2) || !t->args[0]->isAtom() || t->args[1]->kind != TermKind::Int) {
        return std::nullopt;
    }
    return std::make_pair(t->args[0]->text, static_cast<int>(t->args[1]->intValue));
}

struct ParsedAnnotation {
    enum class Kind { SpecPre, SpecPost, DefSpec, None };
    Kind kind = Kind::None;
    std::string name;
    int arity = 0;
    std::vector<Spec> first;   // pre vector or post premise
    std::vector<Spec> second;  // post conclusion
    std::string defName;
    TypeDef def;
    std::string error;
};

std::optional<std::vector<Spec>> specVector(const TermPtr& listTerm, Dialect dialect,
                                            std::string& error) {
    auto elements = listTerm->properListElements();
    if (!elements) {
        error = "annotation argument is not a list of specs";
        return std::nullopt;
    }
    std::vector<Spec> specs;
    for (const auto& e : *elements) {
        Spec s = specFromTerm(*e, dialect);
        if (s.isError()) {
            error = s.str() == "none" ? "malformed spec expression" : s.str();
            error = "malformed spec expression in annotation";
            if (!s.name().empty()) error += ": " + s.name();
            return std::nullopt;
        }
        specs.push_back(std::move(s));
    }
    return specs;
}

ParsedAnnotation parseAnnotation(const Term& goal, Dialect dialect) {
    ParsedAnnotation out;
    if (goal.isCompound("spec_pre", 2) || goal.isCompound("spec_post", 3)) {
        auto pi = predIndicator(goal.args[0]);
        if (!pi) {
            out.error = "first argument must be Name/Arity";
            return out;
        }
        out.name = pi->first;
        out.arity = pi->second;
        std::string error;
        auto first = specVector(goal.args[1], dialect, error);
        if (!first) {
            out.error = error;
            return out;
        }
        if (static_cast<int>(first->size()) != out.arity) {
            std::ostringstream msg;
            msg << "arity mismatch: " << out.name << "/" << out.arity << " given "
                << first->size() << " specs";
            out.error = msg.str();
            return out;
        }
        out.first = std::move(*first);
        if (goal.isCompound("spec_post", 3)) {
            auto second = specVector(goal.args[2], dialect, error);
            if (!second) {
                out.error = error;
                return out;
            }
            if (static_cast<int>(second->size()) != out.arity) {
                std::ostringstream msg;
                msg << "arity mismatch: " << out.name << "/" << out.arity << " given "
                    << second->size() << " specs in conclusion";
                out.error = msg.str();
                return out;
            }
            out.second = std::move(*second);
            out.kind = ParsedAnnotation::Kind::SpecPost;
        } else {
            out.kind = ParsedAnnotation::Kind::SpecPre;
        }
        return out;
    }
    if (goal.isCompound("defspec", 2)) {
        const Term& head = *goal.args[0];
        std::vector<std::string> params;
        if (head.isAtom()) {
            out.defName = head.text;
        } else if (head.isCompound()) {
            out.defName = head.text;
            for (const auto& p : head.args) {
                Spec s = specFromTerm(*p, dialect);
                if (!s.is(SpecKind::SpecVar)) {
                    out.error = "defspec parameters must be specvar(_) terms";
                    return out;
                }
                params.push_back(s.name());
            }
        } else {
            out.error = "defspec head must be an atom or compound";
            return out;
        }
        Spec body = specFromTerm(*goal.args[1], dialect);
        if (body.isError()) {
            out.error = "malformed defspec body";
            if (!body.name().empty()) out.error += ": " + body.name();
            return out;
        }
        out.def = TypeDef{std::move(params), std::move(body)};
        out.kind = ParsedAnnotation::Kind::DefSpec;
        return out;
    }
    return out;
}

}  // namespace

bool Conditions::hasUserPre() const { return hasOrigin(pres, Origin::User); }
bool Conditions::hasUserPost() const { return hasOrigin(posts, Origin::User); }

std::vector<ReadDiagnostic> SpecDb::registerDirectives(const std::vector<Directive>& directives,
                                                       const Program* moduleContext,
                                                       Origin origin) {
    std::vector<ReadDiagnostic> diags;
    auto warn = [&](const SourceLoc& loc, const std::string& message) {
        diags.push_back({ReadDiagnostic::Severity::Warning, loc, message});
    };
    auto err = [&](const SourceLoc& loc, const std::string& message) {
        diags.push_back({ReadDiagnostic::Severity::Error, loc, message});
    };

    // two passes: defspecs first so pre/post validation can resolve names
    for (const auto& directive : directives) {
        if (!directive.goal->isCompound("defspec", 2)) continue;
        ParsedAnnotation a = parseAnnotation(*directive.goal, dialect_);
        if (!a.error.empty()) {
            err(directive.loc, a.error);
        } else if (a.kind == ParsedAnnotation::Kind::DefSpec) {
            if (!defs_.add(a.defName, a.def)) {
                warn(directive.loc, "duplicate defspec " + a.defName + " ignored");
            }
        }
    }

    for (const auto& directive : directives) {
        const Term& goal = *directive.goal;
        bool isPre = goal.isCompound("spec_pre", 2);
        bool isPost = goal.isCompound("spec_post", 3);
        if (!isPre && !isPost) continue;
        ParsedAnnotation a = parseAnnotation(goal, dialect_);
        if (!a.error.empty()) {
            err(directive.loc, a.error);
            continue;
        }

        std::vector<std::string> undefined;
        for (const Spec& s : a.first) collectUndefined(s, defs_, undefined);
        for (const Spec& s : a.second) collectUndefined(s, defs_, undefined);
        if (!undefined.empty()) {
            err(directive.loc, "undefined spec: " + undefined.front());
            continue;
        }

        // type-variable markers carry no meaning in preconditions/premises
        bool strippedMarker = false;
        for (Spec& s : a.first) {
            if (s.containsMarker()) {
                s = stripMarkers(s);
                strippedMarker = true;
            }
        }
        if (strippedMarker) {
            warn(directive.loc, "union/compatible markers ignored outside post conclusions");
        }

        for (Spec& s : a.first) s = normalize(s, defs_);
        for (Spec& s : a.second) s = normalize(s, defs_);

        PredicateIndicator pi;
        pi.name = a.name;
        pi.arity = a.arity;
        Conditions* conds;
        if (moduleContext) {
            pi.module = moduleContext->moduleName(directive.loc.file);
            conds = &table_[pi];
        } else {
            conds = &builtins_[{a.name, a.arity}];
        }
        conds->arity = a.arity;
        if (isPre) {
            conds->pres.push_back({std::move(a.first), origin});
        } else {
            conds->posts.push_back({std::move(a.first), std::move(a.second), origin});
        }
    }
    return diags;
}

std::vector<ReadDiagnostic> SpecDb::registerAnnotations(const Program& program) {
    return registerDirectives(program.directives, &program, Origin::User);
}

std::vector<ReadDiagnostic> SpecDb::loadAnnotationFile(const std::string& path, Origin origin) {
    Program annotations;
    Reader reader(dialect_);
    reader.readFile(path, annotations);
    std::vector<ReadDiagnostic> diags = std::move(annotations.diagnostics);
    auto more = registerDirectives(annotations.directives, nullptr, origin);
    diags.insert(diags.end(), more.begin(), more.end());
    return diags;
}

std::vector<ReadDiagnostic> SpecDb::loadBuiltins(const std::string& dataDir) {
    std::filesystem::path file =
        std::filesystem::path(dataDir) / (dialectName(dialect_) + ".pl");
    if (!std::filesystem::exists(file)) {
        throw std::runtime_error("missing annotation data file: " + file.string());
    }
    return loadAnnotationFile(file.string(), Origin::Builtin);
}

void SpecDb::prepareInitialConditions(const Program& program) {
    for (const auto& [pi, def] : program.predicates) {
        Conditions& conds = table_[pi];
        conds.arity = pi.arity;
        if (!conds.hasUserPre()) {
            // one folded vector: each position admits var or any clause-head shape
            std::vector<Spec> folded(pi.arity, Spec::any());
            for (int i = 0; i < pi.arity; ++i) {
                std::vector<Spec> alternatives{Spec::var()};
                for (const Clause& clause : def.clauses) {
                    alternatives.push_back(relaxLiteral(abstractTerm(clause.head->args[i])));
                }
                folded[i] = normalize(Spec::oneOf(std::move(alternatives)), defs_);
            }
            conds.pres.push_back({std::move(folded), Origin::Generated});
        }
        if (!conds.hasUserPost()) {
            std::vector<Spec> premise(pi.arity, Spec::any());
            std::vector<Spec> conclusion(pi.arity, Spec::any());
            for (int i = 0; i < pi.arity; ++i) {
                Spec acc = Spec::error("empty");
                for (const Clause& clause : def.clauses) {
                    acc = lub(acc, relaxLiteral(abstractTerm(clause.head->args[i])), defs_);
                }
                // the same widening inferred conclusions get, so Phase 2
                // compares like with like
                conclusion[i] = acc.isError()
                                    ? Spec::any()
                                    : conclusionSpec(normalize(acc, defs_), defs_);
            }
            conds.posts.push_back({std::move(premise), std::move(conclusion), Origin::Generated});
        }
    }
}

const Conditions* SpecDb::find(const PredicateIndicator& pi) const {
    auto it = table_.find(pi);
    return it == table_.end() ? nullptr : &it->second;
}

const Conditions* SpecDb::findBuiltin(const std::string& name, int arity) const {
    auto it = builtins_.find({name, arity});
    return it == builtins_.end() ? nullptr : &it->second;
}

bool SpecDb::updateInferredPost(const PredicateIndicator& pi,
                                const std::vector<Spec>& conclusion) {
    auto it = table_.find(pi);
    if (it == table_.end()) return false;
    Conditions& conds = it->second;

    PostEntry* target = nullptr;
    for (PostEntry& post : conds.posts) {
        if (post.origin != Origin::Generated && post.origin != Origin::Inferred) continue;
        bool allAny = true;
        for (const Spec& p : post.premise) {
            if (!p.is(SpecKind::Any)) allAny = false;
        }
        if (allAny) {
            target = &post;
            break;
        }
    }
    if (!target) {
        // predicate only has user/builtin posts: add the inferred one alongside
        bool informative = false;
        for (const Spec& c : conclusion) {
            if (!c.is(SpecKind::Any)) informative = true;
        }
        if (!informative) return false;
        conds.posts.push_back(
            {std::vector<Spec>(pi.arity, Spec::any()), conclusion, Origin::Inferred});
        return true;
    }

    // replace only when strictly more precise position-wise
    bool allBelow = true;
    bool someStrict = false;
    for (int i = 0; i < pi.arity; ++i) {
        if (!subtype(conclusion[i], target->conclusion[i], defs_)) allBelow = false;
        else if (!subtype(target->conclusion[i], conclusion[i], defs_)) someStrict = true;
    }
    if (!allBelow || !someStrict) {
        // analysis confirmed the generated conclusion verbatim: it is now an
        // inferred fact worth emitting, but nothing changed semantically
        if (allBelow && target->origin == Origin::Generated &&
            target->conclusion == conclusion) {
            target->origin = Origin::Inferred;
        }
        return false;
    }
    target->conclusion = conclusion;
    target->origin = Origin::Inferred;
    return true;
}

Resolver::Resolver(const Program& program, const SpecDb& db) : db_(db) {
    for (const auto& [file, mod] : program.fileModules) {
        modulesByName_.emplace(mod.name, &mod);
    }
}

LookupResult Resolver::lookup(const Term& goal, const std::string& callerModule) const {
    LookupResult result;
    const Term* g = &goal;
    std::string explicitModule;
    if (g->isCompound(":", 2) && g->args[0]->isAtom()) {
        explicitModule = g->args[0]->text;
        g = g->args[1].get();
    }
    if (!g->isCallable()) {
        result.resolved = {callerModule, "$meta", 0};
        return result;  // variable goal: unknown
    }
    std::string name = g->text;
    int arity = static_cast<int>(g->arity());
    result.resolved = {callerModule, name, arity};

    auto found = [&](const Conditions* conds, std::string module) {
        result.status = LookupResult::Status::Found;
        result.conditions = conds;
        result.resolved = {std::move(module), name, arity};
        return result;
    };

    if (!explicitModule.empty()) {
        if (const Conditions* c = db_.find({explicitModule, name, arity})) {
            return found(c, explicitModule);
        }
        if (const Conditions* c = db_.findBuiltin(name, arity)) {
            return found(c, explicitModule);
        }
        result.resolved.module = explicitModule;
        return result;
    }

    if (const Conditions* c = db_.find({callerModule, name, arity})) {
        return found(c, callerModule);
    }

    auto moduleIt = modulesByName_.find(callerModule);
    if (moduleIt != modulesByName_.end()) {
        for (const UseModule& use : moduleIt->second->uses) {
            auto imported = modulesByName_.find(use.target);
            if (imported == modulesByName_.end()) continue;
            if (use.imports) {
                bool listed = false;
                for (const auto& [n, a] : *use.imports) {
                    if (n == name && a == arity) listed = true;
                }
                if (!listed) continue;
            }
            bool exported = false;
            for (const auto& [n, a] : imported->second->exports) {
                if (n == name && a == arity) exported = true;
            }
            if (!exported) continue;
            if (const Conditions* c = db_.find({use.target, name, arity})) {
                return found(c, use.target);
            }
        }
    }

    if (callerModule != "user") {
        if (const Conditions* c = db_.find({"user", name, arity})) {
            return found(c, "user");
        }
    }
    if (const Conditions* c = db_.findBuiltin(name, arity)) {
        return found(c, "builtins");
    }
    return result;
}

}  // namespace plstatic
