#include "plstatic/analyzer.hpp"

#include "plstatic/abstraction.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace plstatic {

namespace {

bool isControlAtom(const Term& t, const char* name) {
    return t.isAtom(name);
}

/// Positionwise join of the surviving precondition vectors.
std::vector<Spec> joinPres(const std::vector<const PreEntry*>& pres, int arity,
                           const TypeDefs& defs) {
    std::vector<Spec> out(arity, Spec::any());
    for (int i = 0; i < arity; ++i) {
        Spec acc = Spec::error("empty");
        for (const PreEntry* pre : pres) acc = lub(acc, pre->specs[i], defs);
        out[i] = acc.isError() ? Spec::any() : acc;
    }
    return out;
}

/// Component constraint a parent's domain imposes on argument `index` of an
/// f/n compound term.
Spec componentOf(const Spec& dom, const std::string& functor, size_t arity, size_t index,
                 const TypeDefs& defs) {
    switch (dom.kind()) {
        case SpecKind::Compound:
            if (dom.name() == functor && dom.args().size() == arity) return dom.args()[index];
            return Spec::any();
        case SpecKind::Ground:
            return Spec::ground();
        case SpecKind::And: {
            Spec acc = Spec::any();
            for (const Spec& c : dom.args()) {
                acc = meet(acc, componentOf(c, functor, arity, index, defs), defs,
                           MeetPolicy::Strict);
            }
            return acc;
        }
        case SpecKind::OneOf: {
            Spec acc = Spec::error("empty");
            for (const Spec& alt : dom.args()) {
                switch (alt.kind()) {
                    case SpecKind::Compound:
                        if (alt.name() != functor || alt.args().size() != arity) continue;
                        [[fallthrough]];
                    case SpecKind::Ground:
                    case SpecKind::Any:
                    case SpecKind::Nonvar:
                    case SpecKind::CompoundAny:
                    case SpecKind::And:
                        acc = lub(acc, componentOf(alt, functor, arity, index, defs), defs);
                        break;
                    default:
                        break;  // shapes this term cannot take
                }
            }
            return acc.isError() ? Spec::any() : acc;
        }
        default:
            return Spec::any();
    }
}

Spec headComponent(const Spec& dom, const TypeDefs& defs) {
    switch (dom.kind()) {
        case SpecKind::List: return dom.args()[0];
        case SpecKind::Tuple: return dom.args()[0];
        case SpecKind::Compound:
            if (dom.name() == "." && dom.args().size() == 2) return dom.args()[0];
            return Spec::any();
        case SpecKind::Ground: return Spec::ground();
        case SpecKind::And: {
            Spec acc = Spec::any();
            for (const Spec& c : dom.args()) {
                acc = meet(acc, headComponent(c, defs), defs, MeetPolicy::Strict);
            }
            return acc;
        }
        case SpecKind::OneOf: {
            Spec acc = Spec::error("empty");
            for (const Spec& alt : dom.args()) {
                if (alt.is(SpecKind::EmptyList) || alt.is(SpecKind::Var) ||
                    alt.is(SpecKind::Atomic) || alt.is(SpecKind::Atom) ||
                    alt.is(SpecKind::Number) || alt.is(SpecKind::Int) ||
                    alt.is(SpecKind::Float) || alt.is(SpecKind::Str) ||
                    alt.is(SpecKind::Exact)) {
                    continue;  // a cons term cannot take these shapes
                }
                acc = lub(acc, headComponent(alt, defs), defs);
            }
            return acc.isError() ? Spec::any() : acc;
        }
        default:
            return Spec::any();
    }
}

Spec tailComponent(const Spec& dom, const TypeDefs& defs) {
    switch (dom.kind()) {
        case SpecKind::List: return dom;
        case SpecKind::Tuple: {
            if (dom.args().size() == 1) return Spec::emptyList();
            return Spec::tuple({dom.args().begin() + 1, dom.args().end()});
        }
        case SpecKind::Compound:
            if (dom.name() == "." && dom.args().size() == 2) return dom.args()[1];
            return Spec::any();
        case SpecKind::Ground: return Spec::ground();
        case SpecKind::And: {
            Spec acc = Spec::any();
            for (const Spec& c : dom.args()) {
                acc = meet(acc, tailComponent(c, defs), defs, MeetPolicy::Strict);
            }
            return acc;
        }
        case SpecKind::OneOf: {
            Spec acc = Spec::error("empty");
            for (const Spec& alt : dom.args()) {
                if (alt.is(SpecKind::EmptyList) || alt.is(SpecKind::Var) ||
                    alt.is(SpecKind::Atomic) || alt.is(SpecKind::Atom) ||
                    alt.is(SpecKind::Number) || alt.is(SpecKind::Int) ||
                    alt.is(SpecKind::Float) || alt.is(SpecKind::Str) ||
                    alt.is(SpecKind::Exact)) {
                    continue;
                }
                acc = lub(acc, tailComponent(alt, defs), defs);
            }
            return acc.isError() ? Spec::any() : acc;
        }
        default:
            return Spec::any();
    }
}

/// Per-element type contributions of a list-shaped domain (tuples keep their
/// positions separate so compatibility checks see each element).
void elementContributions(const Spec& dom, const TypeDefs& defs, std::vector<Spec>& out) {
    switch (dom.kind()) {
        case SpecKind::List:
            out.push_back(dom.args()[0]);
            return;
        case SpecKind::Tuple:
            for (const Spec& a : dom.args()) out.push_back(a);
            return;
        case SpecKind::Compound:
            if (dom.name() == "." && dom.args().size() == 2) {
                out.push_back(dom.args()[0]);
                elementContributions(dom.args()[1], defs, out);
            }
            return;
        case SpecKind::OneOf: {
            // an undetermined shape: contribute the join of element types
            Spec acc = Spec::error("empty");
            for (const Spec& alt : dom.args()) {
                std::vector<Spec> parts;
                elementContributions(alt, defs, parts);
                for (const Spec& p : parts) acc = lub(acc, p, defs);
            }
            if (!acc.isError()) out.push_back(acc);
            return;
        }
        case SpecKind::EmptyList:
        default:
            return;  // no element information
    }
}

std::string describeNode(const EnvNode& node) {
    if (node.term) return printTerm(node.term);
    return node.name.empty() ? "<artificial>" : node.name;
}

}  // namespace

bool ClauseAnalyzer::meetInto(Env& env, int nodeId, const Spec& constraint, MeetPolicy policy,
                              const SourceLoc& loc, const std::string& what) {
    EnvNode& node = env.node(nodeId);
    if (node.dom.isError()) return false;
    if (constraint.is(SpecKind::Any)) return false;  // no information
    Spec merged = normalize(meet(node.dom, constraint, db_.typeDefs(), policy), db_.typeDefs());
    if (merged == node.dom) return false;
    Spec old = node.dom;
    node.dom = merged;
    if (merged.isError() && !node.errorRecorded) {
        node.errorRecorded = true;
        std::string subject =
            node.isWatcherPart
                ? "arguments of " + env.context().str() + " violate its precondition set"
                : "conflicting types for " + describeNode(node) + (what.empty() ? "" : " " + what);
        env.recordError(node.term && node.term->loc.line ? node.term->loc : loc, subject,
                        constraint, old);
    }
    return true;
}

Env ClauseAnalyzer::initEnv(const Clause& clause, const PredicateIndicator& pi,
                            const std::vector<PreEntry>& pres) {
    Env env(pi, clause.loc);
    int arity = pi.arity;
    std::vector<int> argNodes;
    std::vector<Spec> argAbstractions;
    for (int i = 0; i < arity; ++i) {
        argNodes.push_back(env.nodeFor(clause.head->args[i]));
        argAbstractions.push_back(normalize(abstractTerm(clause.head->args[i]), db_.typeDefs()));
    }

    // at least one precondition vector must admit the head literals
    std::vector<const PreEntry*> survivors;
    for (const PreEntry& pre : pres) {
        bool ok = true;
        for (int i = 0; i < arity && ok; ++i) {
            Spec m = meet(argAbstractions[i], pre.specs[i], db_.typeDefs(), MeetPolicy::Unify);
            if (m.isError()) ok = false;
        }
        if (ok) survivors.push_back(&pre);
    }

    if (survivors.empty() && !pres.empty()) {
        std::vector<Spec> expectedTuples;
        for (const PreEntry& pre : pres) expectedTuples.push_back(Spec::tuple(pre.specs));
        env.recordError(clause.loc,
                        "head of " + pi.str() + " violates all of its preconditions",
                        normalize(Spec::oneOf(expectedTuples), db_.typeDefs()),
                        Spec::tuple(argAbstractions));
    } else if (!survivors.empty()) {
        std::vector<Spec> joined = joinPres(survivors, arity, db_.typeDefs());
        for (int i = 0; i < arity; ++i) {
            // the caller's argument unifies with the head literal; a head
            // variable simply takes whatever the precondition admits
            MeetPolicy policy = clause.head->args[i]->isVar() ? MeetPolicy::Bind
                                                              : MeetPolicy::Unify;
            Spec merged = normalize(
                meet(env.dom(argNodes[i]), joined[i], db_.typeDefs(), policy), db_.typeDefs());
            if (merged.isError() && !env.node(argNodes[i]).errorRecorded) {
                env.node(argNodes[i]).errorRecorded = true;
                env.recordError(clause.loc,
                                "head argument " + std::to_string(i + 1) + " of " + pi.str() +
                                    " conflicts with its preconditions",
                                joined[i], env.dom(argNodes[i]));
            }
            env.setDom(argNodes[i], std::move(merged));
            if (joined[i].is(SpecKind::Var)) env.node(argNodes[i]).varFromAnnotation = true;
        }
    }

    // watcher: an artificial argument-vector list holding whole precondition
    // tuples, so cross-argument constraints are not lost to distribution
    if (arity == 0) {
        int w = env.addSynthetic(Term::makeAtom("[]"), "[]", Spec::emptyList());
        env.node(w).isWatcherPart = true;
        env.setWatcher(w);
        return env;
    }
    const std::vector<const PreEntry*>& watched = survivors;
    TermPtr chain = Term::makeAtom("[]");
    std::vector<TermPtr> suffixTerms(arity);
    for (int i = arity - 1; i >= 0; --i) {
        chain = Term::makeCompound(".", {clause.head->args[i], chain});
        suffixTerms[i] = chain;
    }
    int firstSuffix = -1;
    for (int i = 0; i < arity; ++i) {
        std::vector<Spec> options;
        for (const PreEntry* pre : watched) {
            options.push_back(Spec::tuple({pre->specs.begin() + i, pre->specs.end()}));
        }
        Spec dom = options.empty() ? Spec::error("head violates all preconditions")
                                   : normalize(Spec::oneOf(std::move(options)), db_.typeDefs());
        int id = env.addSynthetic(suffixTerms[i], "", std::move(dom));
        env.node(id).isWatcherPart = true;
        if (i == 0) firstSuffix = id;
        if (watched.empty()) env.node(id).errorRecorded = true;  // already reported
    }
    env.setWatcher(firstSuffix);
    return env;
}

std::vector<const PreEntry*> ClauseAnalyzer::checkPre(Env& env, const std::vector<int>& argNodes,
                                                      const Conditions& conds,
                                                      const PredicateIndicator& pi,
                                                      const SourceLoc& loc) {
    std::vector<const PreEntry*> surviving;
    if (conds.pres.empty()) return surviving;  // no constraint recorded
    int arity = static_cast<int>(argNodes.size());
    for (const PreEntry& pre : conds.pres) {
        bool ok = true;
        for (int i = 0; i < arity && ok; ++i) {
            Spec m = meet(env.dom(argNodes[i]), pre.specs[i], db_.typeDefs(), MeetPolicy::Strict);
            if (m.isError()) ok = false;
        }
        if (ok) surviving.push_back(&pre);
    }
    if (surviving.empty()) {
        // find a position on which every precondition conflicts
        int position = -1;
        for (int i = 0; i < arity && position < 0; ++i) {
            bool allConflict = true;
            for (const PreEntry& pre : conds.pres) {
                Spec m =
                    meet(env.dom(argNodes[i]), pre.specs[i], db_.typeDefs(), MeetPolicy::Strict);
                if (!m.isError()) allConflict = false;
            }
            if (allConflict) position = i;
        }
        std::ostringstream msg;
        msg << "no precondition of " << pi.str() << " is satisfiable";
        Spec expected;
        Spec actual;
        if (position >= 0) {
            msg << ": argument " << (position + 1) << " conflicts with every alternative";
            std::vector<Spec> alts;
            for (const PreEntry& pre : conds.pres) alts.push_back(pre.specs[position]);
            expected = normalize(Spec::oneOf(std::move(alts)), db_.typeDefs());
            actual = env.dom(argNodes[position]);
        } else {
            std::vector<Spec> alts;
            for (const PreEntry& pre : conds.pres) alts.push_back(Spec::tuple(pre.specs));
            expected = normalize(Spec::oneOf(std::move(alts)), db_.typeDefs());
            std::vector<Spec> doms;
            for (int n : argNodes) doms.push_back(env.dom(n));
            actual = Spec::tuple(std::move(doms));
        }
        env.recordError(loc, msg.str(), std::move(expected), std::move(actual));
        return surviving;
    }

    // narrow by the join of the surviving vectors; a callee precondition
    // never renders a variable non-variable
    std::vector<Spec> joined = joinPres(surviving, arity, db_.typeDefs());
    for (int i = 0; i < arity; ++i) {
        meetInto(env, argNodes[i], joined[i], MeetPolicy::Narrow, loc,
                 "required by " + pi.str());
        if (joined[i].is(SpecKind::Var)) env.node(argNodes[i]).varFromAnnotation = true;
    }
    return surviving;
}

void ClauseAnalyzer::applyPosts(Env& env, const std::vector<int>& argNodes,
                                const Conditions& conds, const SourceLoc& loc) {
    int arity = static_cast<int>(argNodes.size());
    for (const PostEntry& post : conds.posts) {
        bool premiseHolds = true;
        for (int i = 0; i < arity && premiseHolds; ++i) {
            if (!subtype(env.dom(argNodes[i]), post.premise[i], db_.typeDefs())) {
                premiseHolds = false;
            }
        }
        if (!premiseHolds) continue;
        std::map<std::string, int> tvInstances;
        for (int i = 0; i < arity; ++i) {
            applyConclusion(env, argNodes[i], post.conclusion[i], tvInstances, loc);
        }
    }
}

void ClauseAnalyzer::applyConclusion(Env& env, int nodeId, const Spec& conclusion,
                                     std::map<std::string, int>& tvInstances,
                                     const SourceLoc& loc) {
    Spec stripped = normalize(stripMarkers(conclusion), db_.typeDefs());
    meetInto(env, nodeId, stripped, MeetPolicy::Bind, loc, "promised by a postcondition");
    if (conclusion.is(SpecKind::Var)) env.node(nodeId).varFromAnnotation = true;
    if (conclusion.containsMarker()) wireMarkers(env, nodeId, conclusion, tvInstances, loc);
}

void ClauseAnalyzer::wireMarkers(Env& env, int nodeId, const Spec& spec,
                                 std::map<std::string, int>& tvInstances, const SourceLoc& loc) {
    auto tvNode = [&](const std::string& name) {
        auto it = tvInstances.find(name);
        if (it != tvInstances.end()) return it->second;
        int id = env.typeVarNode(name + "#g" + std::to_string(goalCounter_));
        tvInstances[name] = id;
        return id;
    };

    switch (spec.kind()) {
        case SpecKind::UnionVar:
            env.addEdge(nodeId, tvNode(spec.name()), EdgeKind::Union);
            return;
        case SpecKind::CompatVar:
            env.addEdge(nodeId, tvNode(spec.name()), EdgeKind::Compatible);
            return;
        case SpecKind::List: {
            const Spec& inner = spec.args()[0];
            if (!inner.containsMarker()) return;
            const TermPtr& term = env.node(nodeId).term;
            if (term && (term->isCons() || term->isNil())) {
                // known list structure: pass the inner type down per element
                const Term* current = term.get();
                while (current->isCons()) {
                    int elem = env.nodeFor(current->args[0]);
                    wireMarkers(env, elem, inner, tvInstances, loc);
                    const TermPtr& tail = current->args[1];
                    if (tail->isVar()) {
                        int tailNode = env.nodeFor(tail);
                        wireMarkers(env, tailNode, spec, tvInstances, loc);
                        break;
                    }
                    current = tail.get();
                }
                return;
            }
            if (term && term->isVar()) {
                // elements unknown as yet: delay via a has-type holder
                EdgeKind marker = inner.is(SpecKind::CompatVar) ? EdgeKind::Compatible
                                                                : EdgeKind::Union;
                if (inner.is(SpecKind::UnionVar) || inner.is(SpecKind::CompatVar)) {
                    int holder = env.holderNode(nodeId, marker);
                    env.addEdge(holder, tvNode(inner.name()), marker);
                }
                return;
            }
            return;
        }
        case SpecKind::Tuple: {
            const TermPtr& term = env.node(nodeId).term;
            auto elements = term ? term->properListElements() : std::nullopt;
            if (elements && elements->size() == spec.args().size()) {
                for (size_t i = 0; i < elements->size(); ++i) {
                    if (!spec.args()[i].containsMarker()) continue;
                    wireMarkers(env, env.nodeFor((*elements)[i]), spec.args()[i], tvInstances,
                                loc);
                }
                return;
            }
            if (term && term->isVar()) {
                std::vector<TermPtr> parts;
                for (size_t i = 0; i < spec.args().size(); ++i) {
                    parts.push_back(
                        Term::makeVar("T__" + std::to_string(env.nextArtificialId()), -1));
                }
                TermPtr templateTerm = Term::makeList(parts);
                int templ = env.addSynthetic(templateTerm, "", Spec::tuple(std::vector<Spec>(
                                                                   spec.args().size(), Spec::any())));
                env.addEdge(nodeId, templ, EdgeKind::ArtificialLink);
                for (size_t i = 0; i < parts.size(); ++i) {
                    if (!spec.args()[i].containsMarker()) continue;
                    wireMarkers(env, env.nodeFor(parts[i]), spec.args()[i], tvInstances, loc);
                }
            }
            return;
        }
        case SpecKind::Compound: {
            const TermPtr& term = env.node(nodeId).term;
            if (term && term->isCompound(spec.name(), spec.args().size())) {
                for (size_t i = 0; i < spec.args().size(); ++i) {
                    if (!spec.args()[i].containsMarker()) continue;
                    wireMarkers(env, env.nodeFor(term->args[i]), spec.args()[i], tvInstances,
                                loc);
                }
                return;
            }
            if (term && term->isVar()) {
                // mimic unification: an artificial template term linked to the variable
                std::vector<TermPtr> parts;
                for (size_t i = 0; i < spec.args().size(); ++i) {
                    parts.push_back(
                        Term::makeVar("T__" + std::to_string(env.nextArtificialId()), -1));
                }
                TermPtr templateTerm = Term::makeCompound(spec.name(), parts);
                int templ = env.addSynthetic(
                    templateTerm, "",
                    Spec::compound(spec.name(),
                                   std::vector<Spec>(spec.args().size(), Spec::any())));
                env.addEdge(nodeId, templ, EdgeKind::ArtificialLink);
                for (size_t i = 0; i < parts.size(); ++i) {
                    if (!spec.args()[i].containsMarker()) continue;
                    wireMarkers(env, env.nodeFor(parts[i]), spec.args()[i], tvInstances, loc);
                }
            }
            return;
        }
        default:
            return;  // markers under one_of/and are ambiguous; constraint part applied already
    }
}

void ClauseAnalyzer::evaluateBody(Env& env, const std::vector<TermPtr>& goals) {
    for (const TermPtr& goal : goals) evalGoal(env, goal);
}

void ClauseAnalyzer::evalGoal(Env& env, const TermPtr& goal) {
    if (goal->isVar()) {
        ++goalCount_;
        ++goalCounter_;
        unknownCalls_.push_back({{env.context().module, "$meta-call", 0}, goal->loc});
        return;
    }
    if (goal->isCompound(",", 2)) {
        evalGoal(env, goal->args[0]);
        evalGoal(env, goal->args[1]);
        return;
    }
    if (isControlAtom(*goal, "true") || isControlAtom(*goal, "fail") ||
        isControlAtom(*goal, "false") || isControlAtom(*goal, "!")) {
        return;
    }
    if (goal->isCompound("\\+", 1)) {
        return;  // negation leaves no bindings behind
    }
    if (goal->isCompound(";", 2)) {
        evalDisjunction(env, goal);
        return;
    }
    if (goal->isCompound("->", 2) || goal->isCompound("*->", 2)) {
        evalGoal(env, goal->args[0]);
        evalGoal(env, goal->args[1]);
        return;
    }
    if (goal->isCompound("=", 2)) {
        evalUnification(env, goal);
        return;
    }
    evalCall(env, goal);
}

void ClauseAnalyzer::evalUnification(Env& env, const TermPtr& goal) {
    ++goalCount_;
    ++goalCounter_;
    int left = env.nodeFor(goal->args[0]);
    int right = env.nodeFor(goal->args[1]);
    Spec merged =
        normalize(meet(env.dom(left), env.dom(right), db_.typeDefs(), MeetPolicy::Unify),
                  db_.typeDefs());
    if (merged.isError()) {
        if (!env.node(left).errorRecorded) {
            env.node(left).errorRecorded = true;
            env.recordError(goal->loc, "unification cannot succeed", env.dom(right),
                            env.dom(left));
        }
        env.setDom(left, merged);
        env.setDom(right, merged);
        return;
    }
    env.setDom(left, merged);
    env.setDom(right, merged);
    env.addEdge(left, right, EdgeKind::ArtificialLink);
}

void ClauseAnalyzer::evalDisjunction(Env& env, const TermPtr& goal) {
    // collect the branches of a (possibly nested) disjunction; an if-then-else
    // contributes its condition+then as one branch
    std::vector<std::vector<TermPtr>> branches;
    std::function<void(const TermPtr&)> collect = [&](const TermPtr& t) {
        if (t->isCompound(";", 2)) {
            collect(t->args[0]);
            collect(t->args[1]);
            return;
        }
        if (t->isCompound("->", 2) || t->isCompound("*->", 2)) {
            branches.push_back({t->args[0], t->args[1]});
            return;
        }
        branches.push_back({t});
    };
    collect(goal);

    size_t baseErrors = env.errors().size();
    std::vector<Env> results;
    std::vector<bool> clean;
    for (const auto& branch : branches) {
        Env copy = env;
        evaluateBody(copy, branch);
        addStructuralEdges(copy);
        localFixpoint(copy);
        clean.push_back(copy.errors().size() == baseErrors);
        results.push_back(std::move(copy));
    }
    std::vector<const Env*> keep;
    for (size_t i = 0; i < results.size(); ++i) {
        if (clean[i]) keep.push_back(&results[i]);
    }
    if (keep.empty()) {
        // no branch can succeed; surface the first branch's conflicts
        env = std::move(results[0]);
        return;
    }
    // join the clean branches per node by lub; nodes a branch never touched
    // keep their pre-branch domain through the join
    Env joined = *keep[0];
    size_t commonNodes = env.nodes().size();
    for (size_t id = 0; id < commonNodes; ++id) {
        Spec acc = joined.dom(static_cast<int>(id));
        for (size_t k = 1; k < keep.size(); ++k) {
            acc = lub(acc, keep[k]->dom(static_cast<int>(id)), db_.typeDefs());
        }
        joined.setDom(static_cast<int>(id), normalize(acc, db_.typeDefs()));
    }
    // variables first seen inside later branches: join with var (unbound in
    // the branches that do not mention them)
    for (size_t k = 1; k < keep.size(); ++k) {
        const Env& other = *keep[k];
        for (size_t id = commonNodes; id < other.nodes().size(); ++id) {
            const EnvNode& node = other.nodes()[id];
            if (node.varId < 0 || !node.term) continue;
            int mine = joined.findVarNode(node.varId);
            if (mine >= 0) {
                Spec acc = lub(joined.dom(mine), node.dom, db_.typeDefs());
                joined.setDom(mine, normalize(acc, db_.typeDefs()));
            } else {
                int fresh = joined.nodeFor(node.term);
                Spec acc = lub(Spec::var(), node.dom, db_.typeDefs());
                joined.setDom(fresh, normalize(acc, db_.typeDefs()));
            }
        }
    }
    env = std::move(joined);
}

void ClauseAnalyzer::evalCall(Env& env, const TermPtr& goal) {
    ++goalCount_;
    ++goalCounter_;
    LookupResult lookup = resolver_.lookup(*goal, env.context().module);
    const Term* inner = goal.get();
    if (inner->isCompound(":", 2) && inner->args[0]->isAtom()) inner = inner->args[1].get();

    std::vector<int> argNodes;
    for (const TermPtr& arg : inner->args) argNodes.push_back(env.nodeFor(arg));

    if (lookup.status == LookupResult::Status::Unknown) {
        unknownCalls_.push_back({lookup.resolved, goal->loc});
        return;
    }
    const Conditions& conds = *lookup.conditions;
    std::vector<const PreEntry*> survivors =
        checkPre(env, argNodes, conds, lookup.resolved, goal->loc);
    if (survivors.empty() && !conds.pres.empty()) return;  // unsatisfiable call
    applyPosts(env, argNodes, conds, goal->loc);
}

void ClauseAnalyzer::addStructuralEdges(Env& env) {
    // nodes() grows while we walk it: index loop on purpose
    for (size_t id = 0; id < env.nodes().size(); ++id) {
        TermPtr term = env.nodes()[id].term;
        if (!term || !term->isCompound()) continue;
        if (term->isCons()) {
            int head = env.nodeFor(term->args[0]);
            env.addEdge(head, static_cast<int>(id), EdgeKind::IsHead);
            int tail = env.nodeFor(term->args[1]);
            env.addEdge(tail, static_cast<int>(id), EdgeKind::IsTail);
        } else {
            for (size_t i = 0; i < term->args.size(); ++i) {
                int child = env.nodeFor(term->args[i]);
                env.addEdge(child, static_cast<int>(id), EdgeKind::Pos, static_cast<int>(i));
            }
        }
    }
}

bool ClauseAnalyzer::propagateEdges(Env& env) {
    bool changed = false;
    const TypeDefs& defs = db_.typeDefs();
    for (size_t e = 0; e < env.edges().size(); ++e) {
        EnvEdge edge = env.edges()[e];
        switch (edge.kind) {
            case EdgeKind::Pos: {
                const EnvNode& parent = env.node(edge.to);
                std::string downWhat =
                    parent.isWatcherPart
                        ? "required by the precondition set of " + env.context().str()
                        : "";
                if (!parent.dom.isError()) {
                    Spec comp = componentOf(parent.dom, parent.term->text,
                                            parent.term->args.size(),
                                            static_cast<size_t>(edge.index), defs);
                    changed |= meetInto(env, edge.from, comp, MeetPolicy::Unify,
                                        parent.term->loc, downWhat);
                }
                if (!env.dom(edge.from).isError()) {
                    std::vector<Spec> args(env.node(edge.to).term->args.size(), Spec::any());
                    args[edge.index] = env.dom(edge.from);
                    Spec update = Spec::compound(env.node(edge.to).term->text, std::move(args));
                    changed |= meetInto(env, edge.to, update, MeetPolicy::Unify,
                                        env.node(edge.to).term->loc, "");
                }
                break;
            }
            case EdgeKind::IsHead: {
                std::string downWhat =
                    env.node(edge.to).isWatcherPart
                        ? "required by the precondition set of " + env.context().str()
                        : "";
                if (!env.dom(edge.to).isError()) {
                    Spec comp = headComponent(env.dom(edge.to), defs);
                    changed |= meetInto(env, edge.from, comp, MeetPolicy::Unify,
                                        env.node(edge.to).term->loc, downWhat);
                }
                if (!env.dom(edge.from).isError()) {
                    Spec update = Spec::compound(".", {env.dom(edge.from), Spec::any()});
                    changed |= meetInto(env, edge.to, update, MeetPolicy::Unify,
                                        env.node(edge.to).term->loc, "");
                }
                break;
            }
            case EdgeKind::IsTail: {
                std::string downWhat =
                    env.node(edge.to).isWatcherPart
                        ? "required by the precondition set of " + env.context().str()
                        : "";
                if (!env.dom(edge.to).isError()) {
                    Spec comp = tailComponent(env.dom(edge.to), defs);
                    changed |= meetInto(env, edge.from, comp, MeetPolicy::Unify,
                                        env.node(edge.to).term->loc, downWhat);
                }
                if (!env.dom(edge.from).isError()) {
                    Spec update = Spec::compound(".", {Spec::any(), env.dom(edge.from)});
                    changed |= meetInto(env, edge.to, update, MeetPolicy::Unify,
                                        env.node(edge.to).term->loc, "");
                }
                break;
            }
            case EdgeKind::ArtificialLink: {
                if (!env.dom(edge.from).isError()) {
                    changed |= meetInto(env, edge.to, env.dom(edge.from), MeetPolicy::Unify,
                                        env.clauseLoc(), "");
                }
                if (!env.dom(edge.to).isError()) {
                    changed |= meetInto(env, edge.from, env.dom(edge.to), MeetPolicy::Unify,
                                        env.clauseLoc(), "");
                }
                break;
            }
            case EdgeKind::HasType: {
                // keep the holder's displayed domain in sync with the
                // element type of its owner
                const EnvNode& owner = env.node(edge.from);
                if (owner.dom.isError()) break;
                std::vector<Spec> parts;
                elementContributions(owner.dom, defs, parts);
                if (parts.empty()) break;
                Spec acc = Spec::error("empty");
                for (const Spec& p : parts) acc = lub(acc, p, defs);
                if (!acc.isError()) {
                    changed |= meetInto(env, edge.to, acc, MeetPolicy::Unify, env.clauseLoc(), "");
                }
                break;
            }
            default:
                break;  // union/compatible edges are resolved separately
        }
    }
    return changed;
}

bool ClauseAnalyzer::resolveTypeVars(Env& env) {
    bool changed = false;
    const TypeDefs& defs = db_.typeDefs();
    for (int tv : env.typeVarNodes()) {
        // union contributions first; exact atoms widen only when the union
        // mixes them with other types, a pure enumeration of atoms is kept
        std::vector<Spec> unionParts;
        for (const EnvEdge& edge : env.edges()) {
            if (edge.to != tv || edge.kind != EdgeKind::Union) continue;
            const EnvNode& source = env.node(edge.from);
            if (source.isHolder) {
                const EnvNode& owner = env.node(source.holderOwner);
                if (owner.dom.isError()) continue;
                elementContributions(owner.dom, defs, unionParts);
            } else if (!source.dom.isError()) {
                unionParts.push_back(source.dom);
            }
        }
        bool mixed = false;
        for (const Spec& p : unionParts) {
            if (!p.is(SpecKind::Exact)) mixed = true;
        }
        Spec dom = Spec::any();
        if (!unionParts.empty()) {
            Spec acc = Spec::error("empty");
            for (const Spec& p : unionParts) acc = lub(acc, mixed ? widenExacts(p) : p, defs);
            dom = acc;
        }

        // then compatible members intersect
        bool conflict = false;
        for (const EnvEdge& edge : env.edges()) {
            if (edge.to != tv || edge.kind != EdgeKind::Compatible) continue;
            const EnvNode& source = env.node(edge.from);
            std::vector<Spec> parts;
            if (source.isHolder) {
                const EnvNode& owner = env.node(source.holderOwner);
                if (owner.dom.isError()) continue;
                elementContributions(owner.dom, defs, parts);
            } else if (!source.dom.isError()) {
                parts.push_back(source.dom);
            }
            for (const Spec& p : parts) {
                dom = meet(dom, p, defs, MeetPolicy::Bind);
                if (dom.isError()) conflict = true;
            }
        }
        dom = normalize(dom, defs);
        if (dom != env.dom(tv)) {
            env.setDom(tv, dom);
            changed = true;
            if (conflict && !env.node(tv).errorRecorded) {
                env.node(tv).errorRecorded = true;
                env.recordError(env.clauseLoc(),
                                "incompatible types for type variable " + env.node(tv).name,
                                Spec::any(), dom);
            }
        }
        if (dom.isError()) continue;

        // push the resolved type back into compatible members
        for (const EnvEdge& edge : env.edges()) {
            if (edge.to != tv || edge.kind != EdgeKind::Compatible) continue;
            const EnvNode& source = env.node(edge.from);
            if (source.isHolder) {
                changed |= meetInto(env, source.holderOwner, Spec::list(dom), MeetPolicy::Bind,
                                    env.clauseLoc(), "via type variable " + env.node(tv).name);
            } else {
                changed |= meetInto(env, edge.from, dom, MeetPolicy::Bind, env.clauseLoc(),
                                    "via type variable " + env.node(tv).name);
            }
        }
    }
    return changed;
}

bool ClauseAnalyzer::localFixpoint(Env& env) {
    for (int step = 0; step < maxSteps_; ++step) {
        bool changed = propagateEdges(env);
        changed |= resolveTypeVars(env);
        if (!changed) return true;
    }
    warnings_.push_back("local analysis of " + env.context().str() +
                        " truncated after step cap");
    return false;
}

ClauseAnalysis ClauseAnalyzer::analyze(const Clause& clause, const PredicateIndicator& pi) {
    goalCounter_ = 0;
    goalCount_ = 0;
    unknownCalls_.clear();
    warnings_.clear();

    const Conditions* conds = db_.find(pi);
    static const std::vector<PreEntry> noPres;
    const std::vector<PreEntry>& pres = conds ? conds->pres : noPres;

    Env env = initEnv(clause, pi, pres);
    evaluateBody(env, clause.body);
    addStructuralEdges(env);
    bool completed = localFixpoint(env);

    ClauseAnalysis result{std::move(env), {}, false, 0, {}, !completed, warnings_};
    result.goalCount = goalCount_;
    result.unknownCalls = unknownCalls_;
    for (int i = 0; i < pi.arity; ++i) {
        int argNode = result.env.findNode(clause.head->args[i]);
        Spec dom = argNode >= 0 ? result.env.dom(argNode) : Spec::any();
        result.resultDoms.push_back(conclusionSpec(dom, db_.typeDefs()));
    }
    result.hasErrors = result.env.hasErrors();
    return result;
}

}  // namespace plstatic
