#pragma once

#include "plstatic/env.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/spec_db.hpp"

#include <string>
#include <vector>

namespace plstatic {

struct UnknownCall {
    PredicateIndicator pi;
    SourceLoc loc;
};

struct ClauseAnalysis {
    Env env;
    std::vector<Spec> resultDoms;  // conclusion-widened head argument domains
    bool hasErrors = false;
    int goalCount = 0;
    std::vector<UnknownCall> unknownCalls;
    bool truncated = false;  // local step cap hit
    std::vector<std::string> warnings;
};

/// Phase 1: clause-local abstract interpretation. Initializes the
/// environment from the clause head and its preconditions (with the
/// argument-vector watcher), evaluates body goals against the callee
/// pre/postconditions, adds structural edges and propagates to a local
/// fixed point.
class ClauseAnalyzer {
public:
    ClauseAnalyzer(const SpecDb& db, const Resolver& resolver, int maxLocalSteps = 50)
        : db_(db), resolver_(resolver), maxSteps_(maxLocalSteps) {}

    ClauseAnalysis analyze(const Clause& clause, const PredicateIndicator& pi);

    // individual steps, exposed for tests
    Env initEnv(const Clause& clause, const PredicateIndicator& pi,
                const std::vector<PreEntry>& pres);
    /// Returns the surviving precondition vectors (empty set records a type
    /// error at the goal) and narrows argument domains by their join.
    std::vector<const PreEntry*> checkPre(Env& env, const std::vector<int>& argNodes,
                                          const Conditions& conds, const PredicateIndicator& pi,
                                          const SourceLoc& loc);
    void applyPosts(Env& env, const std::vector<int>& argNodes, const Conditions& conds,
                    const SourceLoc& loc);
    void evaluateBody(Env& env, const std::vector<TermPtr>& goals);
    void addStructuralEdges(Env& env);
    /// Edge propagation sweeps until stable; false when the step cap hit.
    bool localFixpoint(Env& env);
    /// One pass of type-variable resolution (also part of localFixpoint).
    bool resolveTypeVars(Env& env);

private:
    void evalGoal(Env& env, const TermPtr& goal);
    void evalCall(Env& env, const TermPtr& goal);
    void evalUnification(Env& env, const TermPtr& goal);
    void evalDisjunction(Env& env, const TermPtr& goal);
    void applyConclusion(Env& env, int node, const Spec& conclusion,
                         std::map<std::string, int>& tvInstances, const SourceLoc& loc);
    void wireMarkers(Env& env, int node, const Spec& spec,
                     std::map<std::string, int>& tvInstances, const SourceLoc& loc);
    bool meetInto(Env& env, int node, const Spec& constraint, MeetPolicy policy,
                  const SourceLoc& loc, const std::string& what);
    bool propagateEdges(Env& env);

    const SpecDb& db_;
    const Resolver& resolver_;
    int maxSteps_;

    // per-analyze state
    int goalCounter_ = 0;
    int goalCount_ = 0;
    std::vector<UnknownCall> unknownCalls_;
    std::vector<std::string> warnings_;
};

}  // namespace plstatic
