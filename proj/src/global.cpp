#include "plstatic/global.hpp"

#include "plstatic/lattice.hpp"

namespace plstatic {

std::optional<std::vector<Spec>> mergePredicate(const std::vector<const ClauseResult*>& results,
                                                int arity, const TypeDefs& defs) {
    std::vector<const ClauseResult*> usable;
    for (const ClauseResult* r : results) {
        if (!r->hasErrors) usable.push_back(r);
    }
    if (usable.empty()) return std::nullopt;
    std::vector<Spec> merged(arity, Spec::any());
    for (int i = 0; i < arity; ++i) {
        Spec acc = Spec::error("empty");
        for (const ClauseResult* r : usable) acc = lub(acc, r->argDoms[i], defs);
        merged[i] = normalize(acc.isError() ? Spec::any() : acc, defs);
    }
    return merged;
}

bool propagate(SpecDb& db,
               const std::map<PredicateIndicator, std::vector<Spec>>& conclusions) {
    bool changed = false;
    for (const auto& [pi, conclusion] : conclusions) {
        changed |= db.updateInferredPost(pi, conclusion);
    }
    return changed;
}

AnalysisResult runAnalysis(const Program& program, SpecDb& db, const AnalysisOptions& options) {
    AnalysisResult result;
    Resolver resolver(program, db);

    bool changed = true;
    for (int iteration = 1; iteration <= options.maxGlobalIters; ++iteration) {
        result.iterations = iteration;
        result.clauseResults.clear();
        result.envs.clear();
        result.errors.clear();
        result.notes.clear();
        result.unknownCalls.clear();
        result.totalGoals = 0;

        ClauseAnalyzer analyzer(db, resolver, options.maxLocalSteps);
        for (const auto& [pi, def] : program.predicates) {
            for (size_t index = 0; index < def.clauses.size(); ++index) {
                ClauseAnalysis analysis = analyzer.analyze(def.clauses[index], pi);
                ClauseResult clauseResult{pi, static_cast<int>(index), analysis.resultDoms,
                                          analysis.hasErrors};
                result.clauseResults.push_back(std::move(clauseResult));
                for (const EnvError& e : analysis.env.errors()) result.errors.push_back(e);
                for (const std::string& w : analysis.warnings) {
                    result.notes.push_back(
                        {AnalysisNote::Severity::Warning, def.clauses[index].loc, w});
                }
                result.envs.push_back(std::move(analysis.env));
                result.totalGoals += analysis.goalCount;
                for (UnknownCall& u : analysis.unknownCalls) {
                    result.unknownCalls.push_back(std::move(u));
                }
            }
        }

        // Phase 2: merge per predicate and propagate to the callers
        std::map<PredicateIndicator, std::vector<Spec>> conclusions;
        std::map<PredicateIndicator, std::vector<const ClauseResult*>> grouped;
        for (const ClauseResult& r : result.clauseResults) grouped[r.pi].push_back(&r);
        for (const auto& [pi, results] : grouped) {
            auto merged = mergePredicate(results, pi.arity, db.typeDefs());
            if (merged) {
                conclusions.emplace(pi, std::move(*merged));
            } else {
                result.notes.push_back({AnalysisNote::Severity::Warning,
                                        program.predicates.at(pi).clauses.front().loc,
                                        "no clause of " + pi.str() + " can succeed"});
            }
        }
        changed = propagate(db, conclusions);
        if (!changed) break;
    }
    if (changed) {
        result.truncated = true;
        result.notes.push_back({AnalysisNote::Severity::Warning, SourceLoc{},
                                "analysis truncated after " +
                                    std::to_string(options.maxGlobalIters) +
                                    " global iterations"});
    }
    return result;
}

}  // namespace plstatic
