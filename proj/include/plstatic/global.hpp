#pragma once

#include "plstatic/analyzer.hpp"
#include "plstatic/spec_db.hpp"

#include <map>
#include <optional>
#include <vector>

namespace plstatic {

struct ClauseResult {
    PredicateIndicator pi;
    int clauseIndex = 0;
    std::vector<Spec> argDoms;  // conclusion-widened, one per argument
    bool hasErrors = false;
};

struct AnalysisOptions {
    int maxGlobalIters = 10;
    int maxLocalSteps = 50;
};

struct AnalysisNote {
    enum class Severity { Warning, Error };
    Severity severity = Severity::Warning;
    SourceLoc loc;
    std::string message;
};

struct AnalysisResult {
    std::vector<ClauseResult> clauseResults;  // final iteration, program order
    std::vector<Env> envs;                    // aligned with clauseResults
    std::vector<EnvError> errors;             // type errors of the final iteration
    std::vector<AnalysisNote> notes;          // truncation and never-succeeds warnings
    std::vector<UnknownCall> unknownCalls;
    int totalGoals = 0;
    int iterations = 0;
    bool truncated = false;
};

/// Union of the clause conclusions of one predicate; erroring clauses are
/// excluded, and an empty result means no clause can succeed.
std::optional<std::vector<Spec>> mergePredicate(const std::vector<const ClauseResult*>& results,
                                                int arity, const TypeDefs& defs);

/// Installs merged conclusions as inferred postconditions where they are
/// strictly more precise. Returns true when anything changed.
bool propagate(SpecDb& db,
               const std::map<PredicateIndicator, std::vector<Spec>>& conclusions);

/// Phase 1 on all clauses + Phase 2 propagation, iterated to the global
/// fixed point or the iteration cap.
AnalysisResult runAnalysis(const Program& program, SpecDb& db,
                           const AnalysisOptions& options = {});

}  // namespace plstatic
