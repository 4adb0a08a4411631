#pragma once

#include "plstatic/global.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plstatic {

struct Stats {
    int variableCount = 0;
    int inferredCount = 0;   // variables whose final domain is a strict subtype of any
    double inferredPct = 0.0;
    int unknownCalls = 0;
    int totalCalls = 0;
    double unknownPct = 0.0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    enum class Kind { Parse, Annotation, Type, Note };
    Severity severity = Severity::Error;
    Kind kind = Kind::Type;
    SourceLoc loc;
    std::string message;
    std::optional<Spec> expected;
    std::optional<Spec> actual;
    std::string context;  // predicate indicator
};

enum class ReportFormat { Text, JsonLines, Annotations };

/// Counts distinct named variables per clause; a variable counts as inferred
/// when its final domain is strictly below any (an untouched `var` domain
/// only counts when an annotation constrained it to var).
Stats computeStats(const Program& program, const AnalysisResult& result);

/// Inferred conditions in plspec surface syntax, one directive per line,
/// ordered by predicate indicator; re-parseable by the reader.
std::string emitAnnotations(const SpecDb& db);

std::vector<Diagnostic> collectDiagnostics(const Program& program,
                                           const std::vector<ReadDiagnostic>& annotationDiags,
                                           const AnalysisResult& result);

std::string renderText(const std::vector<Diagnostic>& diagnostics,
                       const std::optional<Stats>& stats);
std::string renderJsonLines(const std::vector<Diagnostic>& diagnostics, const Stats& stats);

/// 0 = clean, 1 = type errors found, 2 = parse/usage failure.
int exitCode(const std::vector<Diagnostic>& diagnostics);

}  // namespace plstatic
