#include "plstatic/report.hpp"

#include "plstatic/lattice.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace plstatic {

namespace {

double percent(int part, int whole) {
    if (whole == 0) return 0.0;
    return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string formatPercent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", value);
    return buf;
}

}  // namespace

Stats computeStats(const Program& program, const AnalysisResult& result) {
    Stats stats;
    for (size_t i = 0; i < result.clauseResults.size(); ++i) {
        const ClauseResult& cr = result.clauseResults[i];
        const Env& env = result.envs[i];
        const Clause& clause = program.predicates.at(cr.pi).clauses[cr.clauseIndex];
        for (size_t varId = 0; varId < clause.varNames.size(); ++varId) {
            if (clause.varNames[varId] == "_") continue;
            ++stats.variableCount;
            int node = env.findVarNode(static_cast<int>(varId));
            if (node < 0) continue;
            const EnvNode& n = env.node(node);
            if (n.dom.is(SpecKind::Any)) continue;
            if (n.dom.is(SpecKind::Var) && !n.varFromAnnotation) continue;
            ++stats.inferredCount;
        }
    }
    stats.unknownCalls = static_cast<int>(result.unknownCalls.size());
    stats.totalCalls = result.totalGoals;
    stats.inferredPct = percent(stats.inferredCount, stats.variableCount);
    stats.unknownPct = percent(stats.unknownCalls, stats.totalCalls);
    return stats;
}

std::string emitAnnotations(const SpecDb& db) {
    std::ostringstream out;
    for (const auto& [pi, conds] : db.table()) {
        for (const PreEntry& pre : conds.pres) {
            if (pre.origin != Origin::Inferred) continue;
            out << ":- spec_pre(" << pi.name << "/" << pi.arity << ", [";
            for (size_t i = 0; i < pre.specs.size(); ++i) {
                if (i) out << ",";
                out << pre.specs[i].str();
            }
            out << "]).\n";
        }
        for (const PostEntry& post : conds.posts) {
            if (post.origin != Origin::Inferred) continue;
            out << ":- spec_post(" << pi.name << "/" << pi.arity << ", [";
            for (size_t i = 0; i < post.premise.size(); ++i) {
                if (i) out << ",";
                out << post.premise[i].str();
            }
            out << "], [";
            for (size_t i = 0; i < post.conclusion.size(); ++i) {
                if (i) out << ",";
                out << post.conclusion[i].str();
            }
            out << "]).\n";
        }
    }
    return out.str();
}

std::vector<Diagnostic> collectDiagnostics(const Program& program,
                                           const std::vector<ReadDiagnostic>& annotationDiags,
                                           const AnalysisResult& result) {
    std::vector<Diagnostic> out;
    auto fromRead = [&](const ReadDiagnostic& d, Diagnostic::Kind kind) {
        Diagnostic diag;
        diag.severity = d.severity == ReadDiagnostic::Severity::Error
                            ? Diagnostic::Severity::Error
                            : Diagnostic::Severity::Warning;
        diag.kind = kind;
        diag.loc = d.loc;
        diag.message = d.message;
        out.push_back(std::move(diag));
    };
    for (const ReadDiagnostic& d : program.diagnostics) fromRead(d, Diagnostic::Kind::Parse);
    for (const ReadDiagnostic& d : annotationDiags) fromRead(d, Diagnostic::Kind::Annotation);
    for (const EnvError& e : result.errors) {
        Diagnostic diag;
        diag.severity = Diagnostic::Severity::Error;
        diag.kind = Diagnostic::Kind::Type;
        diag.loc = e.loc;
        diag.message = e.message;
        diag.expected = e.expected;
        diag.actual = e.actual;
        diag.context = e.context.str();
        out.push_back(std::move(diag));
    }
    for (const AnalysisNote& n : result.notes) {
        Diagnostic diag;
        diag.severity = n.severity == AnalysisNote::Severity::Error
                            ? Diagnostic::Severity::Error
                            : Diagnostic::Severity::Warning;
        diag.kind = Diagnostic::Kind::Note;
        diag.loc = n.loc;
        diag.message = n.message;
        out.push_back(std::move(diag));
    }
    std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
        if (a.loc.file != b.loc.file) return a.loc.file < b.loc.file;
        if (a.loc.line != b.loc.line) return a.loc.line < b.loc.line;
        return a.loc.column < b.loc.column;
    });
    return out;
}

std::string renderText(const std::vector<Diagnostic>& diagnostics,
                       const std::optional<Stats>& stats) {
    std::ostringstream out;
    for (const Diagnostic& d : diagnostics) {
        out << d.loc.str() << ": "
            << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << ": "
            << d.message;
        if (d.expected && d.actual) {
            out << " (expected " << d.expected->str() << ", got " << d.actual->str() << ")";
        }
        out << "\n";
    }
    if (stats) {
        out << "variables: " << stats->variableCount << "\n";
        out << "inferred types: " << stats->inferredCount << " ("
            << formatPercent(stats->inferredPct) << ")\n";
        out << "calls: " << stats->totalCalls << "\n";
        out << "unknown calls: " << stats->unknownCalls << " ("
            << formatPercent(stats->unknownPct) << ")\n";
    }
    return out.str();
}

std::string renderJsonLines(const std::vector<Diagnostic>& diagnostics, const Stats& stats) {
    std::ostringstream out;
    for (const Diagnostic& d : diagnostics) {
        nlohmann::json record{
            {"kind", "diagnostic"},
            {"severity", d.severity == Diagnostic::Severity::Error ? "error" : "warning"},
            {"category", d.kind == Diagnostic::Kind::Parse        ? "parse"
                         : d.kind == Diagnostic::Kind::Annotation ? "annotation"
                         : d.kind == Diagnostic::Kind::Type       ? "type"
                                                                  : "note"},
            {"file", d.loc.file},
            {"line", d.loc.line},
            {"column", d.loc.column},
            {"message", d.message},
        };
        if (d.expected) record["expected"] = d.expected->str();
        if (d.actual) record["actual"] = d.actual->str();
        if (!d.context.empty()) record["predicate"] = d.context;
        out << record.dump() << "\n";
    }
    nlohmann::json statsRecord{
        {"kind", "stats"},
        {"variables", stats.variableCount},
        {"inferred", stats.inferredCount},
        {"inferred_pct", stats.inferredPct},
        {"calls", stats.totalCalls},
        {"unknown_calls", stats.unknownCalls},
        {"unknown_pct", stats.unknownPct},
    };
    out << statsRecord.dump() << "\n";
    return out.str();
}

int exitCode(const std::vector<Diagnostic>& diagnostics) {
    bool typeError = false;
    for (const Diagnostic& d : diagnostics) {
        if (d.severity != Diagnostic::Severity::Error) continue;
        if (d.kind == Diagnostic::Kind::Parse) return 2;
        typeError = true;
    }
    return typeError ? 1 : 0;
}

}  // namespace plstatic
