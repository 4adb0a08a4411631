#include "plstatic/global.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/reader.hpp"
#include "plstatic/report.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

std::optional<int> envInt(const char* name) {
    const char* value = std::getenv(name);
    if (!value || !*value) return std::nullopt;
    try {
        return std::stoi(value);
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plstatic - static type analysis for Prolog programs"};

    std::vector<std::string> paths;
    std::string dialectName = "swipl";
    std::string formatName = "text";
    std::vector<std::string> extraAnnotations;
    std::string dataDir;
    std::string outFile;
    int maxGlobalIters = 10;
    int maxLocalSteps = 50;
    bool showStats = false;

    app.add_option("paths", paths, "Prolog source files or directories")->required();
    app.add_option("--dialect", dialectName, "Prolog dialect (swipl or sicstus)")
        ->check(CLI::IsMember({"swipl", "sicstus"}));
    app.add_option("--format", formatName, "Output format")
        ->check(CLI::IsMember({"text", "json", "annotations"}));
    app.add_option("--annotations", extraAnnotations, "Additional annotation files");
    app.add_option("--data-dir", dataDir, "Directory with the built-in annotation files");
    app.add_option("--max-global-iters", maxGlobalIters, "Global iteration cap");
    app.add_option("--max-local-steps", maxLocalSteps, "Per-clause propagation step cap");
    app.add_option("-o,--out", outFile, "Write the report to a file instead of stdout");
    app.add_flag("--stats", showStats, "Include corpus statistics in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (auto v = envInt("PLSTATIC_MAX_GLOBAL_ITERS")) maxGlobalIters = *v;
    if (auto v = envInt("PLSTATIC_MAX_LOCAL_STEPS")) maxLocalSteps = *v;
    if (dataDir.empty()) {
        if (const char* env = std::getenv("PLSTATIC_DATA_DIR")) dataDir = env;
    }
    if (dataDir.empty()) dataDir = PLSTATIC_SOURCE_DATA_DIR;

    plstatic::Dialect dialect = *plstatic::dialectFromString(dialectName);

    plstatic::SpecDb db(dialect);
    std::vector<plstatic::ReadDiagnostic> annotationDiags;
    try {
        annotationDiags = db.loadBuiltins(dataDir);
    } catch (const std::exception& e) {
        std::cerr << "plstatic: " << e.what() << "\n";
        return 2;
    }
    for (const std::string& file : extraAnnotations) {
        auto diags = db.loadAnnotationFile(file, plstatic::Origin::User);
        annotationDiags.insert(annotationDiags.end(), diags.begin(), diags.end());
    }

    plstatic::Program program = plstatic::parseProgram(paths, dialect);
    auto userDiags = db.registerAnnotations(program);
    annotationDiags.insert(annotationDiags.end(), userDiags.begin(), userDiags.end());
    db.prepareInitialConditions(program);

    plstatic::AnalysisOptions options;
    options.maxGlobalIters = maxGlobalIters;
    options.maxLocalSteps = maxLocalSteps;
    plstatic::AnalysisResult result = plstatic::runAnalysis(program, db, options);

    std::vector<plstatic::Diagnostic> diagnostics =
        plstatic::collectDiagnostics(program, annotationDiags, result);
    plstatic::Stats stats = plstatic::computeStats(program, result);

    std::string output;
    if (formatName == "annotations") {
        output = plstatic::emitAnnotations(db);
    } else if (formatName == "json") {
        output = plstatic::renderJsonLines(diagnostics, stats);
    } else {
        output = plstatic::renderText(
            diagnostics, showStats ? std::optional<plstatic::Stats>(stats) : std::nullopt);
    }

    if (!outFile.empty()) {
        std::ofstream out(outFile);
        if (!out) {
            std::cerr << "plstatic: cannot write " << outFile << "\n";
            return 2;
        }
        out << output;
        if (!out) {
            std::cerr << "plstatic: cannot write " << outFile << "\n";
            return 2;
        }
    } else {
        std::cout << output;
    }

    return plstatic::exitCode(diagnostics);
}
