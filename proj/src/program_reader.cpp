#include "plstatic/reader.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace plstatic {

namespace detail {
TermPtr parseOneTerm(const std::vector<Token>& tokens, size_t& pos, const OperatorTable& ops,
                     Dialect dialect, VarTable& vars);
}

namespace {

void flattenConjunction(const TermPtr& term, std::vector<TermPtr>& out) {
    if (term->isCompound(",", 2)) {
        flattenConjunction(term->args[0], out);
        flattenConjunction(term->args[1], out);
        return;
    }
    out.push_back(term);
}

std::optional<std::pair<std::string, int>> asPredIndicator(const TermPtr& t) {
    if (!t->isCompound("/", 2)) return std::nullopt;
    if (!t->args[0]->isAtom() || t->args[1]->kind != TermKind::Int) return std::nullopt;
    return std::make_pair(t->args[0]->text, static_cast<int>(t->args[1]->intValue));
}

std::optional<OpType> opTypeFromAtom(const std::string& name) {
    if (name == "xfx") return OpType::Xfx;
    if (name == "xfy") return OpType::Xfy;
    if (name == "yfx") return OpType::Yfx;
    if (name == "fy") return OpType::Fy;
    if (name == "fx") return OpType::Fx;
    if (name == "xf") return OpType::Xf;
    if (name == "yf") return OpType::Yf;
    return std::nullopt;
}

std::string importTargetName(const TermPtr& t) {
    if (t->isCompound("library", 1) && t->args[0]->isAtom()) return t->args[0]->text;
    if (t->isAtom()) {
        std::filesystem::path p(t->text);
        return p.stem().string();
    }
    if (t->kind == TermKind::Str) {
        std::filesystem::path p(t->text);
        return p.stem().string();
    }
    return "";
}

/// Streams the terms of one file into clauses/directives, interpreting the
/// reader-level directives (op/3, module/2, use_module, if/else/endif) as it
/// goes. Nothing is ever executed.
class FileReader {
public:
    FileReader(Dialect dialect, std::string filename, Program& program)
        : dialect_(dialect),
          file_(std::move(filename)),
          program_(program),
          ops_(OperatorTable::standard(dialect)) {}

    void run(const std::string& text) {
        std::vector<Token> tokens;
        try {
            tokens = tokenize(text, file_);
        } catch (const ReaderError& e) {
            diagnose(ReadDiagnostic::Severity::Error, e.loc(), e.message());
            finish();
            return;
        }
        size_t pos = 0;
        while (tokens[std::min(pos, tokens.size() - 1)].kind != TokenKind::Eof) {
            VarTable vars;
            SourceLoc startLoc = tokens[pos].loc;
            TermPtr term;
            try {
                term = detail::parseOneTerm(tokens, pos, ops_, dialect_, vars);
            } catch (const ReaderError& e) {
                diagnose(ReadDiagnostic::Severity::Error, e.loc(), e.message());
                // resynchronize after the next clause dot
                while (tokens[pos].kind != TokenKind::End && tokens[pos].kind != TokenKind::Eof) {
                    ++pos;
                }
                if (tokens[pos].kind == TokenKind::End) ++pos;
                continue;
            }
            handleTerm(term, startLoc, vars);
        }
        finish();
    }

private:
    void diagnose(ReadDiagnostic::Severity severity, SourceLoc loc, std::string message) {
        program_.diagnostics.push_back({severity, std::move(loc), std::move(message)});
    }

    bool skipping() const {
        for (bool s : skipStack_) {
            if (s) return true;
        }
        return false;
    }

    void handleTerm(const TermPtr& term, const SourceLoc& loc, const VarTable& vars) {
        if (term->isCompound(":-", 1)) {
            handleDirective(term->args[0], loc);
            return;
        }
        if (skipping()) return;
        if (term->isCompound("-->", 2)) {
            diagnose(ReadDiagnostic::Severity::Warning, loc, "DCG clause skipped (not analyzed)");
            return;
        }
        TermPtr head = term;
        std::vector<TermPtr> body;
        if (term->isCompound(":-", 2)) {
            head = term->args[0];
            flattenConjunction(term->args[1], body);
        }
        if (!head->isCallable()) {
            diagnose(ReadDiagnostic::Severity::Error, loc, "clause head is not callable");
            return;
        }
        Clause clause;
        clause.head = head;
        clause.body = std::move(body);
        clause.loc = head->loc.line ? head->loc : loc;
        clause.varNames = vars.names();
        clauses_.push_back(std::move(clause));
    }

    void handleDirective(const TermPtr& goal, const SourceLoc& loc) {
        // conditional compilation: take the if-branch, skip else branches
        if (goal->isCompound("if", 1)) {
            diagnose(ReadDiagnostic::Severity::Warning, loc,
                     "conditional compilation not evaluated; taking the if-branch");
            skipStack_.push_back(false);
            return;
        }
        if (goal->isAtom("else") || goal->isCompound("elif", 1)) {
            if (skipStack_.empty()) {
                diagnose(ReadDiagnostic::Severity::Warning, loc, "unmatched ':- else'");
            } else {
                skipStack_.back() = true;
            }
            return;
        }
        if (goal->isAtom("endif")) {
            if (skipStack_.empty()) {
                diagnose(ReadDiagnostic::Severity::Warning, loc, "unmatched ':- endif'");
            } else {
                skipStack_.pop_back();
            }
            return;
        }
        if (skipping()) return;

        if (goal->isCompound("op", 3)) {
            applyOpDirective(goal, loc);
        } else if (goal->isCompound("module", 2)) {
            module_.name = goal->args[0]->isAtom() ? goal->args[0]->text : module_.name;
            if (auto elements = goal->args[1]->properListElements()) {
                for (const auto& e : *elements) {
                    if (auto pi = asPredIndicator(e)) module_.exports.push_back(*pi);
                }
            }
        } else if (goal->isCompound("use_module", 1) || goal->isCompound("ensure_loaded", 1)) {
            std::string target = importTargetName(goal->args[0]);
            if (!target.empty()) module_.uses.push_back({target, std::nullopt});
        } else if (goal->isCompound("use_module", 2)) {
            std::string target = importTargetName(goal->args[0]);
            UseModule use{target, std::nullopt};
            if (auto elements = goal->args[1]->properListElements()) {
                std::vector<std::pair<std::string, int>> names;
                for (const auto& e : *elements) {
                    if (auto pi = asPredIndicator(e)) names.push_back(*pi);
                }
                use.imports = std::move(names);
            }
            if (!target.empty()) module_.uses.push_back(std::move(use));
        }
        program_.directives.push_back({goal, loc});
    }

    void applyOpDirective(const TermPtr& goal, const SourceLoc& loc) {
        const TermPtr& prio = goal->args[0];
        const TermPtr& type = goal->args[1];
        const TermPtr& names = goal->args[2];
        if (prio->kind != TermKind::Int || prio->intValue < 0 || prio->intValue > 1200 ||
            !type->isAtom()) {
            diagnose(ReadDiagnostic::Severity::Warning, loc, "malformed op/3 directive ignored");
            return;
        }
        auto opType = opTypeFromAtom(type->text);
        if (!opType) {
            diagnose(ReadDiagnostic::Severity::Warning, loc, "unknown operator type in op/3");
            return;
        }
        std::vector<TermPtr> targets;
        if (auto elements = names->properListElements()) targets = *elements;
        else targets.push_back(names);
        for (const auto& t : targets) {
            if (!t->isAtom()) {
                diagnose(ReadDiagnostic::Severity::Warning, loc, "op/3 name is not an atom");
                continue;
            }
            if (prio->intValue == 0) {
                ops_.remove(t->text, *opType == OpType::Fx || *opType == OpType::Fy);
            } else {
                ops_.add(static_cast<int>(prio->intValue), *opType, t->text);
            }
        }
    }

    void finish() {
        if (!skipStack_.empty()) {
            diagnose(ReadDiagnostic::Severity::Warning, SourceLoc{file_, 0, 0},
                     "missing ':- endif' at end of file");
        }
        program_.fileModules[file_] = module_;
        for (auto& clause : clauses_) {
            PredicateIndicator pi{module_.name, clause.head->text,
                                  static_cast<int>(clause.head->arity())};
            auto& def = program_.predicates[pi];
            def.pi = pi;
            def.clauses.push_back(std::move(clause));
        }
    }

    Dialect dialect_;
    std::string file_;
    Program& program_;
    OperatorTable ops_;
    FileModule module_;
    std::vector<Clause> clauses_;
    std::vector<bool> skipStack_;
};

}  // namespace

void Reader::readFile(const std::string& path, Program& program) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        program.diagnostics.push_back(
            {ReadDiagnostic::Severity::Error, SourceLoc{path, 0, 0}, "cannot open file"});
        return;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    readString(buffer.str(), path, program);
}

void Reader::readString(const std::string& text, const std::string& filename, Program& program) {
    program.dialect = dialect_;
    FileReader reader(dialect_, filename, program);
    reader.run(text);
}

Program parseProgram(const std::vector<std::string>& paths, Dialect dialect) {
    Program program;
    program.dialect = dialect;
    Reader reader(dialect);
    std::vector<std::string> files;
    for (const auto& path : paths) {
        std::error_code ec;
        if (std::filesystem::is_directory(path, ec)) {
            std::vector<std::string> inDir;
            for (const auto& entry : std::filesystem::recursive_directory_iterator(path, ec)) {
                if (entry.is_regular_file() && entry.path().extension() == ".pl") {
                    inDir.push_back(entry.path().string());
                }
            }
            std::sort(inDir.begin(), inDir.end());
            files.insert(files.end(), inDir.begin(), inDir.end());
        } else {
            files.push_back(path);
        }
    }
    for (const auto& file : files) {
        reader.readFile(file, program);
    }
    return program;
}

}  // namespace plstatic
