#pragma once

#include "plstatic/term.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace plstatic {

class ReaderError : public std::runtime_error {
public:
    ReaderError(SourceLoc loc, const std::string& message)
        : std::runtime_error(loc.str() + ": " + message), loc_(std::move(loc)), message_(message) {}

    const SourceLoc& loc() const { return loc_; }
    const std::string& message() const { return message_; }

private:
    SourceLoc loc_;
    std::string message_;
};

enum class TokenKind {
    Atom,        // plain, quoted or symbolic
    Var,
    Int,
    Float,
    Str,
    Punct,       // ( ) [ ] { } , |
    End,         // clause-terminating dot
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string text;
    long long intValue = 0;
    double floatValue = 0.0;
    bool quoted = false;
    bool layoutBefore = true;  // whitespace or comment directly before this token
    SourceLoc loc;
};

/// Tokenizes one source text. Comments are skipped; locations are attached.
/// Throws ReaderError on unterminated quotes/comments and invalid characters.
std::vector<Token> tokenize(const std::string& text, const std::string& file);

enum class OpType { Xfx, Xfy, Yfx, Fy, Fx, Xf, Yf };

struct OpDef {
    int priority = 0;
    OpType type = OpType::Xfx;
};

/// Operator table with the standard ISO set plus a small dialect extension
/// list; op/3 directives add to a per-file copy.
class OperatorTable {
public:
    static OperatorTable standard(Dialect dialect);

    void add(int priority, OpType type, const std::string& name);
    bool remove(const std::string& name, bool prefix);

    const OpDef* prefix(const std::string& name) const;
    const OpDef* infix(const std::string& name) const;
    const OpDef* postfix(const std::string& name) const;
    bool isOperator(const std::string& name) const;

private:
    std::map<std::string, OpDef> prefix_;
    std::map<std::string, OpDef> infix_;
    std::map<std::string, OpDef> postfix_;
};

/// Assigns fresh clause-local variable ids during term parsing.
class VarTable {
public:
    int idFor(const std::string& name);  // "_" always yields a fresh id
    const std::vector<std::string>& names() const { return names_; }
    void reset();

private:
    std::map<std::string, int> byName_;
    std::vector<std::string> names_;
};

/// Parses a single term (priority 1200) from `tokens`. Intended for tests and
/// for reading spec expressions; see Reader for whole files.
TermPtr parseTerm(const std::vector<Token>& tokens, const OperatorTable& ops, Dialect dialect,
                  VarTable& vars);

/// Convenience wrapper: tokenize + parseTerm, standard table.
TermPtr parseTermString(const std::string& text, Dialect dialect = Dialect::Swipl);

struct PrintOptions {
    bool quoted = true;
    bool listSugar = true;
    bool useOperators = true;
};

std::string printTerm(const Term& term, const PrintOptions& options = {});
std::string printTerm(const TermPtr& term, const PrintOptions& options = {});

/// Reads Prolog source files into a Program without executing anything.
/// Directives are collected and pattern-matched only; op/3, module/2,
/// use_module/1,2 and conditional-compilation directives are interpreted
/// structurally while reading.
class Reader {
public:
    explicit Reader(Dialect dialect) : dialect_(dialect) {}

    void readFile(const std::string& path, Program& program);
    void readString(const std::string& text, const std::string& filename, Program& program);

private:
    Dialect dialect_;
};

/// Parses every file (or directory of .pl files) in `paths` into one Program.
/// Per-file parse errors are collected in Program::diagnostics; remaining
/// files are still read.
Program parseProgram(const std::vector<std::string>& paths, Dialect dialect);

}  // namespace plstatic
