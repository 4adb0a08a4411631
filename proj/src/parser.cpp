#include "plstatic/reader.hpp"

#include <algorithm>

namespace plstatic {

OperatorTable OperatorTable::standard(Dialect dialect) {
    OperatorTable t;
    t.add(1200, OpType::Xfx, ":-");
    t.add(1200, OpType::Xfx, "-->");
    t.add(1200, OpType::Fx, ":-");
    t.add(1200, OpType::Fx, "?-");
    t.add(1150, OpType::Fx, "dynamic");
    t.add(1150, OpType::Fx, "discontiguous");
    t.add(1150, OpType::Fx, "multifile");
    t.add(1150, OpType::Fx, "meta_predicate");
    t.add(1150, OpType::Fx, "initialization");
    t.add(1150, OpType::Fx, "public");
    t.add(1100, OpType::Xfy, ";");
    t.add(1100, OpType::Xfy, "|");
    t.add(1050, OpType::Xfy, "->");
    t.add(1000, OpType::Xfy, ",");
    t.add(900, OpType::Fy, "\\+");
    for (const char* name : {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is",
                             "=:=", "=\\=", "<", ">", "=<", ">="}) {
        t.add(700, OpType::Xfx, name);
    }
    t.add(500, OpType::Yfx, "+");
    t.add(500, OpType::Yfx, "-");
    t.add(500, OpType::Yfx, "/\\");
    t.add(500, OpType::Yfx, "\\/");
    t.add(500, OpType::Yfx, "xor");
    t.add(400, OpType::Yfx, "*");
    t.add(400, OpType::Yfx, "/");
    t.add(400, OpType::Yfx, "//");
    t.add(400, OpType::Yfx, "mod");
    t.add(400, OpType::Yfx, "rem");
    t.add(400, OpType::Yfx, "div");
    t.add(400, OpType::Yfx, "<<");
    t.add(400, OpType::Yfx, ">>");
    t.add(200, OpType::Xfx, "**");
    t.add(200, OpType::Xfy, "^");
    t.add(200, OpType::Xfy, ":");
    t.add(200, OpType::Fy, "-");
    t.add(200, OpType::Fy, "+");
    t.add(200, OpType::Fy, "\\");
    if (dialect == Dialect::Swipl) {
        t.add(1150, OpType::Fx, "table");
        t.add(1150, OpType::Fx, "thread_local");
        t.add(1050, OpType::Xfy, "*->");
    } else {
        t.add(1150, OpType::Fx, "block");
        t.add(1150, OpType::Fx, "volatile");
        t.add(1150, OpType::Fx, "mode");
    }
    return t;
}

void OperatorTable::add(int priority, OpType type, const std::string& name) {
    OpDef def{priority, type};
    switch (type) {
        case OpType::Fx:
        case OpType::Fy:
            prefix_[name] = def;
            break;
        case OpType::Xf:
        case OpType::Yf:
            postfix_[name] = def;
            break;
        default:
            infix_[name] = def;
            break;
    }
}

bool OperatorTable::remove(const std::string& name, bool prefixOp) {
    return (prefixOp ? prefix_ : infix_).erase(name) > 0;
}

const OpDef* OperatorTable::prefix(const std::string& name) const {
    auto it = prefix_.find(name);
    return it == prefix_.end() ? nullptr : &it->second;
}

const OpDef* OperatorTable::infix(const std::string& name) const {
    auto it = infix_.find(name);
    return it == infix_.end() ? nullptr : &it->second;
}

const OpDef* OperatorTable::postfix(const std::string& name) const {
    auto it = postfix_.find(name);
    return it == postfix_.end() ? nullptr : &it->second;
}

bool OperatorTable::isOperator(const std::string& name) const {
    return prefix(name) || infix(name) || postfix(name);
}

int VarTable::idFor(const std::string& name) {
    if (name == "_") {
        names_.push_back("_");
        return static_cast<int>(names_.size()) - 1;
    }
    auto it = byName_.find(name);
    if (it != byName_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    byName_[name] = id;
    return id;
}

void VarTable::reset() {
    byName_.clear();
    names_.clear();
}

namespace {

class Parser {
public:
    Parser(const std::vector<Token>& tokens, size_t& pos, const OperatorTable& ops,
           Dialect dialect, VarTable& vars)
        : tokens_(tokens), pos_(pos), ops_(ops), dialect_(dialect), vars_(vars) {}

    TermPtr parseTopLevel() {
        TermPtr term = parse(1200);
        return term;
    }

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

private:
    const Token& advance() {
        const Token& t = tokens_[std::min(pos_, tokens_.size() - 1)];
        if (pos_ < tokens_.size() - 1) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ReaderError(peek().loc, message);
    }

    void expectPunct(const std::string& text) {
        if (peek().kind != TokenKind::Punct || peek().text != text) {
            fail("expected '" + text + "'");
        }
        advance();
    }

    TermPtr parse(int maxPriority) {
        auto [term, priority] = parsePrimary(maxPriority);
        return parseOperators(term, priority, maxPriority);
    }

    TermPtr parseOperators(TermPtr left, int leftPriority, int maxPriority) {
        while (true) {
            const Token& t = peek();
            std::string name;
            if (t.kind == TokenKind::Atom && !t.quoted) name = t.text;
            else if (t.kind == TokenKind::Punct && t.text == ",") name = ",";
            else if (t.kind == TokenKind::Punct && t.text == "|") name = "|";
            else break;

            const OpDef* in = ops_.infix(name);
            if (in && in->priority <= maxPriority) {
                int leftMax = in->priority - (in->type == OpType::Yfx ? 0 : 1);
                int rightMax = in->priority - (in->type == OpType::Xfy ? 0 : 1);
                if (leftPriority > leftMax) break;
                SourceLoc loc = t.loc;
                advance();
                TermPtr right = parse(rightMax);
                // '|' as an infix operator means disjunction
                std::string functor = name == "|" ? ";" : name;
                left = Term::makeCompound(functor, {left, right}, loc);
                leftPriority = in->priority;
                continue;
            }
            const OpDef* post = ops_.postfix(name);
            if (post && post->priority <= maxPriority) {
                int argMax = post->priority - (post->type == OpType::Xf ? 1 : 0);
                if (leftPriority > argMax) break;
                SourceLoc loc = t.loc;
                advance();
                left = Term::makeCompound(name, {left}, loc);
                leftPriority = post->priority;
                continue;
            }
            break;
        }
        return left;
    }

    bool tokenCanStartTerm(const Token& t) const {
        switch (t.kind) {
            case TokenKind::Int:
            case TokenKind::Float:
            case TokenKind::Str:
            case TokenKind::Var:
            case TokenKind::Atom:
                return true;
            case TokenKind::Punct:
                return t.text == "(" || t.text == "[" || t.text == "{";
            default:
                return false;
        }
    }

    std::pair<TermPtr, int> parsePrimary(int maxPriority) {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Int: {
                advance();
                return {Term::makeInt(t.intValue, t.loc), 0};
            }
            case TokenKind::Float: {
                advance();
                return {Term::makeFloat(t.floatValue, t.loc), 0};
            }
            case TokenKind::Str: {
                advance();
                if (dialect_ == Dialect::Sicstus) {
                    // "..." denotes a code list outside SWI
                    std::vector<TermPtr> codes;
                    for (unsigned char c : t.text) codes.push_back(Term::makeInt(c, t.loc));
                    return {Term::makeList(codes, t.loc), 0};
                }
                return {Term::makeString(t.text, t.loc), 0};
            }
            case TokenKind::Var: {
                advance();
                return {Term::makeVar(t.text, vars_.idFor(t.text), t.loc), 0};
            }
            case TokenKind::Punct: {
                if (t.text == "(") {
                    advance();
                    TermPtr inner = parse(1200);
                    expectPunct(")");
                    return {inner, 0};
                }
                if (t.text == "[") return {parseList(), 0};
                if (t.text == "{") {
                    SourceLoc loc = t.loc;
                    advance();
                    if (peek().kind == TokenKind::Punct && peek().text == "}") {
                        advance();
                        return {Term::makeAtom("{}", loc), 0};
                    }
                    TermPtr inner = parse(1200);
                    expectPunct("}");
                    return {Term::makeCompound("{}", {inner}, loc), 0};
                }
                fail("unexpected '" + t.text + "'");
            }
            case TokenKind::Atom:
                return parseAtomic();
            case TokenKind::End:
                fail("unexpected end of clause");
            case TokenKind::Eof:
                fail("unexpected end of input");
        }
        fail("unexpected token");
    }

    std::pair<TermPtr, int> parseAtomic() {
        const Token& t = advance();
        const Token& next = peek();

        // compound term: functor immediately followed by '('
        if (next.kind == TokenKind::Punct && next.text == "(" && !next.layoutBefore) {
            advance();
            std::vector<TermPtr> args;
            args.push_back(parse(999));
            while (peek().kind == TokenKind::Punct && peek().text == ",") {
                advance();
                args.push_back(parse(999));
            }
            expectPunct(")");
            return {Term::makeCompound(t.text, std::move(args), t.loc), 0};
        }

        // negative number literals: '-' directly attached to a numeric token
        if (!t.quoted && (t.text == "-" || t.text == "+") && !next.layoutBefore &&
            (next.kind == TokenKind::Int || next.kind == TokenKind::Float)) {
            advance();
            long long sign = t.text == "-" ? -1 : 1;
            if (next.kind == TokenKind::Int) return {Term::makeInt(sign * next.intValue, t.loc), 0};
            return {Term::makeFloat(sign * next.floatValue, t.loc), 0};
        }

        if (!t.quoted) {
            if (const OpDef* pre = ops_.prefix(t.text)) {
                bool operandFollows = tokenCanStartTerm(next);
                // An atom that is also an infix operator only starts a term
                // when an operand can follow it in turn (e.g. "- - 1").
                if (operandFollows && next.kind == TokenKind::Atom && !next.quoted &&
                    ops_.infix(next.text) && !ops_.prefix(next.text) &&
                    !tokenCanStartTerm(peek(1))) {
                    operandFollows = false;
                }
                if (operandFollows) {
                    int argMax = pre->priority - (pre->type == OpType::Fx ? 1 : 0);
                    TermPtr operand = parse(argMax);
                    return {Term::makeCompound(t.text, {operand}, t.loc), pre->priority};
                }
            }
        }
        return {Term::makeAtom(t.text, t.loc), 0};
    }

    TermPtr parseList() {
        const Token& open = advance();  // '['
        if (peek().kind == TokenKind::Punct && peek().text == "]") {
            advance();
            return Term::makeAtom("[]", open.loc);
        }
        std::vector<TermPtr> elements;
        elements.push_back(parse(999));
        while (peek().kind == TokenKind::Punct && peek().text == ",") {
            advance();
            elements.push_back(parse(999));
        }
        TermPtr tail = Term::makeAtom("[]", open.loc);
        if (peek().kind == TokenKind::Punct && peek().text == "|") {
            advance();
            tail = parse(999);
        }
        expectPunct("]");
        for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
            tail = Term::makeCompound(".", {*it, tail}, open.loc);
        }
        return tail;
    }

    const std::vector<Token>& tokens_;
    size_t& pos_;
    const OperatorTable& ops_;
    Dialect dialect_;
    VarTable& vars_;
};

}  // namespace

TermPtr parseTerm(const std::vector<Token>& tokens, const OperatorTable& ops, Dialect dialect,
                  VarTable& vars) {
    size_t pos = 0;
    Parser parser(tokens, pos, ops, dialect, vars);
    TermPtr term = parser.parseTopLevel();
    const Token& rest = parser.peek();
    if (rest.kind != TokenKind::End && rest.kind != TokenKind::Eof) {
        throw ReaderError(rest.loc, "operator expected before '" + rest.text + "'");
    }
    return term;
}

TermPtr parseTermString(const std::string& text, Dialect dialect) {
    OperatorTable ops = OperatorTable::standard(dialect);
    VarTable vars;
    return parseTerm(tokenize(text, "<string>"), ops, dialect, vars);
}

namespace detail {

/// Incremental term reading used by the program reader: parses one term
/// starting at `pos`, leaving `pos` after the clause-terminating dot.
TermPtr parseOneTerm(const std::vector<Token>& tokens, size_t& pos, const OperatorTable& ops,
                     Dialect dialect, VarTable& vars) {
    Parser parser(tokens, pos, ops, dialect, vars);
    TermPtr term = parser.parseTopLevel();
    const Token& t = parser.peek();
    if (t.kind != TokenKind::End) {
        throw ReaderError(t.loc, "expected end of clause before '" +
                                     (t.kind == TokenKind::Eof ? "<eof>" : t.text) + "'");
    }
    ++pos;  // consume the dot
    return term;
}

}  // namespace detail

}  // namespace plstatic
