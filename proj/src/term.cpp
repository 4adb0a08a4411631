#include "plstatic/term.hpp"
#include "plstatic/reader.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace plstatic {

std::optional<Dialect> dialectFromString(const std::string& name) {
    if (name == "swipl" || name == "swi") return Dialect::Swipl;
    if (name == "sicstus") return Dialect::Sicstus;
    return std::nullopt;
}

std::string dialectName(Dialect dialect) {
    return dialect == Dialect::Swipl ? "swipl" : "sicstus";
}

std::string SourceLoc::str() const {
    std::ostringstream out;
    out << (file.empty() ? "<none>" : file) << ":" << line << ":" << column;
    return out.str();
}

bool Term::isGround() const {
    if (kind == TermKind::Var) return false;
    for (const auto& arg : args) {
        if (!arg->isGround()) return false;
    }
    return true;
}

std::optional<std::vector<TermPtr>> Term::properListElements() const {
    std::vector<TermPtr> elements;
    const Term* current = this;
    while (true) {
        if (current->isNil()) return elements;
        if (!current->isCons()) return std::nullopt;
        elements.push_back(current->args[0]);
        current = current->args[1].get();
    }
}

TermPtr Term::makeVar(std::string name, int id, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Var;
    t->text = std::move(name);
    t->varId = id;
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeAtom(std::string name, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Atom;
    t->text = std::move(name);
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeInt(long long value, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Int;
    t->intValue = value;
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeFloat(double value, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Float;
    t->floatValue = value;
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeString(std::string value, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Str;
    t->text = std::move(value);
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeCompound(std::string functor, std::vector<TermPtr> args, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->kind = TermKind::Compound;
    t->text = std::move(functor);
    t->args = std::move(args);
    t->loc = std::move(loc);
    return t;
}

TermPtr Term::makeList(const std::vector<TermPtr>& elements, SourceLoc loc) {
    TermPtr tail = makeAtom("[]", loc);
    for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
        tail = makeCompound(".", {*it, tail}, loc);
    }
    return tail;
}

bool structurallyEqual(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case TermKind::Var: return a.varId == b.varId;
        case TermKind::Atom: return a.text == b.text;
        case TermKind::Int: return a.intValue == b.intValue;
        case TermKind::Float: return a.floatValue == b.floatValue;
        case TermKind::Str: return a.text == b.text;
        case TermKind::Compound: {
            if (a.text != b.text || a.args.size() != b.args.size()) return false;
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (!structurallyEqual(*a.args[i], *b.args[i])) return false;
            }
            return true;
        }
    }
    return false;
}

std::string PredicateIndicator::str() const {
    std::ostringstream out;
    if (!module.empty() && module != "user") out << module << ":";
    out << name << "/" << arity;
    return out.str();
}

const FileModule* Program::moduleOfFile(const std::string& file) const {
    auto it = fileModules.find(file);
    return it == fileModules.end() ? nullptr : &it->second;
}

std::string Program::moduleName(const std::string& file) const {
    const FileModule* m = moduleOfFile(file);
    return m ? m->name : "user";
}

// ---------------------------------------------------------------------------
// Term printing
// ---------------------------------------------------------------------------

namespace {

bool isSymbolChar(char c) {
    static const std::string symbols = "+-*/\\^<>=~:.?@#&$";
    return symbols.find(c) != std::string::npos;
}

bool atomNeedsQuotes(const std::string& text) {
    if (text.empty()) return true;
    if (text == "[]" || text == "{}" || text == "!" || text == ";" || text == ",") return false;
    if (std::islower(static_cast<unsigned char>(text[0]))) {
        for (char c : text) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
        }
        return false;
    }
    for (char c : text) {
        if (!isSymbolChar(c)) return true;
    }
    return false;
}

std::string quoteAtom(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c; break;
        }
    }
    out += "'";
    return out;
}

std::string formatFloat(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::string s = buf;
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

class TermPrinter {
public:
    TermPrinter(const PrintOptions& options, const OperatorTable& ops)
        : options_(options), ops_(ops) {}

    void print(std::ostream& out, const Term& t, int maxPriority) const {
        switch (t.kind) {
            case TermKind::Var:
                out << (t.text.empty() || t.text == "_" ? "_G" + std::to_string(t.varId) : t.text);
                return;
            case TermKind::Int:
                out << t.intValue;
                return;
            case TermKind::Float:
                out << formatFloat(t.floatValue);
                return;
            case TermKind::Str:
                out << '"';
                for (char c : t.text) {
                    if (c == '"') out << "\\\"";
                    else if (c == '\\') out << "\\\\";
                    else out << c;
                }
                out << '"';
                return;
            case TermKind::Atom:
                printAtom(out, t.text);
                return;
            case TermKind::Compound:
                printCompound(out, t, maxPriority);
                return;
        }
    }

private:
    void printAtom(std::ostream& out, const std::string& text) const {
        if (options_.quoted && atomNeedsQuotes(text)) out << quoteAtom(text);
        else out << text;
    }

    void printCompound(std::ostream& out, const Term& t, int maxPriority) const {
        if (options_.listSugar && t.isCons()) {
            printList(out, t);
            return;
        }
        if (t.isCompound("{}", 1)) {
            out << "{";
            print(out, *t.args[0], 1200);
            out << "}";
            return;
        }
        if (options_.useOperators && t.args.size() == 2) {
            if (const OpDef* op = ops_.infix(t.text)) {
                int leftMax = op->priority - (op->type == OpType::Yfx ? 0 : 1);
                int rightMax = op->priority - (op->type == OpType::Xfy ? 0 : 1);
                bool paren = op->priority > maxPriority;
                if (paren) out << "(";
                print(out, *t.args[0], leftMax);
                if (t.text == ",") out << ", ";
                else out << (needsSpace(t.text) ? " " + t.text + " " : t.text);
                print(out, *t.args[1], rightMax);
                if (paren) out << ")";
                return;
            }
        }
        if (options_.useOperators && t.args.size() == 1) {
            if (const OpDef* op = ops_.prefix(t.text)) {
                int argMax = op->priority - (op->type == OpType::Fx ? 1 : 0);
                bool paren = op->priority > maxPriority;
                if (paren) out << "(";
                printAtom(out, t.text);
                out << " ";
                print(out, *t.args[0], argMax);
                if (paren) out << ")";
                return;
            }
        }
        printAtom(out, t.text);
        out << "(";
        for (size_t i = 0; i < t.args.size(); ++i) {
            if (i > 0) out << ",";
            print(out, *t.args[i], 999);
        }
        out << ")";
    }

    void printList(std::ostream& out, const Term& t) const {
        out << "[";
        const Term* current = &t;
        bool first = true;
        while (current->isCons()) {
            if (!first) out << ",";
            print(out, *current->args[0], 999);
            first = false;
            current = current->args[1].get();
        }
        if (!current->isNil()) {
            out << "|";
            print(out, *current, 999);
        }
        out << "]";
    }

    static bool needsSpace(const std::string& op) {
        // Alphabetic operators (is, mod, ...) always need surrounding space;
        // symbolic ones get it too for readability.
        return true;
    }

    const PrintOptions& options_;
    const OperatorTable& ops_;
};

}  // namespace

std::string printTerm(const Term& term, const PrintOptions& options) {
    static const OperatorTable table = OperatorTable::standard(Dialect::Swipl);
    std::ostringstream out;
    TermPrinter printer(options, table);
    printer.print(out, term, 1200);
    return out.str();
}

std::string printTerm(const TermPtr& term, const PrintOptions& options) {
    return printTerm(*term, options);
}

}  // namespace plstatic
