#include "plstatic/spec.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace plstatic {

namespace {

bool atomNeedsQuoting(const std::string& text) {
    if (text.empty()) return true;
    if (text == "[]" || text == "{}" || text == "!" || text == ";") return false;
    if (!std::islower(static_cast<unsigned char>(text[0]))) return true;
    for (char c : text) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    }
    return false;
}

std::string printAtomText(const std::string& text) {
    if (!atomNeedsQuoting(text)) return text;
    std::string out = "'";
    for (char c : text) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += "'";
    return out;
}

}  // namespace

Spec Spec::leaf(SpecKind kind) {
    Spec s;
    s.kind_ = kind;
    return s;
}

Spec Spec::exact(std::string atomText) {
    if (atomText == "[]") return emptyList();
    Spec s;
    s.kind_ = SpecKind::Exact;
    s.name_ = std::move(atomText);
    return s;
}

Spec Spec::list(Spec element) {
    Spec s;
    s.kind_ = SpecKind::List;
    s.args_.push_back(std::move(element));
    return s;
}

Spec Spec::tuple(std::vector<Spec> args) {
    if (args.empty()) return emptyList();
    Spec s;
    s.kind_ = SpecKind::Tuple;
    s.args_ = std::move(args);
    return s;
}

Spec Spec::compound(std::string functor, std::vector<Spec> args) {
    Spec s;
    s.kind_ = SpecKind::Compound;
    s.name_ = std::move(functor);
    s.args_ = std::move(args);
    return s;
}

Spec Spec::oneOf(std::vector<Spec> alternatives) {
    if (alternatives.size() == 1) return alternatives[0];
    Spec s;
    s.kind_ = SpecKind::OneOf;
    s.args_ = std::move(alternatives);
    return s;
}

Spec Spec::conj(std::vector<Spec> conjuncts) {
    if (conjuncts.size() == 1) return conjuncts[0];
    Spec s;
    s.kind_ = SpecKind::And;
    s.args_ = std::move(conjuncts);
    return s;
}

Spec Spec::userDef(std::string name, std::vector<Spec> params) {
    Spec s;
    s.kind_ = SpecKind::UserDef;
    s.name_ = std::move(name);
    s.args_ = std::move(params);
    return s;
}

Spec Spec::specVar(std::string id) {
    Spec s;
    s.kind_ = SpecKind::SpecVar;
    s.name_ = std::move(id);
    return s;
}

Spec Spec::unionVar(std::string id) {
    Spec s;
    s.kind_ = SpecKind::UnionVar;
    s.name_ = std::move(id);
    return s;
}

Spec Spec::compatVar(std::string id) {
    Spec s;
    s.kind_ = SpecKind::CompatVar;
    s.name_ = std::move(id);
    return s;
}

Spec Spec::error(std::string description) {
    Spec s;
    s.kind_ = SpecKind::Error;
    s.name_ = std::move(description);
    return s;
}

bool Spec::containsMarker() const {
    if (kind_ == SpecKind::UnionVar || kind_ == SpecKind::CompatVar) return true;
    for (const Spec& a : args_) {
        if (a.containsMarker()) return true;
    }
    return false;
}

std::string Spec::str() const {
    std::ostringstream out;
    switch (kind_) {
        case SpecKind::Any: return "any";
        case SpecKind::Var: return "var";
        case SpecKind::Nonvar: return "nonvar";
        case SpecKind::Ground: return "ground";
        case SpecKind::CompoundAny: return "compound";
        case SpecKind::Atomic: return "atomic";
        case SpecKind::Atom: return "atom";
        case SpecKind::Str: return "string";
        case SpecKind::Number: return "number";
        case SpecKind::Int: return "int";
        case SpecKind::Float: return "float";
        case SpecKind::EmptyList: return "atom([])";
        case SpecKind::Exact:
            out << "atom(" << printAtomText(name_) << ")";
            return out.str();
        case SpecKind::List:
            out << "list(" << args_[0].str() << ")";
            return out.str();
        case SpecKind::Tuple: {
            out << "tuple([";
            for (size_t i = 0; i < args_.size(); ++i) {
                if (i) out << ",";
                out << args_[i].str();
            }
            out << "])";
            return out.str();
        }
        case SpecKind::Compound: {
            out << "compound(" << printAtomText(name_) << "(";
            for (size_t i = 0; i < args_.size(); ++i) {
                if (i) out << ",";
                out << args_[i].str();
            }
            out << "))";
            return out.str();
        }
        case SpecKind::OneOf:
        case SpecKind::And: {
            out << (kind_ == SpecKind::OneOf ? "one_of([" : "and([");
            for (size_t i = 0; i < args_.size(); ++i) {
                if (i) out << ",";
                out << args_[i].str();
            }
            out << "])";
            return out.str();
        }
        case SpecKind::UserDef: {
            out << printAtomText(name_);
            if (!args_.empty()) {
                out << "(";
                for (size_t i = 0; i < args_.size(); ++i) {
                    if (i) out << ",";
                    out << args_[i].str();
                }
                out << ")";
            }
            return out.str();
        }
        case SpecKind::SpecVar:
            out << "specvar(" << name_ << ")";
            return out.str();
        case SpecKind::UnionVar:
            out << "union(" << name_ << ")";
            return out.str();
        case SpecKind::CompatVar:
            out << "compatible(" << name_ << ")";
            return out.str();
        case SpecKind::Error:
            return "none";
    }
    return "?";
}

int compareSpecs(const Spec& a, const Spec& b) {
    if (a.kind() != b.kind()) {
        return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
    }
    if (a.kind() == SpecKind::Error) return 0;  // notes are diagnostics only
    if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
    size_t n = std::min(a.args().size(), b.args().size());
    for (size_t i = 0; i < n; ++i) {
        int c = compareSpecs(a.args()[i], b.args()[i]);
        if (c != 0) return c;
    }
    if (a.args().size() != b.args().size()) {
        return a.args().size() < b.args().size() ? -1 : 1;
    }
    return 0;
}

bool TypeDefs::add(const std::string& name, TypeDef def) {
    auto key = std::make_pair(name, static_cast<int>(def.params.size()));
    return defs_.emplace(key, std::move(def)).second;
}

const TypeDef* TypeDefs::find(const std::string& name, int paramCount) const {
    auto it = defs_.find({name, paramCount});
    return it == defs_.end() ? nullptr : &it->second;
}

namespace {

Spec substituteSpecVars(const Spec& body, const std::map<std::string, Spec>& binding) {
    if (body.is(SpecKind::SpecVar)) {
        auto it = binding.find(body.name());
        return it == binding.end() ? body : it->second;
    }
    if (body.args().empty()) return body;
    std::vector<Spec> args;
    args.reserve(body.args().size());
    for (const Spec& a : body.args()) args.push_back(substituteSpecVars(a, binding));
    switch (body.kind()) {
        case SpecKind::List: return Spec::list(args[0]);
        case SpecKind::Tuple: return Spec::tuple(std::move(args));
        case SpecKind::Compound: return Spec::compound(body.name(), std::move(args));
        case SpecKind::OneOf: return Spec::oneOf(std::move(args));
        case SpecKind::And: return Spec::conj(std::move(args));
        case SpecKind::UserDef: return Spec::userDef(body.name(), std::move(args));
        default: return body;
    }
}

}  // namespace

Spec TypeDefs::unfold(const Spec& user) const {
    const TypeDef* def = find(user.name(), static_cast<int>(user.args().size()));
    if (!def) throw UndefinedSpecError(user.name(), static_cast<int>(user.args().size()));
    std::map<std::string, Spec> binding;
    for (size_t i = 0; i < def->params.size(); ++i) binding[def->params[i]] = user.args()[i];
    return substituteSpecVars(def->body, binding);
}

Spec specFromTerm(const Term& term, Dialect dialect) {
    switch (term.kind) {
        case TermKind::Var:
            return Spec::error("variable used as spec expression");
        case TermKind::Int:
        case TermKind::Float:
            return Spec::error("number used as spec expression");
        case TermKind::Str:
            return Spec::error("string literal used as spec expression");
        case TermKind::Atom: {
            const std::string& n = term.text;
            if (n == "any") return Spec::any();
            if (n == "var") return Spec::var();
            if (n == "nonvar") return Spec::nonvar();
            if (n == "ground") return Spec::ground();
            if (n == "compound") return Spec::compoundAny();
            if (n == "atomic") return Spec::atomic();
            if (n == "atom") return Spec::atom();
            if (n == "string") {
                if (dialect == Dialect::Sicstus) {
                    return Spec::error("string type is not available under dialect sicstus");
                }
                return Spec::stringType();
            }
            if (n == "number") return Spec::number();
            if (n == "int" || n == "integer") return Spec::intType();
            if (n == "float") return Spec::floatType();
            if (n == "[]") return Spec::emptyList();
            return Spec::userDef(n);
        }
        case TermKind::Compound: {
            const std::string& f = term.text;
            auto sub = [&](size_t i) { return specFromTerm(*term.args[i], dialect); };
            if (f == "atom" && term.args.size() == 1) {
                if (!term.args[0]->isAtom()) return Spec::error("atom/1 spec needs an atom");
                return Spec::exact(term.args[0]->text);
            }
            if (f == "list" && term.args.size() == 1) {
                Spec e = sub(0);
                return e.isError() ? e : Spec::list(std::move(e));
            }
            if (f == "tuple" && term.args.size() == 1) {
                auto elements = term.args[0]->properListElements();
                if (!elements) return Spec::error("tuple/1 spec needs a list of specs");
                std::vector<Spec> args;
                for (const auto& e : *elements) {
                    Spec s = specFromTerm(*e, dialect);
                    if (s.isError()) return s;
                    args.push_back(std::move(s));
                }
                return Spec::tuple(std::move(args));
            }
            if (f == "compound" && term.args.size() == 1) {
                const Term& inner = *term.args[0];
                if (!inner.isCompound()) {
                    return Spec::error("compound/1 spec needs a compound template");
                }
                std::vector<Spec> args;
                for (const auto& a : inner.args) {
                    Spec s = specFromTerm(*a, dialect);
                    if (s.isError()) return s;
                    args.push_back(std::move(s));
                }
                return Spec::compound(inner.text, std::move(args));
            }
            if ((f == "one_of" || f == "and") && term.args.size() == 1) {
                auto elements = term.args[0]->properListElements();
                if (!elements || elements->empty()) {
                    return Spec::error(f + "/1 spec needs a non-empty list of specs");
                }
                std::vector<Spec> args;
                for (const auto& e : *elements) {
                    Spec s = specFromTerm(*e, dialect);
                    if (s.isError()) return s;
                    args.push_back(std::move(s));
                }
                return f == "one_of" ? Spec::oneOf(std::move(args)) : Spec::conj(std::move(args));
            }
            if ((f == "specvar" || f == "union" || f == "compatible") && term.args.size() == 1) {
                const Term& id = *term.args[0];
                std::string name;
                if (id.isVar()) name = id.text.empty() ? "_" + std::to_string(id.varId) : id.text;
                else if (id.isAtom()) name = id.text;
                else return Spec::error(f + "/1 spec needs a variable name");
                if (f == "specvar") return Spec::specVar(name);
                if (f == "union") return Spec::unionVar(name);
                return Spec::compatVar(name);
            }
            // anything else is a user-defined parametric type
            std::vector<Spec> params;
            for (const auto& a : term.args) {
                Spec s = specFromTerm(*a, dialect);
                if (s.isError()) return s;
                params.push_back(std::move(s));
            }
            return Spec::userDef(f, std::move(params));
        }
    }
    return Spec::error("unsupported spec expression");
}

}  // namespace plstatic
