#include "plstatic/abstraction.hpp"

#include <set>
#include <utility>

namespace plstatic {

Spec abstractTerm(const Term& term) {
    switch (term.kind) {
        case TermKind::Var:
            return Spec::var();
        case TermKind::Atom:
            return term.text == "[]" ? Spec::emptyList() : Spec::exact(term.text);
        case TermKind::Int:
            return Spec::intType();
        case TermKind::Float:
            return Spec::floatType();
        case TermKind::Str:
            return Spec::stringType();
        case TermKind::Compound: {
            if (term.isGround()) {
                if (auto elements = term.properListElements()) {
                    std::vector<Spec> parts;
                    parts.reserve(elements->size());
                    for (const auto& e : *elements) parts.push_back(abstractTerm(*e));
                    return Spec::tuple(std::move(parts));
                }
            }
            std::vector<Spec> args;
            args.reserve(term.args.size());
            for (const auto& a : term.args) args.push_back(abstractTerm(*a));
            return Spec::compound(term.text, std::move(args));
        }
    }
    return Spec::any();
}

Spec abstractTerm(const TermPtr& term) { return abstractTerm(*term); }

namespace {

struct InhabitKey {
    const Term* term;
    Spec spec;

    friend bool operator<(const InhabitKey& a, const InhabitKey& b) {
        if (a.term != b.term) return a.term < b.term;
        return compareSpecs(a.spec, b.spec) < 0;
    }
};

bool inhabitsRec(const Term& t, const Spec& s, const TypeDefs& defs,
                 std::set<InhabitKey>& inProgress) {
    switch (s.kind()) {
        case SpecKind::Any:
            return true;
        case SpecKind::Error:
            return false;
        case SpecKind::Var:
            return t.isVar();
        case SpecKind::Nonvar:
            return !t.isVar();
        case SpecKind::Ground:
            return t.isGround();
        case SpecKind::CompoundAny:
            // in this domain the compound node covers lists including []
            return t.isCompound() || t.isNil();
        case SpecKind::Atomic:
            return t.isAtom() || t.kind == TermKind::Int || t.kind == TermKind::Float ||
                   t.kind == TermKind::Str;
        case SpecKind::Atom:
            return t.isAtom() && !t.isNil();
        case SpecKind::Str:
            return t.kind == TermKind::Str;
        case SpecKind::Number:
            return t.kind == TermKind::Int || t.kind == TermKind::Float;
        case SpecKind::Int:
            return t.kind == TermKind::Int;
        case SpecKind::Float:
            return t.kind == TermKind::Float;
        case SpecKind::EmptyList:
            return t.isNil();
        case SpecKind::Exact:
            return t.isAtom() && t.text == s.name();
        case SpecKind::List: {
            auto elements = t.properListElements();
            if (!elements) return false;
            for (const auto& e : *elements) {
                if (!inhabitsRec(*e, s.args()[0], defs, inProgress)) return false;
            }
            return true;
        }
        case SpecKind::Tuple: {
            auto elements = t.properListElements();
            if (!elements || elements->size() != s.args().size()) return false;
            for (size_t i = 0; i < elements->size(); ++i) {
                if (!inhabitsRec(*(*elements)[i], s.args()[i], defs, inProgress)) return false;
            }
            return true;
        }
        case SpecKind::Compound: {
            if (!t.isCompound() || t.text != s.name() || t.args.size() != s.args().size()) {
                return false;
            }
            for (size_t i = 0; i < t.args.size(); ++i) {
                if (!inhabitsRec(*t.args[i], s.args()[i], defs, inProgress)) return false;
            }
            return true;
        }
        case SpecKind::OneOf: {
            for (const Spec& alt : s.args()) {
                if (inhabitsRec(t, alt, defs, inProgress)) return true;
            }
            return false;
        }
        case SpecKind::And: {
            for (const Spec& c : s.args()) {
                if (!inhabitsRec(t, c, defs, inProgress)) return false;
            }
            return true;
        }
        case SpecKind::UserDef: {
            InhabitKey key{&t, s};
            if (inProgress.count(key)) return false;  // degenerate recursive definition
            inProgress.insert(key);
            bool result = inhabitsRec(t, defs.unfold(s), defs, inProgress);
            inProgress.erase(key);
            return result;
        }
        case SpecKind::SpecVar:
        case SpecKind::UnionVar:
        case SpecKind::CompatVar:
            return true;  // placeholders constrain nothing by themselves
    }
    return false;
}

}  // namespace

bool inhabits(const Term& term, const Spec& spec, const TypeDefs& defs) {
    std::set<InhabitKey> inProgress;
    return inhabitsRec(term, spec, defs, inProgress);
}

bool inhabits(const TermPtr& term, const Spec& spec, const TypeDefs& defs) {
    return inhabits(*term, spec, defs);
}

}  // namespace plstatic
