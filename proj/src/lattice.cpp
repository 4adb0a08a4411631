#include "plstatic/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace plstatic {

namespace {

// ---------------------------------------------------------------------------
// Built-in lattice nodes (used for subtype on leaves and for widening)
// ---------------------------------------------------------------------------

enum class Node {
    Any,
    Var,
    Nonvar,
    Ground,
    Compound,
    ListNode,
    EmptyList,
    Atomic,
    Atom,
    Str,
    Number,
    Int,
    Float,
};

const std::vector<Node>& ancestors(Node n) {
    static const std::map<Node, std::vector<Node>> table = {
        {Node::Any, {Node::Any}},
        {Node::Var, {Node::Var, Node::Any}},
        {Node::Nonvar, {Node::Nonvar, Node::Any}},
        {Node::Ground, {Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Compound, {Node::Compound, Node::Nonvar, Node::Any}},
        {Node::ListNode, {Node::ListNode, Node::Compound, Node::Nonvar, Node::Any}},
        {Node::EmptyList,
         {Node::EmptyList, Node::ListNode, Node::Compound, Node::Atomic, Node::Ground,
          Node::Nonvar, Node::Any}},
        {Node::Atomic, {Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Atom, {Node::Atom, Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Str, {Node::Str, Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Number, {Node::Number, Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Int, {Node::Int, Node::Number, Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
        {Node::Float,
         {Node::Float, Node::Number, Node::Atomic, Node::Ground, Node::Nonvar, Node::Any}},
    };
    return table.at(n);
}

bool nodeLeq(Node a, Node b) {
    const auto& up = ancestors(a);
    return std::find(up.begin(), up.end(), b) != up.end();
}

Node nodeJoin(Node a, Node b) {
    if (nodeLeq(a, b)) return b;
    if (nodeLeq(b, a)) return a;
    const auto& ua = ancestors(a);
    std::vector<Node> common;
    for (Node n : ancestors(b)) {
        if (std::find(ua.begin(), ua.end(), n) != ua.end()) common.push_back(n);
    }
    // pick a lowest common ancestor: nothing else in `common` lies below it
    for (Node candidate : common) {
        bool minimal = true;
        for (Node other : common) {
            if (other != candidate && nodeLeq(other, candidate)) {
                minimal = false;
                break;
            }
        }
        if (minimal) return candidate;
    }
    return Node::Any;
}

Spec nodeSpec(Node n) {
    switch (n) {
        case Node::Any: return Spec::any();
        case Node::Var: return Spec::var();
        case Node::Nonvar: return Spec::nonvar();
        case Node::Ground: return Spec::ground();
        case Node::Compound: return Spec::compoundAny();
        case Node::ListNode: return Spec::list(Spec::any());
        case Node::EmptyList: return Spec::emptyList();
        case Node::Atomic: return Spec::atomic();
        case Node::Atom: return Spec::atom();
        case Node::Str: return Spec::stringType();
        case Node::Number: return Spec::number();
        case Node::Int: return Spec::intType();
        case Node::Float: return Spec::floatType();
    }
    return Spec::any();
}

Node nodeOf(const Spec& s, const TypeDefs& defs, int userDepth) {
    switch (s.kind()) {
        case SpecKind::Any: return Node::Any;
        case SpecKind::Var: return Node::Var;
        case SpecKind::Nonvar: return Node::Nonvar;
        case SpecKind::Ground: return Node::Ground;
        case SpecKind::CompoundAny: return Node::Compound;
        case SpecKind::Atomic: return Node::Atomic;
        case SpecKind::Atom:
        case SpecKind::Exact: return Node::Atom;
        case SpecKind::Str: return Node::Str;
        case SpecKind::Number: return Node::Number;
        case SpecKind::Int: return Node::Int;
        case SpecKind::Float: return Node::Float;
        case SpecKind::EmptyList: return Node::EmptyList;
        case SpecKind::List:
        case SpecKind::Tuple: return Node::ListNode;
        case SpecKind::Compound: return Node::Compound;
        case SpecKind::OneOf: {
            Node acc = nodeOf(s.args()[0], defs, userDepth);
            for (size_t i = 1; i < s.args().size(); ++i) {
                acc = nodeJoin(acc, nodeOf(s.args()[i], defs, userDepth));
            }
            return acc;
        }
        case SpecKind::And:
            // any conjunct is an upper bound of the conjunction
            return nodeOf(s.args()[0], defs, userDepth);
        case SpecKind::UserDef: {
            if (userDepth <= 0) return Node::Any;
            try {
                return nodeOf(defs.unfold(s), defs, userDepth - 1);
            } catch (const UndefinedSpecError&) {
                return Node::Any;
            }
        }
        default: return Node::Any;
    }
}

// ---------------------------------------------------------------------------
// Subtyping
// ---------------------------------------------------------------------------

struct SpecPairLess {
    bool operator()(const std::pair<Spec, Spec>& x, const std::pair<Spec, Spec>& y) const {
        int c = compareSpecs(x.first, y.first);
        if (c != 0) return c < 0;
        return compareSpecs(x.second, y.second) < 0;
    }
};

using PairSet = std::set<std::pair<Spec, Spec>, SpecPairLess>;

bool subtypeRec(const Spec& a, const Spec& b, const TypeDefs& defs, PairSet& inProgress);

bool allArgsSubtype(const std::vector<Spec>& as, const Spec& b, const TypeDefs& defs,
                    PairSet& ip) {
    for (const Spec& a : as) {
        if (!subtypeRec(a, b, defs, ip)) return false;
    }
    return true;
}

bool subtypeRec(const Spec& a, const Spec& b, const TypeDefs& defs, PairSet& ip) {
    if (a.isError()) return true;
    if (b.is(SpecKind::Any)) return true;
    if (b.isError()) return false;
    if (a == b) return true;

    if (a.is(SpecKind::And)) {
        for (const Spec& c : a.args()) {
            if (subtypeRec(c, b, defs, ip)) return true;
        }
        // fall through: the conjunction may still be below b via b's own shape
    }
    if (b.is(SpecKind::And)) {
        for (const Spec& d : b.args()) {
            if (!subtypeRec(a, d, defs, ip)) return false;
        }
        return true;
    }
    if (a.is(SpecKind::OneOf)) {
        for (const Spec& alt : a.args()) {
            if (!subtypeRec(alt, b, defs, ip)) return false;
        }
        return true;
    }
    if (b.is(SpecKind::OneOf)) {
        for (const Spec& alt : b.args()) {
            if (subtypeRec(a, alt, defs, ip)) return true;
        }
        return false;
    }
    if (a.is(SpecKind::UserDef) || b.is(SpecKind::UserDef)) {
        auto key = std::make_pair(a, b);
        if (ip.count(key)) return true;  // coinductive: assume and verify
        ip.insert(key);
        bool result;
        if (a.is(SpecKind::UserDef)) result = subtypeRec(defs.unfold(a), b, defs, ip);
        else result = subtypeRec(a, defs.unfold(b), defs, ip);
        ip.erase(key);
        return result;
    }
    if (a.is(SpecKind::And)) return false;  // not below any single shape checked below
    if (a.is(SpecKind::SpecVar) || b.is(SpecKind::SpecVar)) return false;

    switch (b.kind()) {
        case SpecKind::Var:
            return false;  // a == Var was handled by equality
        case SpecKind::Nonvar:
            return !a.is(SpecKind::Var) && !a.is(SpecKind::Any);
        case SpecKind::Ground:
            switch (a.kind()) {
                case SpecKind::Atomic:
                case SpecKind::Atom:
                case SpecKind::Str:
                case SpecKind::Number:
                case SpecKind::Int:
                case SpecKind::Float:
                case SpecKind::EmptyList:
                case SpecKind::Exact:
                    return true;
                case SpecKind::List:
                    return subtypeRec(a.args()[0], b, defs, ip);
                case SpecKind::Tuple:
                case SpecKind::Compound:
                    return allArgsSubtype(a.args(), b, defs, ip);
                default:
                    return false;
            }
        case SpecKind::CompoundAny:
            switch (a.kind()) {
                case SpecKind::List:
                case SpecKind::Tuple:
                case SpecKind::Compound:
                case SpecKind::EmptyList:
                    return true;
                default:
                    return false;
            }
        case SpecKind::Atomic:
            switch (a.kind()) {
                case SpecKind::Atom:
                case SpecKind::Str:
                case SpecKind::Number:
                case SpecKind::Int:
                case SpecKind::Float:
                case SpecKind::EmptyList:
                case SpecKind::Exact:
                    return true;
                default:
                    return false;
            }
        case SpecKind::Atom:
            return a.is(SpecKind::Exact);
        case SpecKind::Number:
            return a.is(SpecKind::Int) || a.is(SpecKind::Float);
        case SpecKind::List: {
            const Spec& elem = b.args()[0];
            switch (a.kind()) {
                case SpecKind::EmptyList:
                    return true;
                case SpecKind::List:
                    return subtypeRec(a.args()[0], elem, defs, ip);
                case SpecKind::Tuple:
                    return allArgsSubtype(a.args(), elem, defs, ip);
                case SpecKind::Compound:
                    if (a.name() != "." || a.args().size() != 2) return false;
                    return subtypeRec(a.args()[0], elem, defs, ip) &&
                           subtypeRec(a.args()[1], b, defs, ip);
                default:
                    return false;
            }
        }
        case SpecKind::Tuple: {
            if (a.is(SpecKind::Tuple)) {
                if (a.args().size() != b.args().size()) return false;
                for (size_t i = 0; i < a.args().size(); ++i) {
                    if (!subtypeRec(a.args()[i], b.args()[i], defs, ip)) return false;
                }
                return true;
            }
            if (a.is(SpecKind::Compound) && a.name() == "." && a.args().size() == 2) {
                Spec rest = b.args().size() == 1
                                ? Spec::emptyList()
                                : Spec::tuple({b.args().begin() + 1, b.args().end()});
                return subtypeRec(a.args()[0], b.args()[0], defs, ip) &&
                       subtypeRec(a.args()[1], rest, defs, ip);
            }
            return false;
        }
        case SpecKind::Compound: {
            if (a.is(SpecKind::Compound)) {
                if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
                for (size_t i = 0; i < a.args().size(); ++i) {
                    if (!subtypeRec(a.args()[i], b.args()[i], defs, ip)) return false;
                }
                return true;
            }
            if (a.is(SpecKind::Tuple) && b.name() == "." && b.args().size() == 2) {
                Spec rest = a.args().size() == 1
                                ? Spec::emptyList()
                                : Spec::tuple({a.args().begin() + 1, a.args().end()});
                return subtypeRec(a.args()[0], b.args()[0], defs, ip) &&
                       subtypeRec(rest, b.args()[1], defs, ip);
            }
            return false;
        }
        default:
            return false;  // remaining leaves match only by equality
    }
}

// ---------------------------------------------------------------------------
// Normalization helpers
// ---------------------------------------------------------------------------

Spec meetRec(const Spec& a, const Spec& b, const TypeDefs& defs, MeetPolicy policy, int budget);

Spec bottom(const Spec& a, const Spec& b) {
    return Spec::error("no intersection of " + a.str() + " and " + b.str());
}

Spec makeListSpec(Spec elem) {
    if (elem.isError()) return Spec::emptyList();  // only [] has elements of the empty type
    return Spec::list(std::move(elem));
}

Spec makeTupleSpec(std::vector<Spec> args) {
    for (const Spec& a : args) {
        if (a.isError()) return a;
    }
    return Spec::tuple(std::move(args));
}

Spec makeCompoundSpec(const std::string& functor, std::vector<Spec> args) {
    for (const Spec& a : args) {
        if (a.isError()) return a;
    }
    if (functor == "." && args.size() == 2) {
        // reassemble explicit cons chains into tuples where the tail is known
        if (args[1].is(SpecKind::EmptyList)) return Spec::tuple({args[0]});
        if (args[1].is(SpecKind::Tuple)) {
            std::vector<Spec> all{args[0]};
            all.insert(all.end(), args[1].args().begin(), args[1].args().end());
            return Spec::tuple(std::move(all));
        }
    }
    return Spec::compound(functor, std::move(args));
}

Spec makeOneOfSpec(std::vector<Spec> alts, const TypeDefs& defs) {
    std::vector<Spec> flat;
    for (Spec& a : alts) {
        if (a.isError()) continue;
        if (a.is(SpecKind::OneOf)) {
            for (const Spec& inner : a.args()) flat.push_back(inner);
        } else {
            flat.push_back(std::move(a));
        }
    }
    if (flat.empty()) return Spec::error("empty union");
    std::sort(flat.begin(), flat.end(), specLess);
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.size() > 1) {
        std::vector<Spec> kept;
        for (size_t i = 0; i < flat.size(); ++i) {
            bool subsumed = false;
            for (size_t j = 0; j < flat.size() && !subsumed; ++j) {
                if (i != j && subtype(flat[i], flat[j], defs)) {
                    // drop i unless j is equally subsumed by i and i comes first
                    if (subtype(flat[j], flat[i], defs) && i < j) continue;
                    subsumed = true;
                }
            }
            if (!subsumed) kept.push_back(flat[i]);
        }
        flat = std::move(kept);
    }
    if (flat.size() == 1) return flat[0];
    if (static_cast<int>(flat.size()) > kWidenCap) {
        Node acc = nodeOf(flat[0], defs, 2);
        for (size_t i = 1; i < flat.size(); ++i) acc = nodeJoin(acc, nodeOf(flat[i], defs, 2));
        return nodeSpec(acc);
    }
    return Spec::oneOf(std::move(flat));
}

std::vector<Spec> altsOf(const Spec& s) {
    if (s.is(SpecKind::OneOf)) return s.args();
    return {s};
}

// ---------------------------------------------------------------------------
// Meet
// ---------------------------------------------------------------------------

Spec meetGround(const Spec& structural, const TypeDefs& defs, MeetPolicy policy, int budget,
                bool groundOnLeft) {
    // the dashed lattice edge: push groundness into components
    auto meetPart = [&](const Spec& part) {
        return groundOnLeft ? meetRec(Spec::ground(), part, defs, policy, budget)
                            : meetRec(part, Spec::ground(), defs, policy, budget);
    };
    switch (structural.kind()) {
        case SpecKind::List:
            return makeListSpec(meetPart(structural.args()[0]));
        case SpecKind::Tuple: {
            std::vector<Spec> args;
            for (const Spec& p : structural.args()) args.push_back(meetPart(p));
            return makeTupleSpec(std::move(args));
        }
        case SpecKind::Compound: {
            std::vector<Spec> args;
            for (const Spec& p : structural.args()) args.push_back(meetPart(p));
            return makeCompoundSpec(structural.name(), std::move(args));
        }
        case SpecKind::CompoundAny:
            return Spec::conj({Spec::compoundAny(), Spec::ground()});
        default:
            return bottom(structural, Spec::ground());
    }
}

Spec meetRec(const Spec& a, const Spec& b, const TypeDefs& defs, MeetPolicy policy, int budget) {
    if (a.isError()) return a;
    if (b.isError()) return b;

    // type-variable markers and unsubstituted specvars impose no constraint
    if (a.is(SpecKind::UnionVar) || a.is(SpecKind::CompatVar) || a.is(SpecKind::SpecVar)) return b;
    if (b.is(SpecKind::UnionVar) || b.is(SpecKind::CompatVar) || b.is(SpecKind::SpecVar)) return a;

    // Prolog-variable behaviour depends on the policy
    switch (policy) {
        case MeetPolicy::Unify:
            if (a.is(SpecKind::Var)) return b;
            if (b.is(SpecKind::Var)) return a;
            break;
        case MeetPolicy::Bind:
            if (a.is(SpecKind::Var)) return b;
            if (b.is(SpecKind::Var)) {
                if (admitsVar(a)) return Spec::var();
                return bottom(a, b);
            }
            break;
        case MeetPolicy::Narrow:
            if (admitsVar(a)) {
                Spec strict = meetRec(a, b, defs, MeetPolicy::Strict, budget);
                return makeOneOfSpec({Spec::var(), std::move(strict)}, defs);
            }
            policy = MeetPolicy::Strict;
            break;
        case MeetPolicy::Strict:
            break;
    }

    if (subtype(a, b, defs)) return a;
    if (subtype(b, a, defs)) return b;

    if (a.is(SpecKind::OneOf) || b.is(SpecKind::OneOf)) {
        std::vector<Spec> results;
        for (const Spec& x : altsOf(a)) {
            for (const Spec& y : altsOf(b)) {
                results.push_back(meetRec(x, y, defs, policy, budget));
            }
        }
        return makeOneOfSpec(std::move(results), defs);
    }
    if (a.is(SpecKind::And)) {
        Spec r = b;
        bool first = true;
        for (const Spec& c : a.args()) {
            r = first ? meetRec(c, r, defs, policy, budget)
                      : meetRec(r, c, defs, MeetPolicy::Strict, budget);
            first = false;
        }
        return r;
    }
    if (b.is(SpecKind::And)) {
        Spec r = a;
        for (const Spec& d : b.args()) r = meetRec(r, d, defs, policy, budget);
        return r;
    }
    if (a.is(SpecKind::UserDef) || b.is(SpecKind::UserDef)) {
        if (budget <= 0) {
            return Spec::error("user type unfold budget exhausted between " + a.str() + " and " +
                               b.str());
        }
        if (a.is(SpecKind::UserDef)) return meetRec(defs.unfold(a), b, defs, policy, budget - 1);
        return meetRec(a, defs.unfold(b), defs, policy, budget - 1);
    }

    // variables reach this point only under Strict/Narrow: no overlap
    if (a.is(SpecKind::Var) || b.is(SpecKind::Var)) return bottom(a, b);

    switch (a.kind()) {
        case SpecKind::Ground:
            return meetGround(b, defs, policy, budget, /*groundOnLeft=*/true);
        case SpecKind::CompoundAny:
            if (b.is(SpecKind::Ground)) return Spec::conj({Spec::compoundAny(), Spec::ground()});
            if (b.is(SpecKind::Atomic)) return Spec::emptyList();
            return bottom(a, b);
        case SpecKind::Atomic:
            if (b.is(SpecKind::CompoundAny) || b.is(SpecKind::List)) return Spec::emptyList();
            return bottom(a, b);
        case SpecKind::List: {
            const Spec& elem = a.args()[0];
            switch (b.kind()) {
                case SpecKind::Ground:
                    return meetGround(a, defs, policy, budget, /*groundOnLeft=*/false);
                case SpecKind::Atomic:
                    return Spec::emptyList();
                case SpecKind::List:
                    return makeListSpec(meetRec(elem, b.args()[0], defs, policy, budget));
                case SpecKind::Tuple: {
                    std::vector<Spec> args;
                    for (const Spec& t : b.args()) {
                        args.push_back(meetRec(elem, t, defs, policy, budget));
                    }
                    return makeTupleSpec(std::move(args));
                }
                case SpecKind::Compound:
                    if (b.name() == "." && b.args().size() == 2) {
                        return makeCompoundSpec(
                            ".", {meetRec(elem, b.args()[0], defs, policy, budget),
                                  meetRec(a, b.args()[1], defs, policy, budget)});
                    }
                    return bottom(a, b);
                default:
                    return bottom(a, b);
            }
        }
        case SpecKind::Tuple: {
            switch (b.kind()) {
                case SpecKind::Ground:
                    return meetGround(a, defs, policy, budget, /*groundOnLeft=*/false);
                case SpecKind::List: {
                    std::vector<Spec> args;
                    for (const Spec& t : a.args()) {
                        args.push_back(meetRec(t, b.args()[0], defs, policy, budget));
                    }
                    return makeTupleSpec(std::move(args));
                }
                case SpecKind::Tuple: {
                    if (a.args().size() != b.args().size()) return bottom(a, b);
                    std::vector<Spec> args;
                    for (size_t i = 0; i < a.args().size(); ++i) {
                        args.push_back(meetRec(a.args()[i], b.args()[i], defs, policy, budget));
                    }
                    return makeTupleSpec(std::move(args));
                }
                case SpecKind::Compound: {
                    if (b.name() != "." || b.args().size() != 2) return bottom(a, b);
                    Spec rest = a.args().size() == 1
                                    ? Spec::emptyList()
                                    : Spec::tuple({a.args().begin() + 1, a.args().end()});
                    return makeCompoundSpec(
                        ".", {meetRec(a.args()[0], b.args()[0], defs, policy, budget),
                              meetRec(rest, b.args()[1], defs, policy, budget)});
                }
                default:
                    return bottom(a, b);
            }
        }
        case SpecKind::Compound: {
            if (b.is(SpecKind::Ground)) {
                return meetGround(a, defs, policy, budget, /*groundOnLeft=*/false);
            }
            if (b.is(SpecKind::List) || b.is(SpecKind::Tuple)) {
                // handled symmetrically above; swap while preserving policy sides
                if (a.name() != "." || a.args().size() != 2) return bottom(a, b);
                if (b.is(SpecKind::List)) {
                    return makeCompoundSpec(
                        ".", {meetRec(a.args()[0], b.args()[0], defs, policy, budget),
                              meetRec(a.args()[1], b, defs, policy, budget)});
                }
                Spec rest = b.args().size() == 1
                                ? Spec::emptyList()
                                : Spec::tuple({b.args().begin() + 1, b.args().end()});
                return makeCompoundSpec(".",
                                        {meetRec(a.args()[0], b.args()[0], defs, policy, budget),
                                         meetRec(a.args()[1], rest, defs, policy, budget)});
            }
            if (b.is(SpecKind::Compound)) {
                if (a.name() != b.name() || a.args().size() != b.args().size()) {
                    return bottom(a, b);
                }
                std::vector<Spec> args;
                for (size_t i = 0; i < a.args().size(); ++i) {
                    args.push_back(meetRec(a.args()[i], b.args()[i], defs, policy, budget));
                }
                return makeCompoundSpec(a.name(), std::move(args));
            }
            return bottom(a, b);
        }
        default:
            // remaining left kinds are leaves; try the symmetric structural cases
            if (b.is(SpecKind::Ground) || b.is(SpecKind::CompoundAny) || b.is(SpecKind::Atomic) ||
                b.is(SpecKind::List) || b.is(SpecKind::Tuple) || b.is(SpecKind::Compound)) {
                // delegate to the cases above with sides swapped; all remaining
                // combinations are policy-insensitive (no Var involved)
                return meetRec(b, a, defs, MeetPolicy::Strict, budget);
            }
            return bottom(a, b);
    }
}

// ---------------------------------------------------------------------------
// Normalize
// ---------------------------------------------------------------------------

Spec normalizeRec(const Spec& s, const TypeDefs& defs) {
    switch (s.kind()) {
        case SpecKind::OneOf: {
            std::vector<Spec> alts;
            for (const Spec& a : s.args()) alts.push_back(normalizeRec(a, defs));
            return makeOneOfSpec(std::move(alts), defs);
        }
        case SpecKind::And: {
            Spec r = Spec::any();
            for (const Spec& c : s.args()) {
                r = meetRec(r, normalizeRec(c, defs), defs, MeetPolicy::Strict, kUserUnfoldBudget);
            }
            return r;
        }
        case SpecKind::List:
            return makeListSpec(normalizeRec(s.args()[0], defs));
        case SpecKind::Tuple: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(normalizeRec(a, defs));
            return makeTupleSpec(std::move(args));
        }
        case SpecKind::Compound: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(normalizeRec(a, defs));
            return makeCompoundSpec(s.name(), std::move(args));
        }
        case SpecKind::Exact:
            return s.name() == "[]" ? Spec::emptyList() : s;
        case SpecKind::UserDef: {
            if (!defs.defined(s.name(), static_cast<int>(s.args().size()))) {
                throw UndefinedSpecError(s.name(), static_cast<int>(s.args().size()));
            }
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(normalizeRec(a, defs));
            return Spec::userDef(s.name(), std::move(args));
        }
        default:
            return s;
    }
}

}  // namespace

bool subtype(const Spec& a, const Spec& b, const TypeDefs& defs) {
    PairSet inProgress;
    return subtypeRec(a, b, defs, inProgress);
}

Spec meet(const Spec& a, const Spec& b, const TypeDefs& defs, MeetPolicy policy) {
    return meetRec(a, b, defs, policy, kUserUnfoldBudget);
}

Spec glb(const Spec& a, const Spec& b, const TypeDefs& defs) {
    return meet(a, b, defs, MeetPolicy::Strict);
}

Spec lub(const Spec& a, const Spec& b, const TypeDefs& defs) {
    if (a.isError()) return b;
    if (b.isError()) return a;
    if (subtype(a, b, defs)) return b;
    if (subtype(b, a, defs)) return a;
    return makeOneOfSpec({a, b}, defs);
}

Spec normalize(const Spec& s, const TypeDefs& defs) {
    return normalizeRec(s, defs);
}

bool admitsVar(const Spec& s) {
    switch (s.kind()) {
        case SpecKind::Any:
        case SpecKind::Var:
        case SpecKind::SpecVar:
        case SpecKind::UnionVar:
        case SpecKind::CompatVar:
            return true;
        case SpecKind::OneOf: {
            for (const Spec& a : s.args()) {
                if (admitsVar(a)) return true;
            }
            return false;
        }
        case SpecKind::And: {
            for (const Spec& a : s.args()) {
                if (!admitsVar(a)) return false;
            }
            return true;
        }
        default:
            return false;
    }
}

Spec widenToLatticeNode(const Spec& s, const TypeDefs& defs) {
    return nodeSpec(nodeOf(s, defs, 2));
}

Spec relaxLiteral(const Spec& s) {
    switch (s.kind()) {
        case SpecKind::Var: return Spec::any();
        case SpecKind::Exact: return Spec::atom();
        case SpecKind::List: return Spec::list(relaxLiteral(s.args()[0]));
        case SpecKind::Tuple: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(relaxLiteral(a));
            return Spec::tuple(std::move(args));
        }
        case SpecKind::Compound: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(relaxLiteral(a));
            return Spec::compound(s.name(), std::move(args));
        }
        case SpecKind::OneOf: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(relaxLiteral(a));
            return Spec::oneOf(std::move(args));
        }
        default:
            return s;
    }
}

Spec widenExacts(const Spec& s) {
    switch (s.kind()) {
        case SpecKind::Exact: return Spec::atom();
        case SpecKind::List: return Spec::list(widenExacts(s.args()[0]));
        case SpecKind::Tuple: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(widenExacts(a));
            return Spec::tuple(std::move(args));
        }
        case SpecKind::Compound: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(widenExacts(a));
            return Spec::compound(s.name(), std::move(args));
        }
        case SpecKind::OneOf: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(widenExacts(a));
            return Spec::oneOf(std::move(args));
        }
        default:
            return s;
    }
}

Spec stripMarkers(const Spec& s) {
    switch (s.kind()) {
        case SpecKind::UnionVar:
        case SpecKind::CompatVar:
            return Spec::any();
        case SpecKind::List: return Spec::list(stripMarkers(s.args()[0]));
        case SpecKind::Tuple: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(stripMarkers(a));
            return Spec::tuple(std::move(args));
        }
        case SpecKind::Compound: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(stripMarkers(a));
            return Spec::compound(s.name(), std::move(args));
        }
        case SpecKind::OneOf: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(stripMarkers(a));
            return Spec::oneOf(std::move(args));
        }
        case SpecKind::And: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(stripMarkers(a));
            return Spec::conj(std::move(args));
        }
        case SpecKind::UserDef: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(stripMarkers(a));
            return Spec::userDef(s.name(), std::move(args));
        }
        default:
            return s;
    }
}

namespace {

// element type promised by the tail of a '.'-chain once conclusion-widened
Spec tailElements(const Spec& widenedTail, const TypeDefs& defs) {
    switch (widenedTail.kind()) {
        case SpecKind::List: return widenedTail.args()[0];
        case SpecKind::Tuple: {
            Spec acc = Spec::error("no elements");
            for (const Spec& t : widenedTail.args()) acc = lub(acc, t, defs);
            return acc;
        }
        case SpecKind::EmptyList: return Spec::error("no elements");
        default: return Spec::any();
    }
}

}  // namespace

Spec conclusionSpec(const Spec& s, const TypeDefs& defs) {
    switch (s.kind()) {
        case SpecKind::Exact:
            return Spec::atom();
        case SpecKind::EmptyList:
            return Spec::list(Spec::any());
        case SpecKind::Tuple: {
            Spec elem = Spec::error("no elements");
            for (const Spec& t : s.args()) elem = lub(elem, conclusionSpec(t, defs), defs);
            return normalize(Spec::list(elem), defs);
        }
        case SpecKind::Compound: {
            if (s.name() == "." && s.args().size() == 2) {
                Spec head = conclusionSpec(s.args()[0], defs);
                Spec tail = conclusionSpec(s.args()[1], defs);
                Spec elem = lub(head, tailElements(tail, defs), defs);
                return normalize(Spec::list(elem), defs);
            }
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(conclusionSpec(a, defs));
            return normalize(Spec::compound(s.name(), std::move(args)), defs);
        }
        case SpecKind::List:
            return normalize(Spec::list(conclusionSpec(s.args()[0], defs)), defs);
        case SpecKind::OneOf: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(conclusionSpec(a, defs));
            return normalize(Spec::oneOf(std::move(args)), defs);
        }
        case SpecKind::And: {
            std::vector<Spec> args;
            for (const Spec& a : s.args()) args.push_back(conclusionSpec(a, defs));
            return normalize(Spec::conj(std::move(args)), defs);
        }
        default:
            return s;
    }
}

}  // namespace plstatic
