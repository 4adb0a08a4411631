// Shared generators and oracle checks for the lattice property suites: an
// enumerated term corpus, a random spec generator, and the inhabitation
// oracle that glb/lub/subtype are checked against.
#pragma once

#include "plstatic/abstraction.hpp"
#include "plstatic/lattice.hpp"
#include "plstatic/spec.hpp"
#include "plstatic/term.hpp"

#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace plstatic::testing {

/// All terms of depth <= 2 over atoms {a,b}, integers {1,2}, float 1.5, one
/// string, one variable and [] at the leaves, with functors f/1, f/2, node/3
/// and lists up to length 3. Deeper argument positions draw from a reduced
/// pool to keep the enumeration tractable.
inline std::vector<TermPtr> termCorpus() {
    std::vector<TermPtr> base = {
        Term::makeAtom("a"),   Term::makeAtom("b"),    Term::makeInt(1),
        Term::makeInt(2),      Term::makeFloat(1.5),   Term::makeString("s"),
        Term::makeVar("V", 0), Term::makeAtom("[]"),
    };

    auto build = [](const std::vector<TermPtr>& pool) {
        std::vector<TermPtr> out;
        for (const auto& x : pool) out.push_back(Term::makeCompound("f", {x}));
        for (const auto& x : pool) {
            for (const auto& y : pool) out.push_back(Term::makeCompound("f", {x, y}));
        }
        for (const auto& x : pool) {
            for (const auto& y : pool) {
                for (const auto& z : pool) out.push_back(Term::makeCompound("node", {x, y, z}));
            }
        }
        for (const auto& x : pool) out.push_back(Term::makeList({x}));
        for (const auto& x : pool) {
            for (const auto& y : pool) out.push_back(Term::makeList({x, y}));
        }
        for (const auto& x : pool) {
            for (const auto& y : pool) {
                for (const auto& z : pool) out.push_back(Term::makeList({x, y, z}));
            }
        }
        return out;
    };

    std::vector<TermPtr> corpus = base;
    std::vector<TermPtr> depth1 = build(base);
    corpus.insert(corpus.end(), depth1.begin(), depth1.end());

    std::vector<TermPtr> inner = {
        Term::makeAtom("a"),
        Term::makeInt(1),
        Term::makeVar("V", 0),
        Term::makeAtom("[]"),
        Term::makeCompound("f", {Term::makeInt(1)}),
        Term::makeCompound("f", {Term::makeVar("V", 0)}),
        Term::makeList({Term::makeAtom("a")}),
        Term::makeList({Term::makeInt(1), Term::makeVar("V", 0)}),
    };
    std::vector<TermPtr> depth2 = build(inner);
    corpus.insert(corpus.end(), depth2.begin(), depth2.end());
    return corpus;
}

/// Random specs of depth <= 3, free of user types and markers.
class SpecGen {
public:
    explicit SpecGen(unsigned seed) : rng_(seed) {}

    Spec next(const TypeDefs& defs) { return normalize(gen(3), defs); }

private:
    Spec gen(int depth) {
        int leafCount = 14;
        int max = depth > 0 ? leafCount + 6 : leafCount;
        switch (pick(max)) {
            case 0: return Spec::any();
            case 1: return Spec::var();
            case 2: return Spec::nonvar();
            case 3: return Spec::ground();
            case 4: return Spec::compoundAny();
            case 5: return Spec::atomic();
            case 6: return Spec::atom();
            case 7: return Spec::stringType();
            case 8: return Spec::number();
            case 9: return Spec::intType();
            case 10: return Spec::floatType();
            case 11: return Spec::emptyList();
            case 12: return Spec::exact("a");
            case 13: return Spec::exact("b");
            case 14: return Spec::list(gen(depth - 1));
            case 15: {
                std::vector<Spec> args;
                int n = 1 + pick(2);
                for (int i = 0; i < n; ++i) args.push_back(gen(depth - 1));
                return Spec::tuple(std::move(args));
            }
            case 16: {
                switch (pick(3)) {
                    case 0: return Spec::compound("f", {gen(depth - 1)});
                    case 1: return Spec::compound("f", {gen(depth - 1), gen(depth - 1)});
                    default:
                        return Spec::compound("node",
                                              {gen(depth - 1), gen(depth - 1), gen(depth - 1)});
                }
            }
            case 17:
                return Spec::compound(".", {gen(depth - 1), gen(depth - 1)});
            case 18: {
                std::vector<Spec> alts;
                int n = 2 + pick(2);
                for (int i = 0; i < n; ++i) alts.push_back(gen(depth - 1));
                return Spec::oneOf(std::move(alts));
            }
            default:
                return Spec::conj({gen(depth - 1), gen(depth - 1)});
        }
    }

    int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

    std::mt19937 rng_;
};

struct OracleReport {
    long long pairsChecked = 0;
    long long failures = 0;
    std::string firstFailure;
};

/// Runs the full oracle suite over `pairs` generated spec pairs:
///  - glb soundness and exactness against term inhabitation
///  - lub upper bound
///  - lattice laws (idempotence, commutativity, bounds)
///  - normalize idempotence
///  - subtype/inhabitation agreement
inline OracleReport runOracleSuite(int pairs, unsigned seed) {
    TypeDefs defs;
    OracleReport report;
    SpecGen gen(seed);
    std::vector<TermPtr> corpus = termCorpus();

    // memoized inhabitant sets, keyed by the canonical surface string
    std::map<std::string, std::vector<bool>> memo;
    auto inhabitants = [&](const Spec& s) -> const std::vector<bool>& {
        std::string key = s.str();
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        std::vector<bool> bits(corpus.size());
        for (size_t i = 0; i < corpus.size(); ++i) bits[i] = inhabits(corpus[i], s, defs);
        return memo.emplace(std::move(key), std::move(bits)).first->second;
    };

    auto fail = [&](const std::string& what, const Spec& a, const Spec& b) {
        ++report.failures;
        if (report.firstFailure.empty()) {
            std::ostringstream out;
            out << what << " for a=" << a.str() << " b=" << b.str();
            report.firstFailure = out.str();
        }
    };

    for (int k = 0; k < pairs; ++k) {
        Spec a = gen.next(defs);
        Spec b = gen.next(defs);
        ++report.pairsChecked;

        if (normalize(a, defs) != a) fail("normalize not idempotent", a, a);
        if (glb(a, a, defs) != a) fail("glb not idempotent", a, a);

        Spec meetAB = glb(a, b, defs);
        Spec meetBA = glb(b, a, defs);
        if (meetAB != meetBA) fail("glb not commutative", a, b);
        if (!subtype(meetAB, a, defs) || !subtype(meetAB, b, defs)) {
            fail("glb not a lower bound", a, b);
        }

        Spec joinAB = lub(a, b, defs);
        if (!subtype(a, joinAB, defs) || !subtype(b, joinAB, defs)) {
            fail("lub not an upper bound", a, b);
        }

        const auto& ia = inhabitants(a);
        const auto& ib = inhabitants(b);
        const auto& ig = inhabitants(meetAB);
        const auto& ij = inhabitants(joinAB);
        bool aBelowB = subtype(a, b, defs);
        for (size_t i = 0; i < corpus.size(); ++i) {
            bool both = ia[i] && ib[i];
            if (both != ig[i]) {
                fail(ig[i] ? "glb unsound" : "glb not exact", a, b);
                break;
            }
            if ((ia[i] || ib[i]) && !ij[i]) {
                fail("lub misses an inhabitant", a, b);
                break;
            }
            if (aBelowB && ia[i] && !ib[i]) {
                fail("subtype disagrees with inhabitation", a, b);
                break;
            }
        }
    }
    return report;
}

}  // namespace plstatic::testing
