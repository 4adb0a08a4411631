#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle_support.hpp"

#include "plstatic/reader.hpp"

using namespace plstatic;
using namespace plstatic::testing;

// A reduced-size run of the lattice oracle suite for the regular test cycle;
// the acceptance suite runs the full configuration.
TEST_CASE("lattice laws and inhabitation oracle") {
    OracleReport report = runOracleSuite(1500, 20240901);
    INFO(report.firstFailure);
    CHECK(report.failures == 0);
    CHECK(report.pairsChecked == 1500);
}

TEST_CASE("corpus sanity") {
    auto corpus = termCorpus();
    CHECK(corpus.size() > 1000);
    TypeDefs defs;
    // every ground literal inhabits its own abstraction
    for (const auto& t : corpus) {
        Spec a = normalize(abstractTerm(t), defs);
        if (!inhabits(t, a, defs)) {
            CAPTURE(printTerm(t));
            FAIL_CHECK("term does not inhabit its own abstraction");
            break;
        }
    }
}
