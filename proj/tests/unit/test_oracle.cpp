#include <doctest.h>

#include <sstream>

#include "bibscreen/metrics_table.hpp"
#include "bibscreen/oracle.hpp"
#include "support.hpp"

using namespace bibscreen;
using testing::TinyCorpus;

namespace {

const char* kHeader = "institution_id,metric,year,value_raw,value_reported,rank\n";

bool has_line(const std::string& csv, const std::string& line) {
    return csv.find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_CASE("oracle on an empty corpus is the header alone") {
    CHECK(oracle::metrics_csv(std::string_view{}) == kHeader);
    CHECK(indicator_table_csv(indicator_table(Corpus({}, {}))) == kHeader);
}

TEST_CASE("oracle on four hand-built records") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "US");
    t.rec("r1", 2019, {{"x", {"A"}}, {"y", {"B"}}}, {"Mathematics"});
    t.rec("r2", 2023, {{"x", {"A"}}}, {"Mathematics"});
    t.rec("r3", 2023, {{"z", {"B"}}, {"x", {"A", "B"}}}, {"Physics"});
    t.rec("r4", 2023, {{"w", {"@DE"}}, {"x", {"A"}}}, {}, "conference paper");
    auto c = t.build();
    const auto text = serialize(c);
    const auto theirs = oracle::metrics_csv(text);

    // A: one record in 2019, two in 2023 (r4 is not an article or review).
    CHECK(has_line(theirs, "A,output_count,2019,1,1,1"));
    CHECK(has_line(theirs, "A,output_count,2023,2,2,1"));
    CHECK(has_line(theirs, "B,output_count,2023,1,1,2"));
    CHECK(has_line(theirs, "A,growth_pct,2023,100,100,1"));
    // A is first in r2 only; B leads in r3.
    CHECK(has_line(theirs, "A,first_author_pct,2023,50,50,2"));
    CHECK(has_line(theirs, "A,authors_per_article,2023,3/2,1.5,2"));
    CHECK(has_line(theirs, "A,multi_affiliation_pct,2023,50,50,2"));
    // The library counts what it is given; ingestion drops the conference paper.
    CHECK(theirs != indicator_table_csv(indicator_table(c)));
    CHECK(theirs == indicator_table_csv(indicator_table(ingest_text(text, c.registry()).corpus)));

    std::istringstream stream(text);
    CHECK(oracle::metrics_csv(stream) == theirs);
}

TEST_CASE("oracle rejects malformed lines") {
    CHECK_THROWS_AS(oracle::metrics_csv(std::string_view("{\"record_id\":1}\n")), oracle::ParseError);
    try {
        oracle::metrics_csv(std::string_view("\nnot json\n"));
        FAIL("expected ParseError");
    } catch (const oracle::ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("oracle agrees with the library on generated corpora") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CAPTURE(seed);
        CHECK(testing::oracle_mismatch(testing::random_spec(seed)) == "");
    }
}
