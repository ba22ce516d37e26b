#include <doctest.h>

#include "bibscreen/corpus.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/synth.hpp"
#include "support.hpp"

using namespace bibscreen;
using testing::TinyCorpus;

namespace {

InstitutionRegistry saudi_registry() {
    return InstitutionRegistry::from_entries({
        {"ksu", "King Saud University", "SA", {}},
        {"kku", "King Khalid University", "SA", {"KKU"}},
        {"taif_u", "Taif University", "SA", {"Taif Univ."}},
    });
}

std::string line(const std::string& id, const std::string& type, const std::string& affil) {
    return R"({"record_id":")" + id + R"(","year":2023,"doc_type":")" + type +
           R"(","authors":[{"author_id":"a1","affiliations":[)" + affil + "]}]}\n";
}

}  // namespace

TEST_CASE("name normalization and registry resolution") {
    auto reg = saudi_registry();
    CHECK(reg.resolve("  king saud UNIVERSITY ") == std::optional<std::string>("ksu"));
    CHECK(reg.resolve("KKU") == std::optional<std::string>("kku"));
    CHECK(reg.resolve("Taif Univ.") == std::optional<std::string>("taif_u"));
    CHECK_FALSE(reg.resolve("Unknown Inst Z"));
    CHECK(reg.find("ksu")->country == "SA");
    CHECK_FALSE(reg.contains("nope"));
}

TEST_CASE("registry rejects conflicting entries") {
    CHECK_THROWS_AS(InstitutionRegistry::from_entries({{"a", "Same", "SA", {}}, {"a", "Other", "SA", {}}}),
                    DataError);
    CHECK_THROWS_AS(InstitutionRegistry::from_entries({{"a", "Same", "SA", {}}, {"b", "same", "SA", {}}}),
                    DataError);
}

TEST_CASE("registry file round trip in both layouts") {
    auto reg = saudi_registry();
    CHECK(InstitutionRegistry::parse(reg.to_json()) == reg);
    auto jsonl = R"({"institution_id":"x","canonical_name":"X University","country":"de"})";
    auto parsed = InstitutionRegistry::parse(jsonl);
    CHECK(parsed.find("x")->country == "DE");
    CHECK_THROWS_AS(InstitutionRegistry::parse("[{\"institution_id\":\"x\"}]"), DataError);
}

TEST_CASE("ingest filters document types") {
    auto reg = saudi_registry();
    std::string text = line("r1", "Article", R"({"institution_id":"ksu"})") +
                       line("r2", "review", R"({"institution_id":"ksu"})") +
                       line("r3", "Conference Paper", R"({"institution_id":"ksu"})");
    auto res = ingest_text(text, reg);
    CHECK(res.corpus.size() == 2);
    CHECK(res.report.accepted == 2);
    CHECK(res.report.filtered == 1);
    CHECK(res.report.rejected == 0);
}

TEST_CASE("ingest resolves alias strings and keeps unresolved ones") {
    auto reg = saudi_registry();
    auto res = ingest_text(line("r1", "article", R"({"institution":"Taif Univ."},{"institution":"Nowhere Lab","country":"pk"})"), reg);
    REQUIRE(res.corpus.size() == 1);
    const auto& a = res.corpus.record(0).authors[0].affiliations;
    CHECK(a[0].institution_id == "taif_u");
    CHECK(a[0].country == "SA");
    CHECK_FALSE(a[1].resolved());
    CHECK(a[1].raw == "Nowhere Lab");
    CHECK(a[1].country == "PK");
    CHECK(res.report.unresolved_affiliations == 1);
}

TEST_CASE("ingest accepts partially and reports rejects with reasons") {
    auto reg = saudi_registry();
    std::string text;
    for (int i = 0; i < 9; ++i) text += line("r" + std::to_string(i), "article", R"({"institution_id":"ksu"})");
    text += "{not json\n";
    auto res = ingest_text(text, reg);
    CHECK(res.corpus.size() == 9);
    REQUIRE(res.report.rejects.size() == 1);
    CHECK(res.report.rejects[0].line_number == 10);
    CHECK(res.report.rejected == 1);

    auto dup = ingest_text(line("x", "article", R"({"institution_id":"ksu"})") +
                               line("x", "article", R"({"institution_id":"kku"})"),
                           reg);
    CHECK(dup.corpus.size() == 1);
    CHECK(dup.report.rejected == 1);

    auto bad_country = ingest_text(line("y", "article", R"({"institution":"Lab","country":"ZZ"})"), reg);
    CHECK(bad_country.report.rejected == 1);
    CHECK(bad_country.report.rejects[0].reason.find("country") != std::string::npos);
}

TEST_CASE("ingest csv: one row per author affiliation") {
    auto reg = saudi_registry();
    std::string csv =
        "record_id,year,doc_type,subject_categories,author_id,author_pos,affil_pos,institution,institution_id,country\n"
        "r1,2023,Article,Mathematics;Physics,a1,1,1,,ksu,\n"
        "r1,2023,Article,Mathematics;Physics,a1,1,2,KKU,,\n"
        "r1,2023,Article,Mathematics;Physics,a2,2,1,Foreign Lab,,US\n"
        "r2,2022,Review,,a2,1,1,Taif University,,\n";
    auto res = ingest_text(csv, reg, {.doc_type_filter = {"article", "review"}, .years = {}, .format = InputFormat::csv});
    REQUIRE(res.corpus.size() == 2);
    const auto& r1 = res.corpus.record(0);
    CHECK(r1.subject_categories == std::vector<std::string>{"Mathematics", "Physics"});
    REQUIRE(r1.authors.size() == 2);
    CHECK(r1.authors[0].affiliations.size() == 2);
    CHECK(r1.authors[0].affiliations[1].institution_id == "kku");
    CHECK(r1.authors[1].affiliations[0].country == "US");
    CHECK(res.corpus.record(1).authors[0].affiliations[0].institution_id == "taif_u");
}

TEST_CASE("ingest year window") {
    auto reg = saudi_registry();
    std::string text = line("r1", "article", R"({"institution_id":"ksu"})");
    IngestOptions o;
    o.years = YearRange{2019, 2022};
    auto res = ingest_text(text, reg, o);
    CHECK(res.corpus.empty());
    CHECK(res.report.filtered == 1);
}

TEST_CASE("indexes match a naive scan on a generated corpus") {
    auto g = synth::generate(testing::bounded_spec(5, 5000));
    auto c = g.corpus();
    RecordIndex naive;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (const auto& a : c.record(i).authors)
            for (const auto& f : a.affiliations)
                if (f.resolved() && (naive[f.institution_id].empty() || naive[f.institution_id].back() != i))
                    naive[f.institution_id].push_back(i);
    CHECK(c.by_institution() == naive);
    CHECK(validate(c).clean());
}

TEST_CASE("validation findings") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "SA");
    t.rec("X", 2023, {{"a1", {"A"}}}).rec("X", 2023, {{"a2", {"B"}}});
    auto dup = validate(t.build());
    CHECK(dup.count(FindingKind::duplicate_record_id) == 1);
    CHECK(dup.findings[0].subject == "X");

    TinyCorpus u;
    u.inst("A", "SA").rec("r", 2023, {{"a1", {"A", "A"}}});
    CHECK(validate(u.build()).count(FindingKind::duplicate_affiliation) == 1);

    TinyCorpus clean;
    clean.inst("A", "SA").rec("r", 2023, {{"a1", {"A"}}});
    CHECK(validate(clean.build()).clean());
}

TEST_CASE("serialize and re-ingest is the identity") {
    auto g = synth::generate(testing::random_spec(77));
    auto c = g.corpus();
    auto back = ingest_text(serialize(c), c.registry()).corpus;
    CHECK(back == c);
    CHECK(serialize(back) == serialize(c));
}

TEST_CASE("unknown institution ids raise UnknownIdError") {
    TinyCorpus t;
    t.inst("A", "SA").rec("r", 2023, {{"a1", {"A"}}});
    auto c = t.build();
    CHECK_NOTHROW(c.require_institution("A"));
    CHECK_THROWS_AS(c.require_institution("Z"), UnknownIdError);
}
