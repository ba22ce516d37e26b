#include <doctest.h>

#include <algorithm>

#include "bibscreen/error.hpp"
#include "bibscreen/indicators.hpp"
#include "bibscreen/metrics_table.hpp"
#include "bibscreen/synth.hpp"
#include "support.hpp"

using namespace bibscreen;
using namespace bibscreen::indicators;
using testing::TinyCorpus;

namespace {

Rational pct(std::int64_t n, std::int64_t d) { return percent_of(n, d); }

}  // namespace

TEST_CASE("output count uses whole counting") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "US");
    t.rec("r1", 2023, {{"a1", {"A"}}, {"a2", {"A"}}});
    t.rec("r2", 2023, {{"a3", {"B"}}, {"a1", {"A"}}});
    t.rec("r3", 2022, {{"a1", {"A"}}});
    auto c = t.build();
    CHECK(output_count(c, "A", 2023) == 2);
    CHECK(output_count(c, "B", 2023) == 1);
    CHECK(output_count(c, "B", 2022) == 0);
    CHECK_THROWS_AS(output_count(c, "Z", 2023), UnknownIdError);
    CHECK(output_count(Corpus({}, t.registry()), "A", 2023) == 0);
}

TEST_CASE("growth percent") {
    CHECK(growth_pct(91, 1432)->round_half_up() == 1474);
    CHECK(growth_pct(4490, 11962)->round_half_up() == 166);
    CHECK(*growth_pct(37, 37) == Rational(0));
    CHECK_FALSE(growth_pct(0, 10));
}

TEST_CASE("first-author share on a three-record corpus") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "SA");
    t.rec("r1", 2023, {{"a1", {"A"}}, {"b1", {"B"}}});
    t.rec("r2", 2023, {{"a2", {"A"}}});
    t.rec("r3", 2023, {{"b1", {"B"}}, {"a1", {"A"}}});
    auto c = t.build();
    // A is first on r1 and r2 out of its three records.
    CHECK(*first_author_pct(c, "A", 2023) == pct(2, 3));
    CHECK(report_percent(first_author_pct(c, "A", 2023)) == "67");
    CHECK(first_author_counts(c, "B", 2023) == Ratio{1, 2});
    CHECK_FALSE(first_author_pct(c, "A", 2019));
}

TEST_CASE("authors per article") {
    TinyCorpus t;
    t.inst("A", "SA");
    t.rec("r1", 2023, {{"a1", {"A"}}, {"a2", {"A"}}, {"a3", {"A"}}});
    t.rec("r2", 2023, {{"a1", {"A"}}, {"a2", {"A"}}, {"a3", {"A"}}, {"a4", {"A"}}, {"a5", {"A"}}});
    t.rec("s1", 2022, {{"a1", {"A"}}});
    auto c = t.build();
    CHECK(*authors_per_article(c, std::string("A"), 2023) == Rational(4));
    CHECK(report_decimal(authors_per_article(c, std::string("A"), 2023)) == "4.0");
    CHECK(*authors_per_article(c, std::string("A"), 2022) == Rational(1));
    CHECK(*authors_per_article(c, WholeCorpus{}, 2023) == Rational(4));
}

TEST_CASE("international collaboration counts every affiliation country") {
    TinyCorpus t;
    t.inst("LAU", "LB");
    t.rec("r1", 2023, {{"a1", {"LAU"}}, {"a2", {"@PK"}}});
    t.rec("r2", 2023, {{"a1", {"LAU"}}});
    auto c = t.build();
    CHECK(*intl_collab_pct(c, "LAU", 2023) == Rational(50));

    TinyCorpus d;
    d.inst("A", "SA").inst("B", "SA");
    d.rec("r1", 2023, {{"a1", {"A"}}, {"a2", {"B"}}});
    CHECK(*intl_collab_pct(d.build(), "A", 2023) == Rational(0));
}

TEST_CASE("multi-affiliation share under the adopted reading") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "SA").inst("C", "US");
    t.rec("r1", 2023, {{"a1", {"A", "B"}}});             // qualifies
    t.rec("r2", 2023, {{"a2", {"A"}}});                  // plain
    t.rec("r3", 2023, {{"a3", {"A"}}, {"c1", {"C"}}});   // plain
    t.rec("r4", 2023, {{"a4", {"A"}}, {"x", {"@US"}}});  // plain
    auto c = t.build();
    CHECK(*multi_affiliation_pct(c, "A", 2023) == Rational(25));

    // Two co-authors listing only A, nobody with a second affiliation: the
    // record leaves the denominator.
    t.rec("r5", 2023, {{"a5", {"A"}}, {"a6", {"A"}}});
    auto c2 = t.build();
    CHECK(excluded_from_multi_affiliation(c2.record(4), "A", MultiAffiliationReading::exclude_sole_coauthors));
    CHECK(multi_affiliation_counts(c2, "A", 2023) == Ratio{1, 4});
    CHECK(multi_affiliation_counts(c2, "A", 2023, MultiAffiliationReading::all_records) == Ratio{1, 5});

    TinyCorpus single;
    single.inst("A", "SA").rec("r", 2023, {{"a", {"A"}}});
    CHECK(*multi_affiliation_pct(single.build(), "A", 2023) == Rational(0));
}

TEST_CASE("group overlap") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "SA").inst("C", "SA");
    for (int i = 0; i < 10; ++i) {
        std::vector<std::pair<std::string, std::vector<std::string>>> authors{{"x" + std::to_string(i), {"A"}}};
        if (i < 3) authors.push_back({"y" + std::to_string(i), {"B"}});
        if (i >= 7) authors = {{"z" + std::to_string(i), {"C"}}};
        t.rec("r" + std::to_string(i), 2023, authors);
    }
    auto c = t.build();
    CHECK(overlap_counts(c, {"A", "B", "C"}, 2023) == Ratio{3, 10});
    CHECK(*overlap_pct(c, {"A", "B", "C"}, 2023) == Rational(30));
    CHECK(*overlap_pct(c, {"A", "C"}, 2023) == Rational(0));
    CHECK(group_output(c, {"A", "B"}, 2023) == 7);
    CHECK_THROWS_AS(overlap_counts(c, {"A"}, 2023), UsageError);
}

TEST_CASE("competition ranking") {
    auto r = competition_rank({{"A", Rational(10)}, {"B", Rational(10)}, {"C", Rational(7)}, {"D", std::nullopt}},
                              Direction::descending);
    CHECK(r.rank_of("A") == 1);
    CHECK(r.rank_of("B") == 1);
    CHECK(r.rank_of("C") == 3);
    CHECK_FALSE(r.rank_of("D"));
    CHECK(r.no_data == std::vector<std::string>{"D"});

    auto s = competition_rank({{"A", Rational(50)}, {"B", Rational(28)}, {"C", Rational(28)}}, Direction::descending);
    CHECK(s.rank_of("B") == 2);
    CHECK(s.rank_of("C") == 2);
    auto one = competition_rank({{"A", Rational(1)}}, Direction::ascending);
    CHECK(one.rank_of("A") == 1);
}

TEST_CASE("ranking agrees with a naive sort on a 50-institution corpus") {
    synth::UniverseOptions o;
    o.min_base_output = 20;
    o.max_base_output = 40;
    auto c = synth::generate(synth::planted_universe(11, o)).corpus();
    for (auto m : {Metric::output_count, Metric::first_author_pct, Metric::intl_collab_pct}) {
        MetricQuery q{m, 2023, 0, ""};
        auto ranking = rank_institutions(c, q, Direction::descending);
        std::vector<std::pair<Rational, std::string>> vals;
        for (const auto& inst : c.registry().entries())
            if (auto v = metric_value(c, inst.id, q)) vals.push_back({*v, inst.id});
        for (const auto& [v, id] : vals) {
            int better = static_cast<int>(std::count_if(vals.begin(), vals.end(), [&](const auto& p) { return v < p.first; }));
            CHECK(ranking.rank_of(id) == better + 1);
        }
    }
}

TEST_CASE("subject output rank") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "SA");
    t.rec("r1", 2023, {{"a", {"A"}}}, {"Mathematics"});
    t.rec("r2", 2023, {{"a", {"A"}}}, {"Mathematics", "Physics"});
    t.rec("r3", 2023, {{"b", {"B"}}}, {"Physics"});
    auto c = t.build();
    auto r = subject_output_rank(c, "Mathematics", 2023);
    CHECK(r.rank_of("A") == 1);
    CHECK_FALSE(r.rank_of("B"));
    CHECK(subject_output_count(c, "A", "Physics", 2023) == 1);
}

TEST_CASE("median") {
    CHECK(*median({100, 3, 7}) == Rational(7));
    CHECK(*median({1, 2, 3, 10}) == Rational(5, 2));
    CHECK_FALSE(median({}));
}

TEST_CASE("single-member group summary equals the member series") {
    auto c = synth::generate(testing::random_spec(3)).corpus();
    const std::string id = c.by_institution().begin()->first;
    auto s = group_summary(c, "solo", {id}, {2019, 2023});
    for (const auto& y : s.years) {
        CHECK(y.summed_output == output_count(c, id, y.year));
        CHECK(y.distinct_output == output_count(c, id, y.year));
        CHECK(y.first_author == first_author_counts(c, id, y.year));
        CHECK(y.intl_collab == intl_collab_counts(c, id, y.year));
        CHECK_FALSE(y.overlap);
    }
}

TEST_CASE("metric names") {
    CHECK(parse_metric("first_author_pct") == Metric::first_author_pct);
    CHECK(metric_name(Metric::growth_pct) == "growth_pct");
    CHECK_THROWS_AS(parse_metric("bogus"), UsageError);
}

TEST_CASE("indicator table on a hand-built corpus") {
    TinyCorpus t;
    t.inst("A", "SA").inst("B", "US");
    t.rec("r1", 2022, {{"a1", {"A"}}, {"b1", {"B"}}}, {"Physics"});
    t.rec("r2", 2022, {{"a1", {"A", "B"}}});
    t.rec("r3", 2023, {{"b1", {"B"}}, {"a1", {"A"}}});
    t.rec("r4", 2023, {{"a2", {"A"}}});
    auto rows = indicator_table(t.build());
    auto find = [&](const std::string& inst, const std::string& metric, int year) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const IndicatorRow& r) {
            return r.institution_id == inst && r.metric == metric && r.year == year;
        });
        REQUIRE(it != rows.end());
        return *it;
    };
    // A: 2022 {r1, r2}, 2023 {r3, r4}.
    CHECK(find("A", "output_count", 2023).value_raw == "2");
    CHECK(find("A", "growth_pct", 2023).value_raw == "0");
    CHECK(find("A", "first_author_pct", 2023).value_raw == "50");
    CHECK(find("A", "authors_per_article", 2022).value_raw == "3/2");
    CHECK(find("A", "authors_per_article", 2022).value_reported == "1.5");
    CHECK(find("A", "intl_collab_pct", 2022).value_raw == "100");
    CHECK(find("A", "multi_affiliation_pct", 2022).value_raw == "50");
    CHECK(find("B", "first_author_pct", 2023).value_raw == "100");
    CHECK(find("B", "first_author_pct", 2023).rank == 1);
    CHECK(find("A", "first_author_pct", 2023).rank == 2);
    CHECK(find("B", "subject_output_count:Physics", 2022).value_raw == "1");
    CHECK_FALSE(find("A", "hyperprolific_count", 2022).rank);
    CHECK(indicator_table(Corpus{}).empty());
    CHECK(indicator_table_csv({}) == "institution_id,metric,year,value_raw,value_reported,rank\n");
}

// Values transcribed from SciVal (June 2024) and rebuilt through the fixture corpora.
TEST_CASE("fixture corpora reproduce the published rates") {
    auto c = synth::fixture_rates_corpus();
    CHECK(output_count(c, "al_mustaqbal", 2019) == 91);
    CHECK(output_count(c, "al_mustaqbal", 2023) == 1432);
    CHECK(report_percent(first_author_pct(c, "taif_u", 2019)) == "55");
    CHECK(report_percent(first_author_pct(c, "taif_u", 2023)) == "24");
    CHECK(report_percent(intl_collab_pct(c, "lau", 2019)) == "54");
    CHECK(report_percent(intl_collab_pct(c, "lau", 2023)) == "95");
    CHECK(report_percent(multi_affiliation_pct(c, "lau", 2019)) == "15");
    CHECK(report_percent(multi_affiliation_pct(c, "lau", 2023)) == "76");

    const auto& f = synth::paper_fixtures();
    auto study = group_summary(c, "study", f.study_ids(), {2019, 2023});
    CHECK(study.year(2019)->summed_output == 11976);
    CHECK(study.year(2019)->distinct_output == 11202);
    CHECK(study.year(2023)->distinct_output == 41026);
    CHECK(report_percent(study.growth_pct) == "266");
    CHECK(report_decimal(study.year(2019)->authors_per_article) == "5.0");
    CHECK(report_decimal(study.year(2023)->authors_per_article) == "6.4");
    CHECK(report_percent(study.year(2019)->overlap->percent()) == "6");
    CHECK(report_percent(study.year(2023)->overlap->percent()) == "18");
    auto control = group_summary(c, "control", f.control_ids(), {2019, 2023});
    CHECK(report_percent(control.growth_pct) == "10");
}

TEST_CASE("fixture subject corpus: Mathematics 2023") {
    auto c = synth::fixture_subject_corpus();
    CHECK(subject_output_count(c, "ksu", "Mathematics", 2023) == 470);
    CHECK(subject_output_rank(c, "Mathematics", 2023).rank_of("ksu") == 2);
}
