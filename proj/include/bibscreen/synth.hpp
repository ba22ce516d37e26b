#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bibscreen/corpus.hpp"

namespace bibscreen::synth {

struct InstitutionSpec {
    std::string id;
    std::string name;  // defaults to id
    std::string country;
    std::int64_t base_output_per_year = 100;
    double annual_growth_pct = 0.0;  // compounded from the first year
    std::int64_t authors_pool_size = 50;
    double mean_authors_per_record = 3.9;
    double domestic_collab_prob = 0.1;
    double intl_collab_prob = 0.3;
};

enum class PlantKind {
    output_surge,
    hyperprolific_author,
    external_author,
    multi_affiliation_inflation,
    cross_group_author,
    overlap_boost,
};

std::string_view plant_kind_name(PlantKind kind);
PlantKind parse_plant_kind(std::string_view name);

/// Parameters by kind (defaults in brackets):
///   output_surge: multiplier [5], first_author_share [0.1], intl_share [0.9],
///                 expect_funnel [1]
///   hyperprolific_author: authors [1], yearly_count [40]
///   external_author: authors [1], records_per_author [10], secondary_fraction [0.8]
///   multi_affiliation_inflation: share [0.5]
///   cross_group_author: authors [1], records_per_author [12]
///   overlap_boost: records_per_year [10]
struct AnomalyPlant {
    std::string id;
    PlantKind kind = PlantKind::output_surge;
    std::vector<std::string> targets;
    std::map<std::string, double> params;
    std::vector<int> active_years;

    double param(const std::string& key) const;
};

struct GeneratorSpec {
    std::uint64_t seed = 1;
    YearRange years{2019, 2023};
    std::vector<std::string> subject_categories{"Chemistry", "Computer Science", "Engineering",
                                                "Mathematics", "Physics", "Materials Science"};
    double conference_fraction = 0.05;
    double review_fraction = 0.1;
    std::int64_t author_cap_per_year = 12;
    std::vector<InstitutionSpec> institutions;
    std::vector<AnomalyPlant> anomalies;

    /// Throws SpecError listing every violation.
    void validate() const;
    static GeneratorSpec from_json(std::string_view text);
    std::string to_json() const;
};

struct PlantTruth {
    std::string plant_id;
    PlantKind kind = PlantKind::output_surge;
    std::vector<std::string> targets;
    std::vector<std::string> record_ids;  // records created or edited by the plant
    std::vector<std::string> author_ids;  // authors created by the plant
    std::map<std::string, std::map<int, std::int64_t>> author_yearly;  // per created author
    std::map<int, std::int64_t> yearly_counts;  // planted records per year
    std::map<std::string, double> values;       // realized parameters and expectations
};

struct GroundTruth {
    std::uint64_t seed = 0;
    std::size_t records = 0;
    std::vector<PlantTruth> plants;

    const PlantTruth* find(std::string_view plant_id) const;
    std::vector<const PlantTruth*> of_kind(PlantKind kind) const;
    std::string to_jsonl() const;
};

struct Generated {
    std::vector<PublicationRecord> records;  // conference papers included
    InstitutionRegistry registry;
    GroundTruth truth;

    std::string records_jsonl() const;
    /// Article and review records only, as ingestion with default options keeps them.
    Corpus corpus() const;
};

/// Deterministic for a given spec; throws SpecError for invalid specs.
Generated generate(const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Ready-made specs

struct UniverseOptions {
    int institutions = 50;
    int surges = 3;
    int near_misses = 0;          // surging institutions with ordinary authorship dynamics
    int hyperprolific_authors = 2;
    int external_authors = 12;
    int cross_group_authors = 5;
    std::int64_t min_base_output = 150;
    std::int64_t max_base_output = 400;
};

/// A multi-country universe whose baseline growth stays within 20% of the
/// world average, with the requested plants placed on seeded institutions.
GeneratorSpec planted_universe(std::uint64_t seed, const UniverseOptions& options = {});

/// Roughly `records` baseline records spread over `institutions` institutions.
GeneratorSpec scale_spec(std::uint64_t seed, std::int64_t records = 100000, int institutions = 200);

// ---------------------------------------------------------------------------
// Transcribed published values

struct OutputRow {
    std::string id;
    std::string name;
    std::string country;
    bool study = true;
    std::int64_t articles_2019 = 0;
    std::int64_t articles_2023 = 0;
    std::int64_t change_pct = 0;
    std::optional<int> rank_2019;  // nullopt stands for "2000+"
    std::optional<int> rank_2023;
};

struct FirstAuthorRow {
    std::string id;
    int pct_2019 = 0;
    int pct_2023 = 0;
    int rank_2019 = 0;
    int rank_2023 = 0;
};

struct HyperprolificRow {
    std::string id;
    std::array<std::int64_t, 5> counts{};  // 2019 through 2023
};

struct MultiAffiliationRow {
    std::string id;
    int pct_2019 = 0;
    int pct_2023 = 0;
    int change = 0;
};

struct IntlCollabRow {
    std::string id;
    int pct_2019 = 0;
    int pct_2023 = 0;
    int rank_2019 = 0;
    int rank_2023 = 0;
};

struct SubjectRow {
    std::string id;
    bool study = true;
    std::int64_t articles_2019 = 0;
    std::int64_t articles_2023 = 0;
    int rank_2019 = 0;
    std::optional<int> rank_2023;  // nullopt: dropped out of the top 100
};

struct GroupFacts {
    std::int64_t study_distinct_2019 = 11202;
    std::int64_t study_distinct_2023 = 41026;
    int study_growth_pct = 266;
    int control_growth_pct = 10;
    int study_overlap_2019 = 6;
    int study_overlap_2023 = 18;
    int control_overlap_2019 = 2;
    int control_overlap_2023 = 3;
    std::int64_t study_hyperprolific_2019 = 18;
    std::int64_t study_hyperprolific_2023 = 260;
    int control_hyperprolific_per_institution = 2;
    std::array<int, 2> study_authors_per_article_x10{50, 64};
    std::array<int, 2> control_authors_per_article_x10{69, 81};
    std::array<int, 2> world_authors_per_article_x10{36, 39};
    std::array<int, 2> world_first_author{53, 50};
    int study_first_author_2019 = 50;
    int study_first_author_2023 = 28;
    int study_intl_2019 = 70;
    int study_intl_2023 = 81;
    int control_intl_2019 = 59;
    int control_intl_2023 = 62;
    int study_median_output_rank_2023 = 575;
    int study_median_first_author_rank_2019 = 713;
    int study_median_first_author_rank_2023 = 992;
    int study_median_intl_rank_2019 = 68;
    int study_median_intl_rank_2023 = 20;
    int external_institutions_2019 = 27;
    int external_institutions_2023 = 254;
    int external_institutions_change_pct = 840;
    int control_external_institutions_2019 = 137;
    int control_external_institutions_2023 = 175;
    int control_external_change_pct = 28;
    int cross_group_authors = 50;
    int cross_group_min_pubs = 10;
    int surge_case_2022 = 231;
    int surge_case_2023 = 516;
    int multi_case_pct = 83;
    int multi_case_mean_x10 = 34;
};

struct PaperFixtures {
    std::vector<OutputRow> output;
    std::vector<FirstAuthorRow> first_author;
    std::vector<HyperprolificRow> hyperprolific;
    std::vector<MultiAffiliationRow> multi_affiliation;
    std::vector<IntlCollabRow> intl_collab;
    std::vector<SubjectRow> mathematics;
    GroupFacts facts;

    const OutputRow& output_of(std::string_view id) const;
    std::vector<std::string> study_ids() const;
    std::vector<std::string> control_ids() const;
};

const PaperFixtures& paper_fixtures();

/// Typed fixture files keyed by file name, each carrying its data source.
std::map<std::string, std::string> fixture_files();

/// Registry of the 23 institutions in the fixtures.
InstitutionRegistry fixture_registry();

/// Records for 2019 and 2023 that reproduce the published output counts,
/// the study group's distinct totals (through records shared among members),
/// the first-author, multi-affiliation and international-collaboration rates,
/// and the group authors-per-article means. Unresolved filler co-authors
/// stand in for the rest of the world.
Corpus fixture_rates_corpus();

/// Five years of records realizing the published hyperprolific author counts.
Corpus fixture_hyperprolific_corpus();

/// Mathematics records for 2023 realizing the published world ranks, with
/// filler institutions occupying the ranks between the listed ones.
Corpus fixture_subject_corpus();

/// Two years in which `start` and then `end` external institutions pass the
/// network threshold around the study group.
Corpus network_growth_corpus(int start = 27, int end = 254, std::int64_t min_articles = 91);

}  // namespace bibscreen::synth
