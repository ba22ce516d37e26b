#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bibscreen/corpus.hpp"
#include "bibscreen/rational.hpp"

namespace bibscreen::indicators {

struct WholeCorpus {};
using Group = std::vector<std::string>;
/// An institution id, a group of institution ids, or every record.
using Scope = std::variant<std::string, Group, WholeCorpus>;

/// Counts behind a rate. value() is 100 * numerator / denominator, or
/// nullopt when the denominator is zero.
struct Ratio {
    std::int64_t numerator = 0;
    std::int64_t denominator = 0;

    std::optional<Rational> percent() const;
    Ratio& operator+=(const Ratio& o) {
        numerator += o.numerator;
        denominator += o.denominator;
        return *this;
    }
    bool operator==(const Ratio&) const = default;
};

/// Reference values that cannot be computed from a local corpus.
struct WorldBaselines {
    Rational growth_pct{87, 10};
    Rational first_author_start{53};
    Rational first_author_end{50};
    Rational authors_per_article_start{36, 10};
    Rational authors_per_article_end{39, 10};
};

// ---------------------------------------------------------------------------
// Single-institution indicators. All throw UnknownIdError for ids missing
// from the registry.

/// Records in `year` with at least one author listing the institution.
std::int64_t output_count(const Corpus& corpus, std::string_view institution, int year);

/// 100 * (end - start) / start; nullopt when start is zero.
std::optional<Rational> growth_pct(std::int64_t n_start, std::int64_t n_end);

Ratio first_author_counts(const Corpus& corpus, std::string_view institution, int year);
std::optional<Rational> first_author_pct(const Corpus& corpus, std::string_view institution,
                                         int year);

/// Share of records whose affiliations span two or more countries.
Ratio intl_collab_counts(const Corpus& corpus, std::string_view institution, int year);
std::optional<Rational> intl_collab_pct(const Corpus& corpus, std::string_view institution,
                                        int year);

/// Which records leave the multi-affiliation denominator.
enum class MultiAffiliationReading {
    /// Drop records where two or more co-authors list the institution, each
    /// as their only affiliation, and nobody on the byline lists a second one.
    exclude_sole_coauthors,
    /// Keep every record of the institution.
    all_records,
};

/// Some author entry listing `institution` also lists another affiliation.
bool counts_as_multi_affiliated(const PublicationRecord& record, std::string_view institution);
bool excluded_from_multi_affiliation(const PublicationRecord& record, std::string_view institution,
                                     MultiAffiliationReading reading);

Ratio multi_affiliation_counts(
    const Corpus& corpus, std::string_view institution, int year,
    MultiAffiliationReading reading = MultiAffiliationReading::exclude_sole_coauthors);
std::optional<Rational> multi_affiliation_pct(
    const Corpus& corpus, std::string_view institution, int year,
    MultiAffiliationReading reading = MultiAffiliationReading::exclude_sole_coauthors);

/// Mean byline length over the scope's records in `year` (a group's records
/// are counted once each).
std::optional<Rational> authors_per_article(const Corpus& corpus, const Scope& scope, int year);

/// Records listing two or more group members over records listing at least
/// one. Throws UsageError for groups with fewer than two members.
Ratio overlap_counts(const Corpus& corpus, const Group& group, int year);
std::optional<Rational> overlap_pct(const Corpus& corpus, const Group& group, int year);

/// Distinct records in `year` listing at least one member.
std::int64_t group_output(const Corpus& corpus, const Group& group, int year);

std::int64_t subject_output_count(const Corpus& corpus, std::string_view institution,
                                  std::string_view category, int year);

// ---------------------------------------------------------------------------
// Rankings

enum class Direction { descending, ascending };

struct RankEntry {
    std::string institution_id;
    Rational value;
    int rank = 0;
};

struct Ranking {
    std::vector<RankEntry> entries;       // rank order, ties by institution id
    std::vector<std::string> no_data;     // sorted
    std::vector<std::string> warnings;

    std::optional<int> rank_of(std::string_view id) const;
    const RankEntry* find(std::string_view id) const;
};

/// Competition ranking: equal values share the smaller rank and the next
/// distinct value skips ahead ("1224").
Ranking competition_rank(std::vector<std::pair<std::string, std::optional<Rational>>> values,
                         Direction direction);

/// Institutions with at least one record carrying `category` in `year`.
Ranking subject_output_rank(const Corpus& corpus, std::string_view category, int year);

enum class Metric {
    output_count,
    growth_pct,
    first_author_pct,
    authors_per_article,
    intl_collab_pct,
    multi_affiliation_pct,
    subject_output_count,
};

std::string_view metric_name(Metric metric);
/// Throws UsageError naming the accepted metric names.
Metric parse_metric(std::string_view name);

struct MetricQuery {
    Metric metric = Metric::output_count;
    int year = 0;
    int base_year = 0;     // growth_pct only
    std::string category;  // subject_output_count only
};

/// nullopt when the metric has no data for this institution.
std::optional<Rational> metric_value(const Corpus& corpus, std::string_view institution,
                                     const MetricQuery& query);

/// Ranks `universe` (default: every registry entry) on one metric.
Ranking rank_institutions(const Corpus& corpus, const MetricQuery& query, Direction direction,
                          const std::vector<std::string>* universe = nullptr);

// ---------------------------------------------------------------------------
// Group aggregates

/// Median of the values; the mean of the two central values for even sizes.
std::optional<Rational> median(std::vector<std::int64_t> values);

struct GroupYear {
    int year = 0;
    std::int64_t summed_output = 0;
    std::int64_t distinct_output = 0;
    Ratio first_author;
    Ratio intl_collab;
    Ratio multi_affiliation;
    std::optional<Rational> authors_per_article;
    std::optional<Ratio> overlap;              // groups of two or more
    std::optional<Rational> median_output_rank;
    std::vector<std::string> unranked;        // members without output this year
};

struct GroupSummary {
    std::string group_id;
    std::vector<std::string> members;  // sorted
    std::vector<GroupYear> years;
    /// Growth of distinct group output between the first and last year.
    std::optional<Rational> growth_pct;
    /// Growth of the summed member counts between the same years.
    std::optional<Rational> summed_growth_pct;
    std::vector<std::string> notes;

    const GroupYear* year(int y) const;
};

/// Rates are record-weighted: member numerators and denominators are summed.
/// Output ranks are taken over every registry institution.
GroupSummary group_summary(const Corpus& corpus, const std::string& group_id, const Group& members,
                           const YearRange& years);

// ---------------------------------------------------------------------------
// Reporting helpers

/// Integer percent, half-up, or "n/a".
std::string report_percent(const std::optional<Rational>& value);
/// One decimal, half-up, or "n/a".
std::string report_decimal(const std::optional<Rational>& value);
/// "p", "p/q" or "n/a".
std::string report_raw(const std::optional<Rational>& value);

}  // namespace bibscreen::indicators
