#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bibscreen/corpus.hpp"
#include "bibscreen/rational.hpp"

namespace bibscreen::authorship {

struct AffiliationUsage {
    std::int64_t total = 0;         // records where the author's entry names it
    std::int64_t as_secondary = 0;  // ... at a position other than the first

    bool operator==(const AffiliationUsage&) const = default;
};

struct AuthorProfile {
    std::string author_id;
    std::map<int, std::int64_t> yearly_counts;
    std::map<std::string, AffiliationUsage> affiliation_usage;  // resolved institutions
    std::int64_t record_count = 0;
    std::int64_t multi_affiliation_records = 0;  // entry lists two or more affiliations
    std::int64_t affiliation_slots = 0;          // summed entry lengths

    std::int64_t count_in(int year) const;
    /// Zero when the profile has no records.
    Rational mean_affiliations() const;

    bool operator==(const AuthorProfile&) const = default;
};

/// Throws UnknownIdError when the author has no records.
AuthorProfile build_profile(const Corpus& corpus, std::string_view author_id);

enum class FlagKind { hyperprolific, external_author, surge, cross_group };

std::string_view flag_kind_name(FlagKind kind);

/// A detector decision with the numbers that produced it. `evidence` holds
/// every input of the decision rule, thresholds included, so decide() can
/// re-derive the flag without the corpus.
struct FlagRecord {
    std::string subject;
    FlagKind flag = FlagKind::hyperprolific;
    std::vector<int> years;
    std::string context;  // institution id, or group id for cross_group
    std::map<std::string, Rational> evidence;

    bool decide() const;
    std::string to_json() const;
};

std::string flags_jsonl(const std::vector<FlagRecord>& flags);

struct HyperprolificOptions {
    std::int64_t threshold = 36;
    bool inclusive = true;  // count >= threshold; false means count > threshold
};

/// Authors who list `institution` in their own entry on at least one record
/// in `year` and whose total output that year reaches the threshold.
std::vector<FlagRecord> hyperprolific_authors(const Corpus& corpus, std::string_view institution,
                                              int year, const HyperprolificOptions& options = {});

/// Authors with at least `min_pubs` records naming `institution` in their
/// entry, where a strict majority of those list it at a secondary position.
/// `year` restricts the records considered.
std::vector<FlagRecord> external_authors(const Corpus& corpus, std::string_view institution,
                                         std::int64_t min_pubs = 2,
                                         std::optional<int> year = std::nullopt);

struct Window {
    int first = 0;
    int last = 0;

    int length() const noexcept { return last - first + 1; }
};

struct SurgeOptions {
    int baseline_years = 5;
    int recent_years = 2;
    Rational ratio_threshold{10};
    Rational min_recent{36};
};

/// Flag iff mean(recent) >= ratio * max(1, mean(baseline)) and
/// mean(recent) >= min_recent. Years without records count as zero.
std::optional<FlagRecord> surge_detect(const AuthorProfile& profile, Window baseline, Window recent,
                                       Rational ratio_threshold, Rational min_recent);
/// Recent window ends at `last_year`; the baseline directly precedes it.
std::optional<FlagRecord> surge_detect(const AuthorProfile& profile, int last_year,
                                       const SurgeOptions& options = {});

/// Authors with more than `min_pubs` records whose own entry lists a group
/// member, spanning at least two distinct members.
std::vector<FlagRecord> cross_group_authors(const Corpus& corpus,
                                            const std::vector<std::string>& group,
                                            std::int64_t min_pubs = 10,
                                            std::string_view group_id = "group");

struct MultiAffiliationProfile {
    Rational pct_records_multi;
    Rational mean_affils;
};

/// Throws UsageError for an empty profile.
MultiAffiliationProfile multi_affiliation_profile(const AuthorProfile& profile);

/// Per-institution hyperprolific counts, one CSV row per institution and one
/// column per year.
std::string hyperprolific_table_csv(const Corpus& corpus, const std::vector<std::string>& institutions,
                                    const YearRange& years, const HyperprolificOptions& options = {});

}  // namespace bibscreen::authorship
