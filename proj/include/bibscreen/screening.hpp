#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bibscreen/authorship.hpp"
#include "bibscreen/corpus.hpp"
#include "bibscreen/indicators.hpp"
#include "bibscreen/network.hpp"
#include "bibscreen/rational.hpp"

namespace bibscreen::screening {

struct FunnelConfig {
    std::int64_t top_n_by_output = 1000;
    std::optional<Rational> growth_threshold_pct = Rational(130);
    std::optional<Rational> growth_multiple_of_world;  // e.g. 15 times world growth
    Rational world_growth_pct{87, 10};
    std::int64_t top_k_rank = 20;
    int start_year = 2019;
    int end_year = 2023;

    /// Throws SpecError listing every violated constraint.
    void validate() const;
    /// The larger of the absolute and world-multiple thresholds that are set.
    Rational effective_threshold() const;

    bool operator==(const FunnelConfig&) const = default;
};

struct Exclusion {
    std::string id;
    std::string reason;
};

struct Stage {
    std::string name;
    std::vector<std::string> survivors;  // sorted
    std::vector<Exclusion> excluded;     // sorted by id
};

/// Everything a funnel decision depends on for one institution.
struct Evidence {
    std::string id;
    std::int64_t start_output = 0;
    std::int64_t end_output = 0;
    int output_rank = 0;
    std::optional<Rational> growth;
    std::optional<Rational> first_author_start;
    std::optional<Rational> first_author_end;
    std::optional<Rational> first_author_drop;  // points, start minus end
    std::optional<int> drop_rank;
    std::optional<Rational> intl_start;
    std::optional<Rational> intl_end;
    std::optional<Rational> intl_rise;  // points, end minus start
    std::optional<int> rise_rank;
    std::optional<int> intl_end_rank;  // rank of intl_end among stage-1 institutions
};

/// Re-derives the final funnel decision from one evidence bundle.
bool recheck(const Evidence& evidence, const FunnelConfig& config);

struct ScreeningResult {
    FunnelConfig config;
    std::vector<Stage> stages;  // stage 0 is the corpus itself
    std::vector<std::string> final_flagged;
    std::map<std::string, Evidence> evidence;  // every stage-1 survivor
    std::vector<std::string> warnings;

    /// Box-style stage counts, ending with "final: N".
    std::string summary_markdown() const;
    /// One object per stage, then one per evidence bundle.
    std::string to_jsonl() const;
};

/// Throws DataError when the corpus lacks records in either boundary year.
ScreeningResult run_funnel(const Corpus& corpus, const FunnelConfig& config);

// ---------------------------------------------------------------------------
// Study versus control comparison

struct GroupPanel {
    indicators::GroupSummary summary;
    std::map<int, std::map<std::string, std::int64_t>> hyperprolific;  // year -> member -> count
    std::map<int, std::int64_t> hyperprolific_total;
    std::optional<Rational> cross_group_authors;  // count, for groups of two or more
};

struct ComparisonReport {
    YearRange years;
    GroupPanel study;
    GroupPanel control;

    std::string to_markdown() const;
    std::string to_json() const;
};

struct ComparisonOptions {
    authorship::HyperprolificOptions hyperprolific;
    std::int64_t cross_group_min_pubs = 10;
};

/// Throws UsageError naming shared members when the groups overlap.
ComparisonReport compare_groups(const Corpus& corpus, const std::vector<std::string>& study,
                                const std::vector<std::string>& control, const YearRange& years,
                                const ComparisonOptions& options = {});

// ---------------------------------------------------------------------------
// Red-flag dossiers

/// Authorship and network signals for one institution.
struct InstitutionSignals {
    std::string id;
    std::int64_t hyperprolific_end = 0;      // hyperprolific authors in the end year
    std::int64_t external_authors = 0;       // over the whole period
    std::optional<Rational> multi_affiliation_change;  // points, end minus start
    std::int64_t seed_links = 0;             // edges to other seed members
    std::int64_t seed_link_strength = 0;
};

struct DossierConfig {
    std::int64_t hyperprolific_min = 5;
    std::int64_t external_min = 1;
    Rational multi_affiliation_rise{10};
    std::int64_t overlap_min_links = 1;
    std::int64_t intl_rank_top_k = 20;
    std::int64_t external_min_pubs = 2;
    authorship::HyperprolificOptions hyperprolific;
};

struct DossierIndicator {
    std::string name;
    bool raised = false;
    std::string evidence;
};

struct Dossier {
    std::string institution_id;
    std::vector<DossierIndicator> indicators;
    int flags_raised = 0;

    std::string to_json() const;
};

/// Gathers per-institution signals; `graph` supplies seed links when given.
std::vector<InstitutionSignals> collect_signals(const Corpus& corpus,
                                                const std::vector<std::string>& institutions,
                                                const FunnelConfig& funnel,
                                                const DossierConfig& config,
                                                const network::CoauthorshipGraph* graph);

/// One dossier per signal entry. Institutions outside the stage-1 universe
/// have no intl-collab rank and never raise that indicator.
std::vector<Dossier> flag_report(const ScreeningResult& result,
                                 const std::vector<InstitutionSignals>& signals,
                                 const DossierConfig& config);

std::string dossiers_jsonl(const std::vector<Dossier>& dossiers);

}  // namespace bibscreen::screening
