#include <algorithm>
#include <set>

#include "bibscreen/error.hpp"
#include "bibscreen/screening.hpp"

namespace bibscreen::screening {

using indicators::Direction;

void FunnelConfig::validate() const {
    std::vector<std::string> v;
    if (top_n_by_output < 1) v.push_back("top_n_by_output must be positive");
    if (top_k_rank < 1) v.push_back("top_k_rank must be positive");
    if (start_year >= end_year) v.push_back("start_year must precede end_year");
    if (!growth_threshold_pct && !growth_multiple_of_world)
        v.push_back("set growth_threshold_pct or growth_multiple_of_world");
    if (growth_threshold_pct && *growth_threshold_pct <= Rational(0))
        v.push_back("growth_threshold_pct must be positive");
    if (growth_multiple_of_world && *growth_multiple_of_world <= Rational(0))
        v.push_back("growth_multiple_of_world must be positive");
    if (world_growth_pct <= Rational(0)) v.push_back("world_growth_pct must be positive");
    if (!v.empty()) throw SpecError(std::move(v));
}

Rational FunnelConfig::effective_threshold() const {
    std::optional<Rational> t = growth_threshold_pct;
    if (growth_multiple_of_world) {
        Rational w = *growth_multiple_of_world * world_growth_pct;
        if (!t || w > *t) t = w;
    }
    if (!t) throw UsageError("no growth threshold configured");
    return *t;
}

bool recheck(const Evidence& e, const FunnelConfig& c) {
    if (e.output_rank < 1 || e.output_rank > c.top_n_by_output) return false;
    if (!e.growth || !(*e.growth > c.effective_threshold())) return false;
    bool drop = e.drop_rank && *e.drop_rank <= c.top_k_rank;
    bool rise = e.rise_rank && *e.rise_rank <= c.top_k_rank;
    return drop || rise;
}

namespace {

std::optional<Rational> difference(const std::optional<Rational>& a,
                                   const std::optional<Rational>& b) {
    if (!a || !b) return std::nullopt;
    return *a - *b;
}

std::string describe(const std::optional<int>& rank) {
    return rank ? std::to_string(*rank) : "n/a";
}

}  // namespace

ScreeningResult run_funnel(const Corpus& corpus, const FunnelConfig& config) {
    config.validate();
    bool has_start = false, has_end = false;
    for (const auto& r : corpus.records()) {
        has_start |= r.year == config.start_year;
        has_end |= r.year == config.end_year;
    }
    if (!has_start || !has_end)
        throw DataError("corpus has no records in " +
                        std::to_string(has_start ? config.end_year : config.start_year) +
                        ", a boundary year of the funnel");

    ScreeningResult res;
    res.config = config;
    const Rational threshold = config.effective_threshold();

    Stage s0{"corpus", {}, {}};
    for (const auto& [id, positions] : corpus.by_institution()) s0.survivors.push_back(id);

    // Stage 1: output rank in the end year.
    std::vector<std::pair<std::string, std::optional<Rational>>> outputs;
    for (const auto& id : s0.survivors)
        outputs.emplace_back(id, Rational(indicators::output_count(corpus, id, config.end_year)));
    auto output_rank = indicators::competition_rank(std::move(outputs), Direction::descending);
    if (static_cast<std::int64_t>(s0.survivors.size()) < config.top_n_by_output)
        res.warnings.push_back("only " + std::to_string(s0.survivors.size()) +
                               " institutions in the corpus, fewer than top_n_by_output " +
                               std::to_string(config.top_n_by_output) + "; stage 1 keeps all");
    Stage s1{"top_n_by_output", {}, {}};
    for (const auto& id : s0.survivors) {
        int rank = *output_rank.rank_of(id);
        if (rank <= config.top_n_by_output)
            s1.survivors.push_back(id);
        else
            s1.excluded.push_back({id, "output rank " + std::to_string(rank) + " > top_n " +
                                           std::to_string(config.top_n_by_output)});
    }

    // Evidence for the stage-1 universe; ranks are taken within it.
    std::vector<std::pair<std::string, std::optional<Rational>>> drops, rises, intl_end;
    for (const auto& id : s1.survivors) {
        Evidence e;
        e.id = id;
        e.start_output = indicators::output_count(corpus, id, config.start_year);
        e.end_output = indicators::output_count(corpus, id, config.end_year);
        e.output_rank = *output_rank.rank_of(id);
        e.growth = indicators::growth_pct(e.start_output, e.end_output);
        e.first_author_start = indicators::first_author_pct(corpus, id, config.start_year);
        e.first_author_end = indicators::first_author_pct(corpus, id, config.end_year);
        e.first_author_drop = difference(e.first_author_start, e.first_author_end);
        e.intl_start = indicators::intl_collab_pct(corpus, id, config.start_year);
        e.intl_end = indicators::intl_collab_pct(corpus, id, config.end_year);
        e.intl_rise = difference(e.intl_end, e.intl_start);
        drops.emplace_back(id, e.first_author_drop);
        rises.emplace_back(id, e.intl_rise);
        intl_end.emplace_back(id, e.intl_end);
        res.evidence.emplace(id, std::move(e));
    }
    auto drop_rank = indicators::competition_rank(std::move(drops), Direction::descending);
    auto rise_rank = indicators::competition_rank(std::move(rises), Direction::descending);
    auto end_rank = indicators::competition_rank(std::move(intl_end), Direction::descending);
    for (auto& [id, e] : res.evidence) {
        e.drop_rank = drop_rank.rank_of(id);
        e.rise_rank = rise_rank.rank_of(id);
        e.intl_end_rank = end_rank.rank_of(id);
    }

    Stage s2{"growth", {}, {}};
    for (const auto& id : s1.survivors) {
        const auto& e = res.evidence.at(id);
        if (!e.growth)
            s2.excluded.push_back({id, "growth undefined (no output in " +
                                           std::to_string(config.start_year) + ")"});
        else if (*e.growth > threshold)
            s2.survivors.push_back(id);
        else
            s2.excluded.push_back({id, "growth " + indicators::report_percent(e.growth) +
                                           "% <= threshold " + threshold.to_string() + "%"});
    }

    Stage s3{"authorship_dynamics", {}, {}};
    for (const auto& id : s2.survivors) {
        const auto& e = res.evidence.at(id);
        bool drop = e.drop_rank && *e.drop_rank <= config.top_k_rank;
        bool rise = e.rise_rank && *e.rise_rank <= config.top_k_rank;
        if (drop || rise)
            s3.survivors.push_back(id);
        else
            s3.excluded.push_back({id, "rank > top_k (first-author drop rank " +
                                           describe(e.drop_rank) + ", intl-collab rise rank " +
                                           describe(e.rise_rank) + ", top_k " +
                                           std::to_string(config.top_k_rank) + ")"});
    }

    res.final_flagged = s3.survivors;
    res.stages = {std::move(s0), std::move(s1), std::move(s2), std::move(s3)};
    return res;
}

// ---------------------------------------------------------------------------

ComparisonReport compare_groups(const Corpus& corpus, const std::vector<std::string>& study,
                                const std::vector<std::string>& control, const YearRange& years,
                                const ComparisonOptions& options) {
    if (study.empty() || control.empty()) throw UsageError("both groups must be non-empty");
    std::set<std::string> a(study.begin(), study.end()), b(control.begin(), control.end());
    std::vector<std::string> shared;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
    if (!shared.empty()) {
        std::string msg = "study and control groups share members:";
        for (const auto& s : shared) msg += " " + s;
        throw UsageError(msg);
    }

    auto panel = [&](const std::string& name, const std::vector<std::string>& members) {
        GroupPanel p;
        p.summary = indicators::group_summary(corpus, name, members, years);
        for (int y = years.first; y <= years.last; ++y) {
            std::int64_t total = 0;
            for (const auto& m : p.summary.members) {
                auto n = static_cast<std::int64_t>(
                    authorship::hyperprolific_authors(corpus, m, y, options.hyperprolific).size());
                p.hyperprolific[y][m] = n;
                total += n;
            }
            p.hyperprolific_total[y] = total;
        }
        if (p.summary.members.size() >= 2)
            p.cross_group_authors = Rational(static_cast<std::int64_t>(
                authorship::cross_group_authors(corpus, p.summary.members,
                                                options.cross_group_min_pubs, name)
                    .size()));
        return p;
    };

    ComparisonReport r;
    r.years = years;
    r.study = panel("study", study);
    r.control = panel("control", control);
    return r;
}

// ---------------------------------------------------------------------------

std::vector<InstitutionSignals> collect_signals(const Corpus& corpus,
                                                const std::vector<std::string>& institutions,
                                                const FunnelConfig& funnel,
                                                const DossierConfig& config,
                                                const network::CoauthorshipGraph* graph) {
    std::vector<InstitutionSignals> out;
    for (const auto& id : institutions) {
        InstitutionSignals s;
        s.id = id;
        s.hyperprolific_end = static_cast<std::int64_t>(
            authorship::hyperprolific_authors(corpus, id, funnel.end_year, config.hyperprolific)
                .size());
        s.external_authors = static_cast<std::int64_t>(
            authorship::external_authors(corpus, id, config.external_min_pubs).size());
        auto start = indicators::multi_affiliation_pct(corpus, id, funnel.start_year);
        auto end = indicators::multi_affiliation_pct(corpus, id, funnel.end_year);
        if (start && end) s.multi_affiliation_change = *end - *start;
        if (graph) {
            const auto* self = graph->find(id);
            for (const auto& e : graph->edges) {
                if (!self || !self->seed) break;
                const std::string* other = e.a == id ? &e.b : e.b == id ? &e.a : nullptr;
                if (!other) continue;
                const auto* node = graph->find(*other);
                if (node && node->seed) {
                    ++s.seed_links;
                    s.seed_link_strength += e.strength;
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Dossier> flag_report(const ScreeningResult& result,
                                 const std::vector<InstitutionSignals>& signals,
                                 const DossierConfig& config) {
    std::set<std::string> flagged(result.final_flagged.begin(), result.final_flagged.end());
    std::vector<Dossier> out;
    for (const auto& s : signals) {
        Dossier d;
        d.institution_id = s.id;
        auto add = [&](std::string name, bool raised, std::string evidence) {
            d.indicators.push_back({std::move(name), raised, std::move(evidence)});
            if (raised) ++d.flags_raised;
        };
        auto ev = result.evidence.find(s.id);
        std::string growth = ev == result.evidence.end()
                                 ? "outside stage 1"
                                 : "growth " + indicators::report_percent(ev->second.growth) + "%";
        add("funnel_passage", flagged.count(s.id) > 0, growth);
        add("hyperprolific", s.hyperprolific_end >= config.hyperprolific_min,
            std::to_string(s.hyperprolific_end) + " hyperprolific authors in " +
                std::to_string(result.config.end_year) + " (min " +
                std::to_string(config.hyperprolific_min) + ")");
        add("external_authors", s.external_authors >= config.external_min,
            std::to_string(s.external_authors) + " external authors (min " +
                std::to_string(config.external_min) + ")");
        add("multi_affiliation_rise",
            s.multi_affiliation_change && *s.multi_affiliation_change >= config.multi_affiliation_rise,
            "change " + indicators::report_percent(s.multi_affiliation_change) + " points (min " +
                config.multi_affiliation_rise.to_string() + ")");
        add("overlap_participation", s.seed_links >= config.overlap_min_links,
            std::to_string(s.seed_links) + " links to other seed members, strength " +
                std::to_string(s.seed_link_strength));
        std::optional<int> rank;
        if (ev != result.evidence.end()) rank = ev->second.intl_end_rank;
        add("intl_collab_rank", rank && *rank <= config.intl_rank_top_k,
            "end-year intl-collab rank " + (rank ? std::to_string(*rank) : std::string("n/a")) +
                " (top " + std::to_string(config.intl_rank_top_k) + ")");
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace bibscreen::screening
