#include "bibscreen/indicators.hpp"

#include <algorithm>
#include <set>

#include "bibscreen/error.hpp"

namespace bibscreen::indicators {

namespace {

template <typename Fn>
void for_each_in_year(const Corpus& corpus, std::string_view institution, int year, Fn&& fn) {
    corpus.require_institution(institution);
    for (std::size_t i : corpus.records_of_institution(institution)) {
        const auto& r = corpus.record(i);
        if (r.year == year) fn(r);
    }
}

/// Sorted, unique record positions in `year` that list any member.
std::vector<std::size_t> group_records(const Corpus& corpus, const Group& group, int year) {
    std::vector<std::size_t> out;
    for (const auto& m : group) {
        corpus.require_institution(m);
        for (std::size_t i : corpus.records_of_institution(m))
            if (corpus.record(i).year == year) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool multi_country(const PublicationRecord& r) {
    const std::string* first = nullptr;
    for (const auto& a : r.authors)
        for (const auto& f : a.affiliations) {
            if (!first)
                first = &f.country;
            else if (f.country != *first)
                return true;
        }
    return false;
}

}  // namespace

std::optional<Rational> Ratio::percent() const {
    if (denominator <= 0) return std::nullopt;
    return percent_of(numerator, denominator);
}

std::int64_t output_count(const Corpus& corpus, std::string_view institution, int year) {
    std::int64_t n = 0;
    for_each_in_year(corpus, institution, year, [&](const PublicationRecord&) { ++n; });
    return n;
}

std::optional<Rational> growth_pct(std::int64_t n_start, std::int64_t n_end) {
    if (n_start < 0 || n_end < 0) throw UsageError("growth_pct: counts must be non-negative");
    if (n_start == 0) return std::nullopt;
    return Rational(100 * (n_end - n_start), n_start);
}

Ratio first_author_counts(const Corpus& corpus, std::string_view institution, int year) {
    Ratio r;
    for_each_in_year(corpus, institution, year, [&](const PublicationRecord& rec) {
        ++r.denominator;
        if (rec.authors.front().lists(institution)) ++r.numerator;
    });
    return r;
}

std::optional<Rational> first_author_pct(const Corpus& corpus, std::string_view institution,
                                         int year) {
    return first_author_counts(corpus, institution, year).percent();
}

Ratio intl_collab_counts(const Corpus& corpus, std::string_view institution, int year) {
    Ratio r;
    for_each_in_year(corpus, institution, year, [&](const PublicationRecord& rec) {
        ++r.denominator;
        if (multi_country(rec)) ++r.numerator;
    });
    return r;
}

std::optional<Rational> intl_collab_pct(const Corpus& corpus, std::string_view institution,
                                        int year) {
    return intl_collab_counts(corpus, institution, year).percent();
}

bool counts_as_multi_affiliated(const PublicationRecord& record, std::string_view institution) {
    for (const auto& a : record.authors)
        if (a.affiliations.size() >= 2 && a.lists(institution)) return true;
    return false;
}

bool excluded_from_multi_affiliation(const PublicationRecord& record, std::string_view institution,
                                     MultiAffiliationReading reading) {
    if (reading == MultiAffiliationReading::all_records) return false;
    int listing = 0;
    for (const auto& a : record.authors) {
        if (a.affiliations.size() >= 2) return false;
        if (a.lists(institution)) ++listing;
    }
    return listing >= 2;
}

Ratio multi_affiliation_counts(const Corpus& corpus, std::string_view institution, int year,
                               MultiAffiliationReading reading) {
    Ratio r;
    for_each_in_year(corpus, institution, year, [&](const PublicationRecord& rec) {
        if (excluded_from_multi_affiliation(rec, institution, reading)) return;
        ++r.denominator;
        if (counts_as_multi_affiliated(rec, institution)) ++r.numerator;
    });
    return r;
}

std::optional<Rational> multi_affiliation_pct(const Corpus& corpus, std::string_view institution,
                                              int year, MultiAffiliationReading reading) {
    return multi_affiliation_counts(corpus, institution, year, reading).percent();
}

std::optional<Rational> authors_per_article(const Corpus& corpus, const Scope& scope, int year) {
    std::int64_t records = 0;
    std::int64_t authors = 0;
    auto add = [&](const PublicationRecord& r) {
        ++records;
        authors += static_cast<std::int64_t>(r.authors.size());
    };
    if (const auto* inst = std::get_if<std::string>(&scope)) {
        for_each_in_year(corpus, *inst, year, add);
    } else if (const auto* group = std::get_if<Group>(&scope)) {
        for (std::size_t i : group_records(corpus, *group, year)) add(corpus.record(i));
    } else {
        for (const auto& r : corpus.records())
            if (r.year == year) add(r);
    }
    if (records == 0) return std::nullopt;
    return Rational(authors, records);
}

Ratio overlap_counts(const Corpus& corpus, const Group& group, int year) {
    std::set<std::string> members(group.begin(), group.end());
    if (members.size() < 2) throw UsageError("overlap needs a group of at least two members");
    Ratio r;
    for (std::size_t i : group_records(corpus, group, year)) {
        ++r.denominator;
        int hits = 0;
        for (const auto& inst : corpus.record(i).institutions())
            if (members.count(inst)) ++hits;
        if (hits >= 2) ++r.numerator;
    }
    return r;
}

std::optional<Rational> overlap_pct(const Corpus& corpus, const Group& group, int year) {
    return overlap_counts(corpus, group, year).percent();
}

std::int64_t group_output(const Corpus& corpus, const Group& group, int year) {
    return static_cast<std::int64_t>(group_records(corpus, group, year).size());
}

std::int64_t subject_output_count(const Corpus& corpus, std::string_view institution,
                                  std::string_view category, int year) {
    std::int64_t n = 0;
    for_each_in_year(corpus, institution, year, [&](const PublicationRecord& r) {
        if (r.has_category(category)) ++n;
    });
    return n;
}

// ---------------------------------------------------------------------------

std::optional<int> Ranking::rank_of(std::string_view id) const {
    if (const auto* e = find(id)) return e->rank;
    return std::nullopt;
}

const RankEntry* Ranking::find(std::string_view id) const {
    for (const auto& e : entries)
        if (e.institution_id == id) return &e;
    return nullptr;
}

Ranking competition_rank(std::vector<std::pair<std::string, std::optional<Rational>>> values,
                         Direction direction) {
    Ranking out;
    for (auto& [id, v] : values) {
        if (v)
            out.entries.push_back({id, *v, 0});
        else
            out.no_data.push_back(id);
    }
    std::sort(out.no_data.begin(), out.no_data.end());
    auto better = [direction](const Rational& a, const Rational& b) {
        return direction == Direction::descending ? a > b : a < b;
    };
    std::sort(out.entries.begin(), out.entries.end(), [&](const RankEntry& a, const RankEntry& b) {
        if (a.value != b.value) return better(a.value, b.value);
        return a.institution_id < b.institution_id;
    });
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        if (i > 0 && out.entries[i].value == out.entries[i - 1].value)
            out.entries[i].rank = out.entries[i - 1].rank;
        else
            out.entries[i].rank = static_cast<int>(i) + 1;
    }
    return out;
}

Ranking subject_output_rank(const Corpus& corpus, std::string_view category, int year) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& r : corpus.records()) {
        if (r.year != year || !r.has_category(category)) continue;
        for (const auto& inst : r.institutions()) ++counts[inst];
    }
    std::vector<std::pair<std::string, std::optional<Rational>>> values;
    for (const auto& [id, n] : counts) values.emplace_back(id, Rational(n));
    auto ranking = competition_rank(std::move(values), Direction::descending);
    if (ranking.entries.empty())
        ranking.warnings.push_back("no records carry category '" + std::string(category) +
                                   "' in " + std::to_string(year));
    return ranking;
}

namespace {

constexpr std::pair<Metric, std::string_view> kMetricNames[] = {
    {Metric::output_count, "output_count"},
    {Metric::growth_pct, "growth_pct"},
    {Metric::first_author_pct, "first_author_pct"},
    {Metric::authors_per_article, "authors_per_article"},
    {Metric::intl_collab_pct, "intl_collab_pct"},
    {Metric::multi_affiliation_pct, "multi_affiliation_pct"},
    {Metric::subject_output_count, "subject_output_count"},
};

}  // namespace

std::string_view metric_name(Metric metric) {
    for (const auto& [m, name] : kMetricNames)
        if (m == metric) return name;
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    std::string known;
    for (const auto& [m, n] : kMetricNames) {
        if (n == name) return m;
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw UsageError("unknown metric '" + std::string(name) + "' (expected one of: " + known + ")");
}

std::optional<Rational> metric_value(const Corpus& corpus, std::string_view institution,
                                     const MetricQuery& q) {
    switch (q.metric) {
        case Metric::output_count:
            return Rational(output_count(corpus, institution, q.year));
        case Metric::growth_pct:
            return growth_pct(output_count(corpus, institution, q.base_year),
                              output_count(corpus, institution, q.year));
        case Metric::first_author_pct:
            return first_author_pct(corpus, institution, q.year);
        case Metric::authors_per_article:
            return authors_per_article(corpus, std::string(institution), q.year);
        case Metric::intl_collab_pct:
            return intl_collab_pct(corpus, institution, q.year);
        case Metric::multi_affiliation_pct:
            return multi_affiliation_pct(corpus, institution, q.year);
        case Metric::subject_output_count:
            return Rational(subject_output_count(corpus, institution, q.category, q.year));
    }
    return std::nullopt;
}

Ranking rank_institutions(const Corpus& corpus, const MetricQuery& query, Direction direction,
                          const std::vector<std::string>* universe) {
    std::vector<std::string> ids;
    if (universe) {
        ids = *universe;
    } else {
        for (const auto& e : corpus.registry().entries()) ids.push_back(e.id);
    }
    std::vector<std::pair<std::string, std::optional<Rational>>> values;
    values.reserve(ids.size());
    for (auto& id : ids) {
        auto v = metric_value(corpus, id, query);
        values.emplace_back(std::move(id), v);
    }
    return competition_rank(std::move(values), direction);
}

// ---------------------------------------------------------------------------

std::optional<Rational> median(std::vector<std::int64_t> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return Rational(values[n / 2]);
    return Rational(values[n / 2 - 1] + values[n / 2], 2);
}

const GroupYear* GroupSummary::year(int y) const {
    for (const auto& g : years)
        if (g.year == y) return &g;
    return nullptr;
}

GroupSummary group_summary(const Corpus& corpus, const std::string& group_id, const Group& members,
                           const YearRange& years) {
    if (members.empty()) throw UsageError("group '" + group_id + "' has no members");
    if (years.empty()) throw UsageError("group summary needs a non-empty year range");
    GroupSummary s;
    s.group_id = group_id;
    s.members = members;
    std::sort(s.members.begin(), s.members.end());
    s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
    for (const auto& m : s.members) corpus.require_institution(m);

    for (int y = years.first; y <= years.last; ++y) {
        GroupYear g;
        g.year = y;
        for (const auto& m : s.members) {
            g.summed_output += output_count(corpus, m, y);
            g.first_author += first_author_counts(corpus, m, y);
            g.intl_collab += intl_collab_counts(corpus, m, y);
            g.multi_affiliation += multi_affiliation_counts(corpus, m, y);
        }
        g.distinct_output = group_output(corpus, s.members, y);
        g.authors_per_article = authors_per_article(corpus, s.members, y);
        if (s.members.size() >= 2) g.overlap = overlap_counts(corpus, s.members, y);

        // World output rank: every registry institution with records this year.
        std::vector<std::pair<std::string, std::optional<Rational>>> values;
        for (const auto& e : corpus.registry().entries()) {
            auto n = output_count(corpus, e.id, y);
            values.emplace_back(e.id, n > 0 ? std::optional<Rational>(Rational(n)) : std::nullopt);
        }
        auto ranking = competition_rank(std::move(values), Direction::descending);
        std::vector<std::int64_t> ranks;
        for (const auto& m : s.members) {
            if (auto r = ranking.rank_of(m))
                ranks.push_back(*r);
            else
                g.unranked.push_back(m);
        }
        g.median_output_rank = median(ranks);
        if (!g.unranked.empty()) {
            std::string note = std::to_string(y) + ": no output for";
            for (const auto& m : g.unranked) note += " " + m;
            note += " (left out of the median rank)";
            s.notes.push_back(std::move(note));
        }
        s.years.push_back(std::move(g));
    }
    const auto& first = s.years.front();
    const auto& last = s.years.back();
    s.growth_pct = indicators::growth_pct(first.distinct_output, last.distinct_output);
    s.summed_growth_pct = indicators::growth_pct(first.summed_output, last.summed_output);
    return s;
}

std::string report_percent(const std::optional<Rational>& value) {
    if (!value) return "n/a";
    return std::to_string(value->round_half_up());
}

std::string report_decimal(const std::optional<Rational>& value) {
    if (!value) return "n/a";
    return value->format_fixed(1);
}

std::string report_raw(const std::optional<Rational>& value) {
    if (!value) return "n/a";
    return value->to_string();
}

}  // namespace bibscreen::indicators
