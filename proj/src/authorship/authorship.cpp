#include "bibscreen/authorship.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "bibscreen/csv.hpp"
#include "bibscreen/error.hpp"

namespace bibscreen::authorship {

namespace {

const AuthorEntry* entry_of(const PublicationRecord& r, std::string_view author_id) {
    for (const auto& a : r.authors)
        if (a.author_id == author_id) return &a;
    return nullptr;
}

Rational ev(const FlagRecord& f, const char* key) {
    auto it = f.evidence.find(key);
    if (it == f.evidence.end())
        throw DataError("flag for '" + f.subject + "' lacks evidence '" + key + "'");
    return it->second;
}

}  // namespace

std::int64_t AuthorProfile::count_in(int year) const {
    auto it = yearly_counts.find(year);
    return it == yearly_counts.end() ? 0 : it->second;
}

Rational AuthorProfile::mean_affiliations() const {
    if (record_count == 0) return Rational(0);
    return Rational(affiliation_slots, record_count);
}

AuthorProfile build_profile(const Corpus& corpus, std::string_view author_id) {
    auto positions = corpus.records_of_author(author_id);
    if (positions.empty()) throw UnknownIdError("author", std::string(author_id));
    AuthorProfile p;
    p.author_id = std::string(author_id);
    for (std::size_t i : positions) {
        const auto& r = corpus.record(i);
        const auto* e = entry_of(r, author_id);
        if (!e) continue;
        ++p.record_count;
        ++p.yearly_counts[r.year];
        p.affiliation_slots += static_cast<std::int64_t>(e->affiliations.size());
        if (e->affiliations.size() >= 2) ++p.multi_affiliation_records;
        for (std::size_t k = 0; k < e->affiliations.size(); ++k) {
            const auto& f = e->affiliations[k];
            if (!f.resolved()) continue;
            auto& u = p.affiliation_usage[f.institution_id];
            ++u.total;
            if (k > 0) ++u.as_secondary;
        }
    }
    return p;
}

std::string_view flag_kind_name(FlagKind kind) {
    switch (kind) {
        case FlagKind::hyperprolific: return "hyperprolific";
        case FlagKind::external_author: return "external_author";
        case FlagKind::surge: return "surge";
        case FlagKind::cross_group: return "cross_group";
    }
    return "unknown";
}

bool FlagRecord::decide() const {
    switch (flag) {
        case FlagKind::hyperprolific: {
            auto count = ev(*this, "count");
            auto threshold = ev(*this, "threshold");
            return ev(*this, "inclusive") == Rational(1) ? count >= threshold : count > threshold;
        }
        case FlagKind::external_author: {
            auto records = ev(*this, "records");
            auto secondary = ev(*this, "secondary");
            return records >= ev(*this, "min_pubs") && secondary * Rational(2) > records;
        }
        case FlagKind::surge: {
            auto base = ev(*this, "baseline_mean");
            auto recent = ev(*this, "recent_mean");
            auto floor = base < Rational(1) ? Rational(1) : base;
            return recent >= ev(*this, "ratio_threshold") * floor &&
                   recent >= ev(*this, "min_recent");
        }
        case FlagKind::cross_group:
            return ev(*this, "group_records") > ev(*this, "min_pubs") &&
                   ev(*this, "distinct_institutions") >= Rational(2);
    }
    return false;
}

std::vector<FlagRecord> hyperprolific_authors(const Corpus& corpus, std::string_view institution,
                                              int year, const HyperprolificOptions& options) {
    if (options.threshold < 1) throw UsageError("hyperprolific threshold must be at least 1");
    corpus.require_institution(institution);
    std::set<std::string> candidates;
    for (std::size_t i : corpus.records_of_institution(institution)) {
        const auto& r = corpus.record(i);
        if (r.year != year) continue;
        for (const auto& a : r.authors)
            if (a.lists(institution)) candidates.insert(a.author_id);
    }
    std::vector<FlagRecord> out;
    for (const auto& id : candidates) {
        std::int64_t n = 0;
        for (std::size_t i : corpus.records_of_author(id))
            if (corpus.record(i).year == year) ++n;
        FlagRecord f;
        f.subject = id;
        f.flag = FlagKind::hyperprolific;
        f.years = {year};
        f.context = std::string(institution);
        f.evidence["count"] = Rational(n);
        f.evidence["threshold"] = Rational(options.threshold);
        f.evidence["inclusive"] = Rational(options.inclusive ? 1 : 0);
        if (f.decide()) out.push_back(std::move(f));
    }
    return out;
}

std::vector<FlagRecord> external_authors(const Corpus& corpus, std::string_view institution,
                                         std::int64_t min_pubs, std::optional<int> year) {
    if (min_pubs < 1) throw UsageError("external author min_pubs must be at least 1");
    corpus.require_institution(institution);
    std::map<std::string, AffiliationUsage> usage;
    for (std::size_t i : corpus.records_of_institution(institution)) {
        const auto& r = corpus.record(i);
        if (year && r.year != *year) continue;
        for (const auto& a : r.authors) {
            if (!a.lists(institution)) continue;
            auto& u = usage[a.author_id];
            ++u.total;
            if (a.lists_as_secondary(institution)) ++u.as_secondary;
        }
    }
    std::vector<FlagRecord> out;
    for (const auto& [id, u] : usage) {
        FlagRecord f;
        f.subject = id;
        f.flag = FlagKind::external_author;
        if (year) f.years = {*year};
        f.context = std::string(institution);
        f.evidence["records"] = Rational(u.total);
        f.evidence["secondary"] = Rational(u.as_secondary);
        f.evidence["min_pubs"] = Rational(min_pubs);
        if (f.decide()) out.push_back(std::move(f));
    }
    return out;
}

std::optional<FlagRecord> surge_detect(const AuthorProfile& profile, Window baseline, Window recent,
                                       Rational ratio_threshold, Rational min_recent) {
    if (baseline.length() < 1 || recent.length() < 1)
        throw UsageError("surge windows must not be empty");
    if (baseline.last >= recent.first)
        throw UsageError("surge baseline window must end before the recent window starts");
    if (ratio_threshold <= Rational(1)) throw UsageError("surge ratio threshold must exceed 1");
    if (min_recent < Rational(1)) throw UsageError("surge min_recent must be at least 1");

    auto mean = [&](Window w) {
        std::int64_t sum = 0;
        for (int y = w.first; y <= w.last; ++y) sum += profile.count_in(y);
        return Rational(sum, w.length());
    };
    FlagRecord f;
    f.subject = profile.author_id;
    f.flag = FlagKind::surge;
    for (int y = recent.first; y <= recent.last; ++y) f.years.push_back(y);
    auto base = mean(baseline);
    auto rec = mean(recent);
    f.evidence["baseline_mean"] = base;
    f.evidence["recent_mean"] = rec;
    f.evidence["ratio"] = rec / (base < Rational(1) ? Rational(1) : base);
    f.evidence["ratio_threshold"] = ratio_threshold;
    f.evidence["min_recent"] = min_recent;
    f.evidence["baseline_first"] = Rational(baseline.first);
    f.evidence["baseline_last"] = Rational(baseline.last);
    if (!f.decide()) return std::nullopt;
    return f;
}

std::optional<FlagRecord> surge_detect(const AuthorProfile& profile, int last_year,
                                       const SurgeOptions& options) {
    Window recent{last_year - options.recent_years + 1, last_year};
    Window baseline{recent.first - options.baseline_years, recent.first - 1};
    return surge_detect(profile, baseline, recent, options.ratio_threshold, options.min_recent);
}

std::vector<FlagRecord> cross_group_authors(const Corpus& corpus,
                                            const std::vector<std::string>& group,
                                            std::int64_t min_pubs, std::string_view group_id) {
    if (group.empty()) throw UsageError("cross-group detection needs a non-empty group");
    if (min_pubs < 0) throw UsageError("cross-group min_pubs must be non-negative");
    std::set<std::string> members(group.begin(), group.end());
    for (const auto& m : members) corpus.require_institution(m);

    struct Tally {
        std::set<std::size_t> records;
        std::set<std::string> institutions;
    };
    std::map<std::string, Tally> tallies;
    for (const auto& m : members) {
        for (std::size_t i : corpus.records_of_institution(m)) {
            for (const auto& a : corpus.record(i).authors) {
                if (!a.lists(m)) continue;
                auto& t = tallies[a.author_id];
                t.records.insert(i);
                t.institutions.insert(m);
            }
        }
    }
    std::vector<FlagRecord> out;
    for (const auto& [id, t] : tallies) {
        FlagRecord f;
        f.subject = id;
        f.flag = FlagKind::cross_group;
        f.context = std::string(group_id);
        f.evidence["group_records"] = Rational(static_cast<std::int64_t>(t.records.size()));
        f.evidence["distinct_institutions"] =
            Rational(static_cast<std::int64_t>(t.institutions.size()));
        f.evidence["min_pubs"] = Rational(min_pubs);
        if (f.decide()) out.push_back(std::move(f));
    }
    return out;
}

MultiAffiliationProfile multi_affiliation_profile(const AuthorProfile& profile) {
    if (profile.record_count == 0)
        throw UsageError("author '" + profile.author_id + "' has no records");
    return {percent_of(profile.multi_affiliation_records, profile.record_count),
            profile.mean_affiliations()};
}

std::string hyperprolific_table_csv(const Corpus& corpus,
                                    const std::vector<std::string>& institutions,
                                    const YearRange& years, const HyperprolificOptions& options) {
    std::vector<std::string> header{"institution_id"};
    for (int y = years.first; y <= years.last; ++y) header.push_back(std::to_string(y));
    std::string out = csv::join_row(header) + "\n";
    for (const auto& inst : institutions) {
        std::vector<std::string> row{inst};
        for (int y = years.first; y <= years.last; ++y)
            row.push_back(std::to_string(hyperprolific_authors(corpus, inst, y, options).size()));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

}  // namespace bibscreen::authorship
