#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "bibscreen/error.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::synth {

namespace {

constexpr std::pair<PlantKind, std::string_view> kKinds[] = {
    {PlantKind::output_surge, "output_surge"},
    {PlantKind::hyperprolific_author, "hyperprolific_author"},
    {PlantKind::external_author, "external_author"},
    {PlantKind::multi_affiliation_inflation, "multi_affiliation_inflation"},
    {PlantKind::cross_group_author, "cross_group_author"},
    {PlantKind::overlap_boost, "overlap_boost"},
};

const std::map<PlantKind, std::map<std::string, double>>& defaults() {
    static const std::map<PlantKind, std::map<std::string, double>> d{
        {PlantKind::output_surge,
         {{"multiplier", 5}, {"first_author_share", 0.1}, {"intl_share", 0.9}, {"expect_funnel", 1}}},
        {PlantKind::hyperprolific_author, {{"authors", 1}, {"yearly_count", 40}}},
        {PlantKind::external_author,
         {{"authors", 1}, {"records_per_author", 10}, {"secondary_fraction", 0.8}}},
        {PlantKind::multi_affiliation_inflation, {{"share", 0.5}}},
        {PlantKind::cross_group_author, {{"authors", 1}, {"records_per_author", 12}}},
        {PlantKind::overlap_boost, {{"records_per_year", 10}}},
    };
    return d;
}

// Countries used for rest-of-world filler co-authors.
constexpr const char* kForeign[] = {"PK", "CN", "IN", "DE", "US", "GB", "MY", "IT", "FR", "EG"};

std::string foreign_country(const std::string& home, std::size_t k) {
    for (std::size_t i = 0; i < std::size(kForeign); ++i) {
        const char* c = kForeign[(k + i) % std::size(kForeign)];
        if (home != c) return c;
    }
    return "PK";
}

bool integral(double v) { return std::floor(v) == v; }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : e_(seed) {}

    double uniform() { return static_cast<double>(e_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : e_() % n; }
    bool chance(double p) { return uniform() < p; }
    int poisson(double lambda) {
        if (lambda <= 0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double p = uniform();
        while (p > limit && k < 200) {
            ++k;
            p *= uniform();
        }
        return k;
    }

private:
    std::mt19937_64 e_;
};

struct Pool {
    std::vector<std::string> ids;
    std::map<int, std::vector<std::int64_t>> used;  // year -> uses per author
};

class Builder {
public:
    explicit Builder(const GeneratorSpec& spec) : spec_(spec), rng_(spec.seed) {
        for (std::size_t i = 0; i < spec.institutions.size(); ++i) {
            index_[spec.institutions[i].id] = i;
            Pool p;
            for (std::int64_t j = 0; j < spec.institutions[i].authors_pool_size; ++j)
                p.ids.push_back(author_name(i, j));
            pools_.push_back(std::move(p));
        }
    }

    Generated run() {
        baseline();
        for (const auto& plant : spec_.anomalies) apply(plant);
        Generated g;
        std::vector<Institution> entries;
        for (const auto& s : spec_.institutions)
            entries.push_back({s.id, s.name.empty() ? s.id : s.name, s.country, {}});
        g.registry = InstitutionRegistry::from_entries(std::move(entries));
        g.truth.seed = spec_.seed;
        g.truth.records = records_.size();
        g.truth.plants = std::move(truth_);
        g.records = std::move(records_);
        return g;
    }

private:
    std::string author_name(std::size_t inst, std::int64_t j) const {
        return spec_.institutions[inst].id + "-au" + std::to_string(j + 1);
    }

    AffiliationRef affiliation(std::size_t inst) const {
        return {spec_.institutions[inst].id, "", spec_.institutions[inst].country};
    }

    static AffiliationRef filler(const std::string& label, const std::string& country) {
        return {"", label, country};
    }

    static bool on_record(const PublicationRecord& r, const std::string& author) {
        for (const auto& a : r.authors)
            if (a.author_id == author) return true;
        return false;
    }

    /// Next pool author under the yearly cap and not yet on the record.
    std::string pick(std::size_t inst, int year, const PublicationRecord& r) {
        auto& pool = pools_[inst];
        auto& used = pool.used[year];
        used.resize(pool.ids.size(), 0);
        const std::size_t n = pool.ids.size();
        const std::size_t start = n ? rng_.below(n) : 0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t j = (start + k) % n;
            if (used[j] < spec_.author_cap_per_year && !on_record(r, pool.ids[j])) {
                ++used[j];
                return pool.ids[j];
            }
        }
        pool.ids.push_back(author_name(inst, static_cast<std::int64_t>(n)));
        used.push_back(1);
        return pool.ids.back();
    }

    int author_count(std::size_t inst) {
        double mean = spec_.institutions[inst].mean_authors_per_record;
        return std::min(40, 1 + rng_.poisson(mean - 1.0));
    }

    std::vector<std::string> categories() {
        std::vector<std::string> out;
        const auto& cats = spec_.subject_categories;
        if (cats.empty()) return out;
        out.push_back(cats[rng_.below(cats.size())]);
        if (rng_.chance(0.2)) out.push_back(cats[rng_.below(cats.size())]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void baseline() {
        const auto& insts = spec_.institutions;
        for (int y = spec_.years.first; y <= spec_.years.last; ++y) {
            for (std::size_t i = 0; i < insts.size(); ++i) {
                const auto& s = insts[i];
                double scale = std::pow(1.0 + s.annual_growth_pct / 100.0, y - spec_.years.first);
                auto n = static_cast<std::int64_t>(
                    std::llround(static_cast<double>(s.base_output_per_year) * scale));
                std::vector<std::size_t> domestic, foreign;
                for (std::size_t j = 0; j < insts.size(); ++j) {
                    if (j == i) continue;
                    (insts[j].country == s.country ? domestic : foreign).push_back(j);
                }
                for (std::int64_t k = 0; k < n; ++k) baseline_record(i, y, k, domestic, foreign);
            }
        }
    }

    void baseline_record(std::size_t i, int y, std::int64_t seq,
                         const std::vector<std::size_t>& domestic,
                         const std::vector<std::size_t>& foreign) {
        const auto& s = spec_.institutions[i];
        PublicationRecord r;
        r.record_id = s.id + "-" + std::to_string(y) + "-" + std::to_string(seq + 1);
        r.year = y;
        double u = rng_.uniform();
        if (u < spec_.conference_fraction)
            r.doc_type = DocType::parse("conference paper");
        else if (u < spec_.conference_fraction + spec_.review_fraction)
            r.doc_type = DocType::parse("review");
        else
            r.doc_type = DocType::parse("article");
        r.subject_categories = categories();

        int k = author_count(i);
        bool dom = !domestic.empty() && rng_.chance(s.domestic_collab_prob);
        bool intl = rng_.chance(s.intl_collab_prob);
        k = std::max(k, 1 + int(dom) + int(intl));
        int own = k - int(dom) - int(intl);
        for (int a = 0; a < own; ++a) r.authors.push_back({pick(i, y, r), {affiliation(i)}});
        if (dom) {
            std::size_t p = domestic[rng_.below(domestic.size())];
            r.authors.push_back({pick(p, y, r), {affiliation(p)}});
        }
        if (intl) {
            if (!foreign.empty()) {
                std::size_t p = foreign[rng_.below(foreign.size())];
                r.authors.push_back({pick(p, y, r), {affiliation(p)}});
            } else {
                auto c = foreign_country(s.country, rng_.below(std::size(kForeign)));
                r.authors.push_back({r.record_id + "-x1", {filler("International Partner " + c, c)}});
            }
        }
        r.corresponding_author_ids = {r.authors.front().author_id};
        if (r.doc_type.kind != DocKind::other) articles_[{s.id, y}].push_back(records_.size());
        own_articles_[{s.id, y}] += r.doc_type.kind != DocKind::other;
        records_.push_back(std::move(r));
        if (dom || intl) {
            // Partners list the record too.
            for (std::size_t a = static_cast<std::size_t>(own); a < records_.back().authors.size(); ++a) {
                const auto& f = records_.back().authors[a].affiliations.front();
                if (f.resolved() && records_.back().doc_type.kind != DocKind::other)
                    articles_[{f.institution_id, y}].push_back(records_.size() - 1);
            }
        }
    }

    /// Article or review records listing `inst` in `year`, in creation order.
    std::vector<std::size_t> articles_of(const std::string& inst, int year) {
        auto& v = articles_[{inst, year}];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    void note(PlantTruth& t, std::size_t record) {
        t.record_ids.push_back(records_[record].record_id);
    }

    std::size_t new_record(const std::string& id, int year, PublicationRecord r) {
        r.record_id = id;
        r.year = year;
        r.doc_type = DocType::parse("article");
        if (r.subject_categories.empty()) r.subject_categories = categories();
        r.corresponding_author_ids = {r.authors.front().author_id};
        std::sort(r.corresponding_author_ids.begin(), r.corresponding_author_ids.end());
        records_.push_back(std::move(r));
        std::size_t pos = records_.size() - 1;
        for (const auto& inst : records_[pos].institutions()) articles_[{inst, year}].push_back(pos);
        return pos;
    }

    /// Chooses `count` distinct records from `pool` that do not carry `author`,
    /// spread evenly after a seeded rotation.
    std::vector<std::size_t> choose(const std::vector<std::size_t>& pool, std::int64_t count,
                                    const std::string& author) {
        std::vector<std::size_t> free;
        for (std::size_t p : pool)
            if (!on_record(records_[p], author)) free.push_back(p);
        std::vector<std::size_t> out;
        if (free.empty() || count <= 0) return out;
        const std::size_t n = free.size();
        const std::size_t rot = rng_.below(n);
        const auto want = static_cast<std::size_t>(std::min<std::int64_t>(count, n));
        for (std::size_t k = 0; k < want; ++k) out.push_back(free[(rot + k * n / want) % n]);
        std::sort(out.begin(), out.end());
        return out;
    }

    void apply(const AnomalyPlant& plant) {
        PlantTruth t;
        t.plant_id = plant.id;
        t.kind = plant.kind;
        t.targets = plant.targets;
        switch (plant.kind) {
            case PlantKind::output_surge: surge(plant, t); break;
            case PlantKind::hyperprolific_author: hyperprolific(plant, t); break;
            case PlantKind::external_author: external(plant, t); break;
            case PlantKind::multi_affiliation_inflation: inflation(plant, t); break;
            case PlantKind::cross_group_author: cross_group(plant, t); break;
            case PlantKind::overlap_boost: overlap(plant, t); break;
        }
        truth_.push_back(std::move(t));
    }

    void surge(const AnomalyPlant& p, PlantTruth& t) {
        const std::size_t i = index_.at(p.targets.front());
        const auto& s = spec_.institutions[i];
        const double mult = p.param("multiplier");
        const double fa = p.param("first_author_share");
        const double intl_share = p.param("intl_share");
        t.values["multiplier"] = mult;
        t.values["expect_funnel"] = p.param("expect_funnel");
        std::int64_t fa_total = 0, intl_total = 0;
        for (int y : p.active_years) {
            auto base = own_articles_[{s.id, y}];
            auto extra = static_cast<std::int64_t>(std::llround((mult - 1.0) * double(base)));
            auto fa_n = static_cast<std::int64_t>(std::llround(fa * double(extra)));
            for (std::int64_t j = 0; j < extra; ++j) {
                // Spread the intl records evenly over the block.
                bool intl = std::floor(double(j + 1) * intl_share) - std::floor(double(j) * intl_share) >= 1;
                bool own_first = j < fa_n;
                std::string id = p.id + "-" + std::to_string(y) + "-" + std::to_string(j + 1);
                PublicationRecord r;
                std::string c = intl ? foreign_country(s.country, static_cast<std::size_t>(j))
                                     : s.country;
                int k = std::max(2, author_count(i));
                if (!own_first) r.authors.push_back({id + "-f0", {filler("Partner Institute " + c, c)}});
                r.authors.push_back({pick(i, y, r), {affiliation(i)}});
                if (intl && own_first)
                    r.authors.push_back({id + "-f1", {filler("Partner Institute " + c, c)}});
                for (int a = static_cast<int>(r.authors.size()); a < k; ++a)
                    r.authors.push_back({id + "-f" + std::to_string(a + 1),
                                         {filler("Partner Institute " + c, c)}});
                note(t, new_record(id, y, std::move(r)));
                fa_total += own_first;
                intl_total += intl;
            }
            t.yearly_counts[y] = extra;
        }
        t.values["first_author_records"] = double(fa_total);
        t.values["intl_records"] = double(intl_total);
    }

    void hyperprolific(const AnomalyPlant& p, PlantTruth& t) {
        const std::size_t i = index_.at(p.targets.front());
        const auto& inst = spec_.institutions[i].id;
        const auto authors = static_cast<int>(p.param("authors"));
        const auto per_year = static_cast<std::int64_t>(p.param("yearly_count"));
        t.values["yearly_count"] = double(per_year);
        std::int64_t created = 0;
        for (int a = 0; a < authors; ++a) {
            std::string author = p.id + "-au" + std::to_string(a + 1);
            t.author_ids.push_back(author);
            for (int y : p.active_years) {
                auto chosen = choose(articles_of(inst, y), per_year, author);
                for (std::size_t pos : chosen) {
                    records_[pos].authors.push_back({author, {affiliation(i)}});
                    note(t, pos);
                }
                for (auto k = static_cast<std::int64_t>(chosen.size()); k < per_year; ++k) {
                    PublicationRecord r;
                    r.authors.push_back({pick(i, y, r), {affiliation(i)}});
                    r.authors.push_back({author, {affiliation(i)}});
                    note(t, new_record(p.id + "-" + std::to_string(y) + "-" + std::to_string(++created),
                                       y, std::move(r)));
                }
                t.author_yearly[author][y] = per_year;
                t.yearly_counts[y] += per_year;
            }
        }
        t.values["created_records"] = double(created);
    }

    void external(const AnomalyPlant& p, PlantTruth& t) {
        const std::size_t i = index_.at(p.targets.front());
        const auto& s = spec_.institutions[i];
        const auto authors = static_cast<int>(p.param("authors"));
        const auto per_author = static_cast<std::int64_t>(p.param("records_per_author"));
        const auto secondary = std::min<std::int64_t>(
            per_author,
            static_cast<std::int64_t>(std::ceil(p.param("secondary_fraction") * double(per_author))));
        t.values["records_per_author"] = double(per_author);
        t.values["secondary_records"] = double(secondary);
        t.values["expect_flag"] = (2 * secondary > per_author && per_author >= 2) ? 1 : 0;
        std::int64_t created = 0;
        for (int a = 0; a < authors; ++a) {
            std::string author = p.id + "-au" + std::to_string(a + 1);
            t.author_ids.push_back(author);
            std::string c = foreign_country(s.country, static_cast<std::size_t>(a));
            AffiliationRef home = filler(p.id + " Home Institute " + std::to_string(a + 1), c);
            for (std::int64_t k = 0; k < per_author; ++k) {
                int y = p.active_years[static_cast<std::size_t>(k) % p.active_years.size()];
                AuthorEntry entry{author, {}};
                if (k < secondary)
                    entry.affiliations = {home, affiliation(i)};
                else
                    entry.affiliations = {affiliation(i), home};
                auto chosen = choose(articles_of(s.id, y), 1, author);
                if (!chosen.empty()) {
                    records_[chosen.front()].authors.push_back(std::move(entry));
                    note(t, chosen.front());
                } else {
                    PublicationRecord r;
                    r.authors.push_back({pick(i, y, r), {affiliation(i)}});
                    r.authors.push_back(std::move(entry));
                    note(t, new_record(p.id + "-" + std::to_string(y) + "-" + std::to_string(++created),
                                       y, std::move(r)));
                }
                ++t.author_yearly[author][y];
                ++t.yearly_counts[y];
            }
        }
        t.values["created_records"] = double(created);
    }

    void inflation(const AnomalyPlant& p, PlantTruth& t) {
        const std::size_t i = index_.at(p.targets.front());
        const auto& s = spec_.institutions[i];
        const double share = p.param("share");
        AffiliationRef center = filler((s.name.empty() ? s.id : s.name) + " Affiliated Center", s.country);
        for (int y : p.active_years) {
            auto pool = articles_of(s.id, y);
            std::int64_t target = std::llround(share * double(pool.size()));
            std::int64_t done = 0;
            for (std::size_t k = 0; k < pool.size() && done < target; ++k) {
                // Even spread: take record k when the running quota advances.
                if (std::llround(double(k + 1) * share) == std::llround(double(k) * share)) continue;
                auto& r = records_[pool[k]];
                for (auto& a : r.authors) {
                    if (a.affiliations.size() == 1 && a.affiliations.front().institution_id == s.id) {
                        a.affiliations.push_back(center);
                        note(t, pool[k]);
                        ++done;
                        break;
                    }
                }
            }
            t.yearly_counts[y] = done;
        }
    }

    void cross_group(const AnomalyPlant& p, PlantTruth& t) {
        const auto authors = static_cast<int>(p.param("authors"));
        const auto per_author = static_cast<std::int64_t>(p.param("records_per_author"));
        const std::size_t g = p.targets.size();
        t.values["records_per_author"] = double(per_author);
        std::int64_t created = 0;
        for (int a = 0; a < authors; ++a) {
            std::string author = p.id + "-au" + std::to_string(a + 1);
            t.author_ids.push_back(author);
            for (std::int64_t k = 0; k < per_author; ++k) {
                const std::size_t i = index_.at(p.targets[(static_cast<std::size_t>(a) + k) % g]);
                int y = p.active_years[static_cast<std::size_t>(k) % p.active_years.size()];
                auto chosen = choose(articles_of(spec_.institutions[i].id, y), 1, author);
                if (!chosen.empty()) {
                    records_[chosen.front()].authors.push_back({author, {affiliation(i)}});
                    note(t, chosen.front());
                } else {
                    PublicationRecord r;
                    r.authors.push_back({pick(i, y, r), {affiliation(i)}});
                    r.authors.push_back({author, {affiliation(i)}});
                    note(t, new_record(p.id + "-" + std::to_string(y) + "-" + std::to_string(++created),
                                       y, std::move(r)));
                }
                ++t.author_yearly[author][y];
                ++t.yearly_counts[y];
            }
        }
        t.values["created_records"] = double(created);
    }

    void overlap(const AnomalyPlant& p, PlantTruth& t) {
        const auto per_year = static_cast<std::int64_t>(p.param("records_per_year"));
        const std::size_t g = p.targets.size();
        for (int y : p.active_years) {
            for (std::int64_t j = 0; j < per_year; ++j) {
                const std::size_t a = index_.at(p.targets[static_cast<std::size_t>(j) % g]);
                const std::size_t b = index_.at(p.targets[static_cast<std::size_t>(j + 1) % g]);
                PublicationRecord r;
                r.authors.push_back({pick(a, y, r), {affiliation(a)}});
                r.authors.push_back({pick(b, y, r), {affiliation(b)}});
                int k = author_count(a);
                for (int x = 2; x < k; ++x) r.authors.push_back({pick(a, y, r), {affiliation(a)}});
                note(t, new_record(p.id + "-" + std::to_string(y) + "-" + std::to_string(j + 1), y,
                                   std::move(r)));
            }
            t.yearly_counts[y] = per_year;
        }
    }

    const GeneratorSpec& spec_;
    Rng rng_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Pool> pools_;
    std::vector<PublicationRecord> records_;
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> articles_;
    std::map<std::pair<std::string, int>, std::int64_t> own_articles_;
    std::vector<PlantTruth> truth_;
};

}  // namespace

std::string_view plant_kind_name(PlantKind kind) {
    for (const auto& [k, n] : kKinds)
        if (k == kind) return n;
    return "unknown";
}

PlantKind parse_plant_kind(std::string_view name) {
    std::string known;
    for (const auto& [k, n] : kKinds) {
        if (n == name) return k;
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw UsageError("unknown plant kind '" + std::string(name) + "' (expected one of: " + known + ")");
}

double AnomalyPlant::param(const std::string& key) const {
    if (auto it = params.find(key); it != params.end()) return it->second;
    const auto& d = defaults().at(kind);
    if (auto it = d.find(key); it != d.end()) return it->second;
    throw UsageError("plant '" + id + "' has no parameter '" + key + "'");
}

void GeneratorSpec::validate() const {
    std::vector<std::string> v;
    if (years.empty()) v.push_back("years: first must not exceed last");
    if (conference_fraction < 0 || review_fraction < 0 || conference_fraction + review_fraction > 1)
        v.push_back("conference_fraction and review_fraction must be in [0,1] and sum to at most 1");
    if (author_cap_per_year < 1) v.push_back("author_cap_per_year must be at least 1");
    std::set<std::string> ids;
    for (const auto& s : institutions) {
        const std::string where = "institution '" + s.id + "': ";
        if (s.id.empty()) v.push_back("institution with empty id");
        if (!ids.insert(s.id).second) v.push_back(where + "duplicate id");
        if (!is_country_code(s.country)) v.push_back(where + "invalid country '" + s.country + "'");
        if (s.base_output_per_year < 0) v.push_back(where + "base_output_per_year must be >= 0");
        if (s.annual_growth_pct <= -100) v.push_back(where + "annual_growth_pct must exceed -100");
        if (s.authors_pool_size < 1) v.push_back(where + "authors_pool_size must be >= 1");
        if (s.mean_authors_per_record < 1) v.push_back(where + "mean_authors_per_record must be >= 1");
        for (auto [name, p] : {std::pair{"domestic_collab_prob", s.domestic_collab_prob},
                               std::pair{"intl_collab_prob", s.intl_collab_prob}})
            if (!(p >= 0 && p <= 1)) v.push_back(where + name + " must be in [0,1]");
    }
    std::set<std::string> plant_ids;
    for (const auto& p : anomalies) {
        const std::string where = "plant '" + p.id + "': ";
        if (p.id.empty()) v.push_back("plant with empty id");
        if (!plant_ids.insert(p.id).second) v.push_back(where + "duplicate id");
        for (const auto& t : p.targets)
            if (!ids.count(t)) v.push_back(where + "unknown target '" + t + "'");
        const bool group = p.kind == PlantKind::cross_group_author || p.kind == PlantKind::overlap_boost;
        std::set<std::string> distinct(p.targets.begin(), p.targets.end());
        if (group && (distinct.size() < 2 || distinct.size() != p.targets.size()))
            v.push_back(where + "needs two or more distinct targets");
        if (!group && p.targets.size() != 1) v.push_back(where + "needs exactly one target");
        if (p.active_years.empty()) v.push_back(where + "active_years must not be empty");
        for (int y : p.active_years)
            if (!years.contains(y)) v.push_back(where + "active year " + std::to_string(y) + " outside the spec years");
        const auto& known = defaults().at(p.kind);
        for (const auto& [k, val] : p.params)
            if (!known.count(k)) v.push_back(where + "unknown parameter '" + k + "'");
        auto check = [&](const char* key, double lo, double hi, bool whole) {
            if (!known.count(key)) return;
            double val = p.param(key);
            if (!(val >= lo && val <= hi) || (whole && !integral(val)))
                v.push_back(where + key + " out of range");
        };
        check("multiplier", 1, 1e6, false);
        check("first_author_share", 0, 1, false);
        check("intl_share", 0, 1, false);
        check("expect_funnel", 0, 1, true);
        check("authors", 1, 1e5, true);
        check("yearly_count", 1, 1e5, true);
        check("records_per_author", 1, 1e5, true);
        check("secondary_fraction", 0, 1, false);
        check("share", 0, 1, false);
        check("records_per_year", 1, 1e6, true);
    }
    if (!v.empty()) throw SpecError(std::move(v));
}

Generated generate(const GeneratorSpec& spec) {
    spec.validate();
    return Builder(spec).run();
}

std::string Generated::records_jsonl() const {
    std::string out;
    for (const auto& r : records) {
        out += serialize_record(r);
        out += '\n';
    }
    return out;
}

Corpus Generated::corpus() const {
    std::vector<PublicationRecord> kept;
    for (const auto& r : records)
        if (r.doc_type.kind != DocKind::other) kept.push_back(r);
    return Corpus(std::move(kept), registry);
}

const PlantTruth* GroundTruth::find(std::string_view plant_id) const {
    for (const auto& p : plants)
        if (p.plant_id == plant_id) return &p;
    return nullptr;
}

std::vector<const PlantTruth*> GroundTruth::of_kind(PlantKind kind) const {
    std::vector<const PlantTruth*> out;
    for (const auto& p : plants)
        if (p.kind == kind) out.push_back(&p);
    return out;
}

}  // namespace bibscreen::synth
