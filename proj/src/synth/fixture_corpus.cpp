#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "bibscreen/rational.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::synth {

namespace {

const std::vector<std::string> kSaudi{"imsiu", "kku", "ksu", "psau", "pnu", "taif_u", "uqu", "tabuk"};

struct Sharing {
    int year;
    std::int64_t pairs;
    std::int64_t triples;
};

// Pairs and triples among the Saudi members that take the summed member
// counts down to the published distinct totals (11,202 and 41,026) with 6%
// and 18% of group records listing two or more members.
constexpr Sharing kSharing[] = {{2019, 570, 102}, {2023, 5717, 1668}};

/// Smallest count k near pct * n / 100 whose rounded percentage is pct.
std::int64_t count_for_rate(int pct, std::int64_t n) {
    const std::int64_t k0 = (pct * n + 50) / 100;
    for (std::int64_t k : {k0, k0 - 1, k0 + 1, k0 - 2, k0 + 2})
        if (k >= 0 && k <= n && percent_of(k, n).round_half_up() == pct) return k;
    throw std::logic_error("no count realizes " + std::to_string(pct) + "% of " + std::to_string(n));
}

std::string foreign_of(const std::string& country) { return country == "US" ? "GB" : "US"; }

AffiliationRef resolved(const std::string& id, const std::string& country) { return {id, "", country}; }
AffiliationRef unresolved(const std::string& raw, const std::string& country) { return {"", raw, country}; }

PublicationRecord article(std::string id, int year) {
    PublicationRecord r;
    r.record_id = std::move(id);
    r.year = year;
    r.doc_type = DocType::parse("article");
    return r;
}

void finish(PublicationRecord& r) {
    r.corresponding_author_ids = {r.authors.front().author_id};
}

/// Largest-remainder split of `slots` in proportion to `weights`, each share
/// capped at `cap`.
std::vector<std::int64_t> apportion(std::int64_t slots, const std::vector<std::int64_t>& weights,
                                    std::int64_t cap) {
    std::vector<std::int64_t> out(weights.size(), 0);
    std::vector<bool> capped(weights.size(), false);
    std::int64_t left = slots;
    for (;;) {
        std::int64_t wsum = 0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (!capped[i]) wsum += weights[i];
        std::vector<std::pair<std::int64_t, std::size_t>> rem;
        std::int64_t given = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (capped[i]) continue;
            out[i] = left * weights[i] / wsum;
            rem.push_back({left * weights[i] % wsum, i});
            given += out[i];
        }
        std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
        for (std::size_t k = 0; given < left; ++k, ++given) ++out[rem[k].second];
        bool again = false;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!capped[i] && out[i] > cap) {
                capped[i] = true;
                out[i] = cap;
                left -= cap;
                again = true;
            }
        }
        if (!again) return out;
    }
}

struct MemberYear {
    std::string id;
    std::string country;
    std::string name;
    std::int64_t output = 0;
    std::int64_t first_author = 0;
    std::int64_t intl = 0;
    std::int64_t multi = 0;
};

/// Byline length for the j-th group record: a Bresenham walk over mean x10.
int bresenham(std::int64_t j, int mean_x10) {
    return static_cast<int>((j + 1) * mean_x10 / 10 - j * mean_x10 / 10);
}

}  // namespace

Corpus fixture_rates_corpus() {
    const auto& f = paper_fixtures();
    std::vector<PublicationRecord> records;

    auto rate = [](const auto& rows, const std::string& id, int year) {
        for (const auto& r : rows)
            if (r.id == id) return year == 2019 ? r.pct_2019 : r.pct_2023;
        throw std::logic_error("missing fixture row " + id);
    };

    for (int yi = 0; yi < 2; ++yi) {
        const int year = yi == 0 ? 2019 : 2023;
        const Sharing share = kSharing[yi];

        std::map<std::string, MemberYear> members;
        for (const auto& o : f.output) {
            MemberYear m;
            m.id = o.id;
            m.country = o.country;
            m.name = o.name;
            m.output = year == 2019 ? o.articles_2019 : o.articles_2023;
            m.first_author = count_for_rate(rate(f.first_author, o.id, year), m.output);
            m.intl = count_for_rate(rate(f.intl_collab, o.id, year), m.output);
            m.multi = count_for_rate(rate(f.multi_affiliation, o.id, year), m.output);
            members.emplace(o.id, m);
        }

        // Shared records: member sets chosen greedily by remaining quota.
        std::vector<std::int64_t> weights;
        for (const auto& id : kSaudi) weights.push_back(members.at(id).output);
        auto quota = apportion(2 * share.pairs + 3 * share.triples, weights, share.pairs + share.triples);
        std::vector<std::vector<std::string>> shared_sets;
        auto pick = [&](int k) {
            std::vector<std::size_t> idx(kSaudi.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return quota[a] > quota[b]; });
            std::vector<std::string> set;
            for (int i = 0; i < k; ++i) {
                if (quota[idx[i]] == 0) throw std::logic_error("shared quota exhausted");
                --quota[idx[i]];
                set.push_back(kSaudi[idx[i]]);
            }
            std::sort(set.begin(), set.end());
            shared_sets.push_back(std::move(set));
        };
        for (std::int64_t t = 0; t < share.triples; ++t) pick(3);
        for (std::int64_t p = 0; p < share.pairs; ++p) pick(2);

        // Per-member bookkeeping while records are laid out.
        std::map<std::string, std::int64_t> shared_of, multi_left;
        for (const auto& s : shared_sets)
            for (const auto& m : s) ++shared_of[m];
        for (const auto& [id, m] : members) multi_left[id] = m.multi;

        const auto& facts = f.facts;
        const int study_mean = facts.study_authors_per_article_x10[static_cast<std::size_t>(yi)];
        const int control_mean = facts.control_authors_per_article_x10[static_cast<std::size_t>(yi)];
        std::int64_t study_j = 0, control_j = 0;

        auto entry_for = [&](const MemberYear& m, const std::string& rid) {
            AuthorEntry e{rid + "-" + m.id, {resolved(m.id, m.country)}};
            if (multi_left[m.id] > 0) {
                --multi_left[m.id];
                e.affiliations.push_back(unresolved(m.name + " Affiliated Center", m.country));
            }
            return e;
        };
        auto pad = [](PublicationRecord& r, int k, const std::string& country) {
            for (int a = static_cast<int>(r.authors.size()); a < k; ++a)
                r.authors.push_back({r.record_id + "-f" + std::to_string(a + 1),
                                     {unresolved("Domestic Partner " + country, country)}});
        };

        std::int64_t seq = 0;
        for (const auto& s : shared_sets) {
            char id[48];
            std::snprintf(id, sizeof id, "shared-%d-%05lld", year, static_cast<long long>(++seq));
            PublicationRecord r = article(id, year);
            r.authors.push_back({r.record_id + "-f0", {unresolved("Domestic Partner SA", "SA")}});
            for (const auto& m : s) r.authors.push_back(entry_for(members.at(m), r.record_id));
            r.authors.push_back({r.record_id + "-x", {unresolved("Foreign Partner US", "US")}});
            int k = bresenham(study_j++, study_mean);
            if (static_cast<int>(r.authors.size()) > k) throw std::logic_error("byline too short");
            pad(r, k, "SA");
            finish(r);
            records.push_back(std::move(r));
        }

        for (const auto& o : f.output) {
            const MemberYear& m = members.at(o.id);
            const std::int64_t shared = shared_of[o.id];
            const std::int64_t own = m.output - shared;
            if (m.first_author > own || m.intl < shared)
                throw std::logic_error("rates for " + o.id + " conflict with shared records");
            const std::int64_t intl_own = m.intl - shared;
            for (std::int64_t j = 0; j < own; ++j) {
                char id[64];
                std::snprintf(id, sizeof id, "%s-%d-%05lld", o.id.c_str(), year, static_cast<long long>(j + 1));
                PublicationRecord r = article(id, year);
                const bool fa = j < m.first_author;
                // Intl records are spread from the end so they mix with both kinds.
                const bool intl = j >= own - intl_own;
                if (!fa) r.authors.push_back({r.record_id + "-f0", {unresolved("Domestic Partner " + m.country, m.country)}});
                r.authors.push_back(entry_for(m, r.record_id));
                if (intl) {
                    const std::string c = foreign_of(m.country);
                    r.authors.push_back({r.record_id + "-x", {unresolved("Foreign Partner " + c, c)}});
                }
                int k = o.study ? bresenham(study_j++, study_mean) : bresenham(control_j++, control_mean);
                if (static_cast<int>(r.authors.size()) > k) throw std::logic_error("byline too short");
                pad(r, k, m.country);
                finish(r);
                records.push_back(std::move(r));
            }
        }
    }
    return Corpus(std::move(records), fixture_registry());
}

Corpus fixture_hyperprolific_corpus() {
    const auto& f = paper_fixtures();
    std::vector<PublicationRecord> records;
    constexpr std::int64_t kPerAuthor = 36;
    constexpr std::int64_t kChunk = 6;
    for (const auto& row : f.hyperprolific) {
        const auto& country = f.output_of(row.id).country;
        for (int yi = 0; yi < 5; ++yi) {
            const int year = 2019 + yi;
            const std::int64_t n = row.counts[static_cast<std::size_t>(yi)];
            for (std::int64_t first = 0, chunk = 0; first < n; first += kChunk, ++chunk) {
                const std::int64_t last = std::min(n, first + kChunk);
                for (std::int64_t j = 0; j < kPerAuthor; ++j) {
                    char id[64];
                    std::snprintf(id, sizeof id, "%s-hp-%d-%lld-%02lld", row.id.c_str(), year,
                                  static_cast<long long>(chunk + 1), static_cast<long long>(j + 1));
                    PublicationRecord r = article(id, year);
                    for (std::int64_t a = first; a < last; ++a)
                        r.authors.push_back({row.id + "-hp-" + std::to_string(a + 1), {resolved(row.id, country)}});
                    finish(r);
                    records.push_back(std::move(r));
                }
            }
            // One ordinary record keeps every member present in every year.
            PublicationRecord r = article(row.id + "-plain-" + std::to_string(year), year);
            r.authors.push_back({row.id + "-plain-author", {resolved(row.id, country)}});
            finish(r);
            records.push_back(std::move(r));
        }
    }
    return Corpus(std::move(records), fixture_registry());
}

Corpus fixture_subject_corpus() {
    const auto& f = paper_fixtures();
    constexpr int kYear = 2023;
    const std::string category = "Mathematics";

    struct Slot {
        std::string id;
        std::string country;
        std::int64_t count;
    };
    std::vector<const SubjectRow*> listed;
    for (const auto& r : f.mathematics)
        if (r.rank_2023) listed.push_back(&r);
    std::sort(listed.begin(), listed.end(),
              [](const SubjectRow* a, const SubjectRow* b) { return *a->rank_2023 < *b->rank_2023; });

    // Fillers occupy the ranks between listed institutions. A filler ties the
    // listed entry above it, so competition ranks below stay where published;
    // fillers above the top entry publish one more article than it does.
    std::vector<Slot> slots;
    std::vector<Institution> entries = fixture_registry().entries();
    int filler = 0;
    int rank = 1;
    std::int64_t above = -1;
    for (const auto* row : listed) {
        for (; rank < *row->rank_2023; ++rank) {
            char id[32];
            std::snprintf(id, sizeof id, "math-w%03d", ++filler);
            std::int64_t c = above < 0 ? row->articles_2023 + 1 : above;
            slots.push_back({id, "CN", c});
            entries.push_back({id, "World Institution " + std::to_string(filler), "CN", {}});
        }
        slots.push_back({row->id, f.output_of(row->id).country, row->articles_2023});
        above = row->articles_2023;
        ++rank;
    }

    std::vector<PublicationRecord> records;
    for (const auto& s : slots) {
        for (std::int64_t j = 0; j < s.count; ++j) {
            char id[64];
            std::snprintf(id, sizeof id, "%s-math-%04lld", s.id.c_str(), static_cast<long long>(j + 1));
            PublicationRecord r = article(id, kYear);
            r.subject_categories = {category};
            r.authors.push_back({s.id + "-math-author-" + std::to_string(j % 7 + 1), {resolved(s.id, s.country)}});
            finish(r);
            records.push_back(std::move(r));
        }
    }
    return Corpus(std::move(records), InstitutionRegistry::from_entries(std::move(entries)));
}

Corpus network_growth_corpus(int start, int end, std::int64_t min_articles) {
    if (start < 0 || end < 0 || min_articles < 2)
        throw std::invalid_argument("network_growth_corpus: bad arguments");
    const auto& f = paper_fixtures();
    const auto seeds = f.study_ids();
    std::vector<Institution> entries = fixture_registry().entries();
    const int externals = std::max(start, end);
    constexpr int kNearMisses = 3;
    for (int e = 0; e < externals + kNearMisses; ++e) {
        char id[32];
        std::snprintf(id, sizeof id, e < externals ? "ext-%03d" : "near-%03d", e + 1);
        entries.push_back({id, std::string(e < externals ? "External Institution " : "Near Institution ") +
                                   std::to_string(e + 1),
                           "DE", {}});
    }
    auto country_of = [&](const std::string& id) {
        for (const auto& e : entries)
            if (e.id == id) return e.country;
        return std::string("DE");
    };

    std::vector<PublicationRecord> records;
    auto solo = [&](const std::string& inst, int year, std::int64_t j) {
        PublicationRecord r = article(inst + "-" + std::to_string(year) + "-" + std::to_string(j), year);
        r.authors.push_back({inst + "-author", {resolved(inst, country_of(inst))}});
        finish(r);
        records.push_back(std::move(r));
    };
    for (int year : {2019, 2023}) {
        const int q = year == 2019 ? start : end;
        for (const auto& s : seeds)
            for (std::int64_t j = 1; j <= min_articles; ++j) solo(s, year, j);
        // Qualifying externals reach min_articles in total; the rest stop one short.
        for (int e = 0; e < q + kNearMisses; ++e) {
            const bool near = e >= q;
            char id[32];
            std::snprintf(id, sizeof id, near ? "near-%03d" : "ext-%03d", near ? e - q + externals + 1 : e + 1);
            const std::string ext = id;
            const std::string& seed = seeds[static_cast<std::size_t>(e) % seeds.size()];
            PublicationRecord r = article(ext + "-" + std::to_string(year) + "-joint", year);
            r.authors.push_back({seed + "-author", {resolved(seed, country_of(seed))}});
            r.authors.push_back({ext + "-author", {resolved(ext, country_of(ext))}});
            finish(r);
            records.push_back(std::move(r));
            const std::int64_t total = near ? min_articles - 1 : min_articles;
            for (std::int64_t j = 2; j <= total; ++j) solo(ext, year, j);
        }
    }
    return Corpus(std::move(records), InstitutionRegistry::from_entries(std::move(entries)));
}

}  // namespace bibscreen::synth
