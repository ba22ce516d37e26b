#include "support.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "bibscreen/authorship.hpp"
#include "bibscreen/metrics_table.hpp"
#include "bibscreen/network.hpp"
#include "bibscreen/oracle.hpp"
#include "bibscreen/screening.hpp"

namespace bibscreen::testing {

TinyCorpus& TinyCorpus::inst(const std::string& id, const std::string& country) {
    insts_.push_back({id, "Institution " + id, country, {}});
    return *this;
}

TinyCorpus& TinyCorpus::rec(const std::string& id, int year,
                            const std::vector<std::pair<std::string, std::vector<std::string>>>& authors,
                            const std::vector<std::string>& categories, const std::string& doc_type) {
    PublicationRecord r;
    r.record_id = id;
    r.year = year;
    r.doc_type = DocType::parse(doc_type);
    r.subject_categories = categories;
    std::sort(r.subject_categories.begin(), r.subject_categories.end());
    for (const auto& [author, tokens] : authors) {
        AuthorEntry e;
        e.author_id = author;
        for (const auto& t : tokens) {
            AffiliationRef a;
            if (!t.empty() && t[0] == '@') {
                a.country = t.substr(1);
                a.raw = "Unlisted " + a.country;
            } else {
                auto it = std::find_if(insts_.begin(), insts_.end(), [&](const auto& i) { return i.id == t; });
                if (it == insts_.end()) throw std::logic_error("TinyCorpus: unknown institution " + t);
                a.institution_id = t;
                a.country = it->country;
            }
            e.affiliations.push_back(a);
        }
        r.authors.push_back(e);
    }
    records_.push_back(r);
    return *this;
}

InstitutionRegistry TinyCorpus::registry() const { return InstitutionRegistry::from_entries(insts_); }

Corpus TinyCorpus::build() const { return Corpus(records_, registry()); }

// ---------------------------------------------------------------------------

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<std::string> pick(Rng& rng, const std::vector<std::string>& ids, int n) {
    std::vector<std::string> v = ids;
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(static_cast<std::size_t>(std::min<int>(n, static_cast<int>(v.size()))));
    return v;
}

template <class T>
bool subset(const std::set<T>& a, const std::set<T>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<std::string> subjects(const std::vector<authorship::FlagRecord>& flags) {
    std::set<std::string> s;
    for (const auto& f : flags) s.insert(f.subject);
    return s;
}

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ",") + x;
    return "{" + out + "}";
}

}  // namespace

synth::GeneratorSpec random_spec(std::uint64_t seed, int max_institutions, std::int64_t max_base) {
    Rng rng(seed);
    synth::GeneratorSpec spec;
    spec.seed = seed;
    const int n = uniform_int(rng, 3, std::max(3, max_institutions));
    const std::vector<std::string> countries{"SA", "IN", "US", "DE", "CN"};
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
        synth::InstitutionSpec s;
        s.id = "i" + std::to_string(i);
        s.country = countries[static_cast<std::size_t>(uniform_int(rng, 0, 4))];
        s.base_output_per_year = uniform_int(rng, 5, static_cast<int>(max_base));
        s.annual_growth_pct = uniform_real(rng, 0, 40);
        s.authors_pool_size = uniform_int(rng, 5, 40);
        s.mean_authors_per_record = uniform_real(rng, 1.5, 6);
        s.domestic_collab_prob = uniform_real(rng, 0, 0.3);
        s.intl_collab_prob = uniform_real(rng, 0, 0.6);
        ids.push_back(s.id);
        spec.institutions.push_back(s);
    }
    const int last = spec.years.last;
    auto plant = [&](synth::PlantKind kind, std::vector<std::string> targets, std::map<std::string, double> params,
                     std::vector<int> years) {
        synth::AnomalyPlant p;
        p.id = std::string(synth::plant_kind_name(kind)) + "-" + std::to_string(spec.anomalies.size() + 1);
        p.kind = kind;
        p.targets = std::move(targets);
        p.params = std::move(params);
        p.active_years = std::move(years);
        spec.anomalies.push_back(std::move(p));
    };
    if (uniform_int(rng, 0, 1))
        plant(synth::PlantKind::hyperprolific_author, pick(rng, ids, 1),
              {{"authors", uniform_int(rng, 1, 2)}, {"yearly_count", uniform_int(rng, 30, 45)}},
              {uniform_int(rng, spec.years.first, last)});
    if (uniform_int(rng, 0, 1))
        plant(synth::PlantKind::external_author, pick(rng, ids, 1),
              {{"authors", uniform_int(rng, 1, 3)},
               {"records_per_author", uniform_int(rng, 1, 6)},
               {"secondary_fraction", uniform_real(rng, 0, 1)}},
              {last - 1, last});
    if (uniform_int(rng, 0, 1))
        plant(synth::PlantKind::cross_group_author, pick(rng, ids, uniform_int(rng, 2, 3)),
              {{"authors", uniform_int(rng, 1, 2)}, {"records_per_author", uniform_int(rng, 4, 14)}}, {last});
    if (uniform_int(rng, 0, 2) == 0)
        plant(synth::PlantKind::output_surge, pick(rng, ids, 1), {{"multiplier", uniform_int(rng, 2, 4)}}, {last});
    if (uniform_int(rng, 0, 2) == 0)
        plant(synth::PlantKind::multi_affiliation_inflation, pick(rng, ids, 1),
              {{"share", uniform_real(rng, 0, 0.6)}}, {last});
    if (uniform_int(rng, 0, 2) == 0)
        plant(synth::PlantKind::overlap_boost, pick(rng, ids, 2), {{"records_per_year", uniform_int(rng, 1, 4)}},
              {last});
    return spec;
}

synth::GeneratorSpec bounded_spec(std::uint64_t seed, std::int64_t max_records) {
    for (std::uint64_t k = 0;; ++k) {
        auto spec = random_spec(seed * 7919 + k, 24, 60);
        std::int64_t planned = 0;
        for (const auto& s : spec.institutions) planned += s.base_output_per_year * 3;
        if (planned * 5 > 2 * max_records) continue;
        if (static_cast<std::int64_t>(synth::generate(spec).records.size()) <= max_records) return spec;
    }
}

std::string oracle_mismatch(const synth::GeneratorSpec& spec, std::size_t* records) {
    auto g = synth::generate(spec);
    const auto text = g.records_jsonl();
    auto corpus = ingest_text(text, g.registry).corpus;
    if (records) *records = corpus.size();
    const auto mine = indicator_table_csv(indicator_table(corpus));
    const auto theirs = oracle::metrics_csv(text);
    if (mine == theirs) return "";
    std::istringstream a(mine), b(theirs);
    std::string la, lb;
    for (int line = 1;; ++line) {
        bool ha = static_cast<bool>(std::getline(a, la)), hb = static_cast<bool>(std::getline(b, lb));
        if (!ha && !hb) return "outputs differ only in trailing bytes";
        if (la != lb || ha != hb)
            return "line " + std::to_string(line) + ": library '" + (ha ? la : "<eof>") + "' oracle '" +
                   (hb ? lb : "<eof>") + "'";
    }
}

Recovery planted_recovery(std::uint64_t seed) {
    synth::UniverseOptions o;
    o.min_base_output = 60;
    o.max_base_output = 120;
    auto g = synth::generate(synth::planted_universe(seed, o));
    auto corpus = g.corpus();
    Recovery r;
    std::ostringstream why;

    auto flagged = screening::run_funnel(corpus, {}).final_flagged;
    std::vector<std::string> want;
    for (const auto* p : g.truth.of_kind(synth::PlantKind::output_surge))
        if (p->values.at("expect_funnel") > 0) want.push_back(p->targets.front());
    std::sort(want.begin(), want.end());
    r.funnel_exact = flagged == want;
    if (!r.funnel_exact) why << "funnel flagged " << flagged.size() << ", planted " << want.size() << "; ";

    bool exact = true;
    const auto range = *corpus.year_range();
    std::map<std::pair<std::string, int>, std::set<std::string>> hp_want;
    for (const auto* p : g.truth.of_kind(synth::PlantKind::hyperprolific_author))
        for (const auto& [author, yearly] : p->author_yearly)
            for (const auto& [y, n] : yearly)
                if (n >= 36) hp_want[{p->targets.front(), y}].insert(author);
    std::map<std::string, std::set<std::string>> ext_want;
    for (const auto* p : g.truth.of_kind(synth::PlantKind::external_author))
        if (p->values.at("expect_flag") > 0)
            for (const auto& a : p->author_ids) ext_want[p->targets.front()].insert(a);
    for (const auto& inst : corpus.registry().entries()) {
        if (corpus.records_of_institution(inst.id).empty()) continue;
        for (int y = range.first; y <= range.last; ++y) {
            auto got = subjects(authorship::hyperprolific_authors(corpus, inst.id, y));
            auto it = hp_want.find({inst.id, y});
            if (got != (it == hp_want.end() ? std::set<std::string>{} : it->second)) {
                exact = false;
                why << "hyperprolific " << inst.id << " " << y << " got " << join(got) << "; ";
            }
        }
        auto got = subjects(authorship::external_authors(corpus, inst.id));
        auto it = ext_want.find(inst.id);
        if (got != (it == ext_want.end() ? std::set<std::string>{} : it->second)) {
            exact = false;
            why << "external " << inst.id << " got " << join(got) << "; ";
        }
    }
    for (const auto* p : g.truth.of_kind(synth::PlantKind::cross_group_author)) {
        auto got = subjects(authorship::cross_group_authors(corpus, p->targets));
        std::set<std::string> expected(p->author_ids.begin(), p->author_ids.end());
        if (got != expected) {
            exact = false;
            why << "cross-group " << p->plant_id << " got " << join(got) << "; ";
        }
    }
    r.detectors_exact = exact;
    r.detail = why.str();
    return r;
}

// ---------------------------------------------------------------------------
// Property batches

namespace {

template <class Check>
Outcome batch(const std::string& name, int cases, std::uint64_t salt, Check&& check) {
    Outcome o{name, 0, 0, ""};
    for (int i = 0; i < cases; ++i) {
        const std::uint64_t seed = salt * 1000003ULL + static_cast<std::uint64_t>(i);
        std::string failure;
        try {
            failure = check(seed);
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        ++o.cases;
        if (!failure.empty()) {
            ++o.failures;
            if (o.first_failure.empty()) o.first_failure = "seed " + std::to_string(seed) + ": " + failure;
        }
    }
    return o;
}

std::vector<std::string> active_ids(const Corpus& c) {
    std::vector<std::string> ids;
    for (const auto& [id, pos] : c.by_institution()) ids.push_back(id);
    return ids;
}

Corpus shuffled(const Corpus& c, Rng& rng) {
    auto records = c.records();
    std::shuffle(records.begin(), records.end(), rng);
    return Corpus(std::move(records), c.registry());
}

}  // namespace

std::vector<Outcome> property_batches(int cases) {
    std::vector<Outcome> out;

    out.push_back(batch("hyperprolific threshold monotonicity", cases, 1, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        auto ids = active_ids(c);
        const auto& inst = ids[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ids.size()) - 1))];
        const int year = uniform_int(rng, 2019, 2023);
        const int lo = uniform_int(rng, 1, 45), hi = lo + uniform_int(rng, 0, 10);
        auto run = [&](int t, bool inclusive) {
            return subjects(authorship::hyperprolific_authors(c, inst, year, {t, inclusive}));
        };
        if (!subset(run(hi, true), run(lo, true))) return "raising the threshold added authors";
        if (!subset(run(lo, false), run(lo, true))) return "exclusive flags not within inclusive flags";
        if (run(lo, false) != run(lo + 1, true)) return "count > t differs from count >= t+1";
        return "";
    }));

    out.push_back(batch("external-author threshold monotonicity", cases, 2, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        auto ids = active_ids(c);
        const int lo = uniform_int(rng, 1, 6), hi = lo + uniform_int(rng, 0, 5);
        for (const auto& inst : ids) {
            auto a = subjects(authorship::external_authors(c, inst, lo));
            auto b = subjects(authorship::external_authors(c, inst, hi));
            if (!subset(b, a)) return "raising min_pubs added authors at " + inst;
        }
        return "";
    }));

    out.push_back(batch("cross-group threshold monotonicity", cases, 3, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        auto group = pick(rng, active_ids(c), uniform_int(rng, 2, 4));
        if (group.size() < 2) return "";
        const int lo = uniform_int(rng, 0, 12), hi = lo + uniform_int(rng, 0, 6);
        auto a = subjects(authorship::cross_group_authors(c, group, lo));
        auto b = subjects(authorship::cross_group_authors(c, group, hi));
        if (!subset(b, a)) return "raising min_pubs added authors";
        return "";
    }));

    out.push_back(batch("graph handshake identity", cases, 4, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        auto seeds = pick(rng, active_ids(c), uniform_int(rng, 1, 3));
        network::BuildOptions o;
        o.min_articles = uniform_int(rng, 1, 40);
        o.qualification = uniform_int(rng, 0, 1) ? network::Qualification::co_published
                                                 : network::Qualification::total_output;
        auto g = network::build_graph(c, seeds, uniform_int(rng, 2019, 2023), o);
        for (const auto* graph : {&g}) {
            auto problems = graph->check();
            if (!problems.empty()) return problems.front();
        }
        auto clustered = network::cluster_graph(g, seed);
        std::int64_t nodes = 0, edges = 0;
        for (const auto& n : clustered.nodes) nodes += n.total_link_strength;
        for (const auto& e : clustered.edges) edges += e.strength;
        if (nodes != 2 * edges) return "node strengths do not sum to twice the edge strengths";
        auto st = network::graph_stats(clustered);
        if (st.node_strength_sum != 2 * st.total_link_strength) return "stats break the handshake identity";
        if (!clustered.check().empty()) return clustered.check().front();
        if (network::modularity(clustered) < network::singleton_modularity(clustered))
            return "clustering worse than singletons";
        return "";
    }));

    out.push_back(batch("funnel stage monotonicity", cases, 5, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        screening::FunnelConfig f;
        f.top_n_by_output = uniform_int(rng, 1, 10);
        f.growth_threshold_pct = Rational(uniform_int(rng, 0, 300));
        if (uniform_int(rng, 0, 1)) f.growth_multiple_of_world = Rational(uniform_int(rng, 1, 30));
        f.top_k_rank = uniform_int(rng, 1, 8);
        auto res = screening::run_funnel(c, f);
        for (std::size_t i = 1; i < res.stages.size(); ++i) {
            std::set<std::string> prev(res.stages[i - 1].survivors.begin(), res.stages[i - 1].survivors.end());
            std::set<std::string> cur(res.stages[i].survivors.begin(), res.stages[i].survivors.end());
            if (!subset(cur, prev)) return "stage " + std::to_string(i) + " gained institutions";
        }
        if (res.final_flagged != res.stages.back().survivors) return "final list differs from last stage";
        for (const auto& [id, ev] : res.evidence) {
            bool flagged = std::binary_search(res.final_flagged.begin(), res.final_flagged.end(), id);
            if (screening::recheck(ev, f) != flagged) return "evidence recheck disagrees for " + id;
        }
        return "";
    }));

    out.push_back(batch("permutation invariance", cases, 6, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto c = synth::generate(random_spec(seed)).corpus();
        auto p = shuffled(c, rng);
        if (indicator_table(c) != indicator_table(p)) return "indicator table depends on record order";
        auto ids = active_ids(c);
        auto group = pick(rng, ids, 2);
        for (const auto& inst : ids) {
            if (authorship::flags_jsonl(authorship::hyperprolific_authors(c, inst, 2023, {10, true})) !=
                authorship::flags_jsonl(authorship::hyperprolific_authors(p, inst, 2023, {10, true})))
                return "hyperprolific flags depend on record order";
            if (authorship::flags_jsonl(authorship::external_authors(c, inst, 1)) !=
                authorship::flags_jsonl(authorship::external_authors(p, inst, 1)))
                return "external flags depend on record order";
        }
        if (group.size() == 2 && authorship::flags_jsonl(authorship::cross_group_authors(c, group, 0)) !=
                                     authorship::flags_jsonl(authorship::cross_group_authors(p, group, 0)))
            return "cross-group flags depend on record order";
        auto seeds = pick(rng, ids, 2);
        if (network::build_graph(c, seeds, 2023, {5, network::Qualification::total_output}) !=
            network::build_graph(p, seeds, 2023, {5, network::Qualification::total_output}))
            return "graph depends on record order";
        screening::FunnelConfig f;
        f.growth_threshold_pct = Rational(20);
        f.top_k_rank = 3;
        if (screening::run_funnel(c, f).to_jsonl() != screening::run_funnel(p, f).to_jsonl())
            return "funnel depends on record order";
        return "";
    }));

    out.push_back(batch("seed determinism", cases, 7, [](std::uint64_t seed) -> std::string {
        Rng rng(seed);
        auto spec = random_spec(seed);
        auto a = synth::generate(spec), b = synth::generate(spec);
        if (a.records != b.records) return "generation is not deterministic";
        if (a.truth.to_jsonl() != b.truth.to_jsonl()) return "ground truth is not deterministic";
        auto c = a.corpus();
        auto seeds = pick(rng, active_ids(c), 2);
        auto g = network::build_graph(c, seeds, 2023, {1, network::Qualification::total_output});
        const auto cs = rng();
        if (network::cluster_graph(g, cs) != network::cluster_graph(g, cs)) return "clustering is not deterministic";
        return "";
    }));

    return out;
}

}  // namespace bibscreen::testing
