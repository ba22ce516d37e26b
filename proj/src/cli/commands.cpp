#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "bibscreen/cli.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/io.hpp"
#include "bibscreen/metrics_table.hpp"
#include "bibscreen/network.hpp"
#include "bibscreen/oracle.hpp"
#include "bibscreen/synth.hpp"

namespace bibscreen::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, const char* what) {
    if (path.empty()) throw UsageError(std::string("no ") + what + " given");
    if (!fs::is_regular_file(path)) throw DataError(std::string(what) + " not found: " + path);
}

struct Loaded {
    InstitutionRegistry registry;
    Corpus corpus;
};

Loaded load(const RunConfig& c) {
    require_file(c.registry, "registry");
    require_file(c.corpus, "corpus");
    Loaded l;
    l.registry = InstitutionRegistry::load_file(c.registry);
    IngestOptions o;
    o.format = InputFormat::jsonl;
    l.corpus = ingest_file(c.corpus, l.registry, o).corpus;
    return l;
}

class Writer {
public:
    explicit Writer(const RunConfig& c) : dir_(c.output_dir) {
        if (dir_.empty()) throw UsageError("no output directory given");
    }

    void put(const std::string& name, std::string_view contents) {
        io::write_atomic(dir_ / name, contents);
        written_.push_back((dir_ / name).string());
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

void list_written(const Writer& w, std::ostream& out) {
    for (const auto& p : w.written()) out << "wrote " << p << "\n";
}

std::vector<std::string> institutions_of(const Corpus& corpus) {
    std::vector<std::string> ids;
    for (const auto& [id, pos] : corpus.by_institution()) ids.push_back(id);
    return ids;
}

/// Study group from the config, or the funnel's final list.
std::vector<std::string> study_group(const Corpus& corpus, const RunConfig& c) {
    if (!c.study.empty()) return c.study;
    return screening::run_funnel(corpus, c.funnel).final_flagged;
}

network::BuildOptions build_options(const RunConfig& c) {
    network::BuildOptions o;
    o.min_articles = c.network.min_articles;
    o.qualification = c.network.qualification == "co_published" ? network::Qualification::co_published
                                                                 : network::Qualification::total_output;
    return o;
}

std::string row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
}

std::string rule(std::size_t n) {
    std::string out = "|---|";
    for (std::size_t i = 1; i < n; ++i) out += "---:|";
    return out + "\n";
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const auto& c = cells[i];
        if (c.find_first_of(",\"\n") == std::string::npos) {
            out += c;
        } else {
            out += '"';
            for (char ch : c) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out += '"';
        }
    }
    return out + "\n";
}

std::string rank_cell(const std::optional<int>& r) { return r ? std::to_string(*r) : "n/a"; }

struct Table {
    std::string title;
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void emit(ReportBundle& b, const Table& t) {
    b.markdown += "## " + t.title + "\n\n" + row(t.header) + rule(t.header.size());
    std::string csv = csv_line(t.header);
    for (const auto& r : t.rows) {
        b.markdown += row(r);
        csv += csv_line(r);
    }
    b.markdown += "\n";
    b.csv[t.file] = csv;
}

struct Sources {
    const Corpus* rates;
    const Corpus* hyperprolific;
    const Corpus* network;
};

ReportBundle compose(const Sources& src, const RunConfig& c, std::vector<std::string> study,
                     std::vector<std::string> control) {
    using namespace indicators;
    const Corpus& corpus = *src.rates;
    const int s = c.funnel.start_year, e = c.funnel.end_year;
    const std::string ss = std::to_string(s), es = std::to_string(e);
    std::vector<std::string> members = study;
    members.insert(members.end(), control.begin(), control.end());
    for (const auto& m : members) corpus.require_institution(m);

    ReportBundle b;
    b.markdown = "# Institutional publication indicators " + ss + "-" + es + "\n\n";
    if (members.empty()) {
        b.markdown += "No study or control institutions are configured and none passed the funnel.\n";
        return b;
    }
    auto group_of = [&](const std::string& id) {
        return std::find(study.begin(), study.end(), id) != study.end() ? "study" : "control";
    };
    auto name_of = [&](const std::string& id) {
        const auto* inst = corpus.registry().find(id);
        return inst ? inst->canonical_name : id;
    };
    auto rank = [&](Metric m, int year) {
        return rank_institutions(corpus, MetricQuery{m, year, 0, ""}, Direction::descending);
    };

    {
        auto r0 = rank(Metric::output_count, s), r1 = rank(Metric::output_count, e);
        Table t{"Publication output", "output_growth.csv",
                {"institution", "group", "country", ss, es, "change %", "rank " + ss, "rank " + es}, {}};
        for (const auto& id : members) {
            auto a = output_count(corpus, id, s), z = output_count(corpus, id, e);
            const auto* inst = corpus.registry().find(id);
            t.rows.push_back({name_of(id), group_of(id), inst ? inst->country : "", std::to_string(a),
                              std::to_string(z), report_percent(growth_pct(a, z)), rank_cell(r0.rank_of(id)),
                              rank_cell(r1.rank_of(id))});
        }
        emit(b, t);
    }
    {
        auto r0 = rank(Metric::first_author_pct, s), r1 = rank(Metric::first_author_pct, e);
        Table t{"First-author share", "first_author.csv",
                {"institution", "group", "% " + ss, "% " + es, "rank " + ss, "rank " + es}, {}};
        for (const auto& id : members)
            t.rows.push_back({name_of(id), group_of(id), report_percent(first_author_pct(corpus, id, s)),
                              report_percent(first_author_pct(corpus, id, e)), rank_cell(r0.rank_of(id)),
                              rank_cell(r1.rank_of(id))});
        emit(b, t);
    }
    {
        const Corpus& hp = *src.hyperprolific;
        auto range = hp.year_range().value_or(YearRange{s, e});
        Table t{"Hyperprolific authors", "hyperprolific.csv", {"institution", "group"}, {}};
        for (int y = range.first; y <= range.last; ++y) t.header.push_back(std::to_string(y));
        for (const auto& id : members) {
            std::vector<std::string> r{name_of(id), group_of(id)};
            for (int y = range.first; y <= range.last; ++y)
                r.push_back(hp.registry().contains(id) && !hp.records_of_institution(id).empty()
                                ? std::to_string(authorship::hyperprolific_authors(hp, id, y, c.hyperprolific).size())
                                : "0");
            t.rows.push_back(std::move(r));
        }
        emit(b, t);
    }
    {
        Table t{"Multiple affiliations", "multi_affiliation.csv",
                {"institution", "group", "% " + ss, "% " + es, "change"}, {}};
        for (const auto& id : members) {
            auto a = multi_affiliation_pct(corpus, id, s), z = multi_affiliation_pct(corpus, id, e);
            std::optional<Rational> d;
            if (a && z) d = *z - *a;
            t.rows.push_back({name_of(id), group_of(id), report_percent(a), report_percent(z), report_percent(d)});
        }
        emit(b, t);
    }
    {
        auto r0 = rank(Metric::intl_collab_pct, s), r1 = rank(Metric::intl_collab_pct, e);
        Table t{"International collaboration", "intl_collab.csv",
                {"institution", "group", "% " + ss, "% " + es, "rank " + ss, "rank " + es}, {}};
        for (const auto& id : members)
            t.rows.push_back({name_of(id), group_of(id), report_percent(intl_collab_pct(corpus, id, s)),
                              report_percent(intl_collab_pct(corpus, id, e)), rank_cell(r0.rank_of(id)),
                              rank_cell(r1.rank_of(id))});
        emit(b, t);
    }

    if (!study.empty() && !control.empty()) {
        screening::ComparisonOptions o;
        o.hyperprolific = c.hyperprolific;
        o.cross_group_min_pubs = c.cross_group_min_pubs;
        auto cmp = screening::compare_groups(corpus, study, control, YearRange{s, e}, o);
        if (src.hyperprolific != src.rates) {
            auto hp = screening::compare_groups(*src.hyperprolific, study, control, YearRange{s, e}, o);
            for (auto [to, from] : {std::pair{&cmp.study, &hp.study}, std::pair{&cmp.control, &hp.control}}) {
                to->hyperprolific = from->hyperprolific;
                to->hyperprolific_total = from->hyperprolific_total;
            }
        }
        // Years without any records (the fixture corpora cover only the two
        // boundary years) are left out of the comparison tables.
        for (auto* p : {&cmp.study, &cmp.control}) {
            auto& ys = p->summary.years;
            std::set<int> empty;
            for (const auto& g : ys)
                if (!corpus.year_range() || !std::any_of(corpus.records().begin(), corpus.records().end(),
                                                         [&](const PublicationRecord& r) { return r.year == g.year; }))
                    empty.insert(g.year);
            ys.erase(std::remove_if(ys.begin(), ys.end(), [&](const auto& g) { return empty.count(g.year) > 0; }),
                     ys.end());
            auto& notes = p->summary.notes;
            notes.erase(std::remove_if(notes.begin(), notes.end(),
                                       [&](const std::string& n) {
                                           return n.size() > 4 && empty.count(std::atoi(n.substr(0, 4).c_str())) > 0;
                                       }),
                        notes.end());
        }
        b.markdown += cmp.to_markdown();
        std::string csv = csv_line({"group", "year", "summed_output", "distinct_output", "first_author_pct",
                                    "authors_per_article", "intl_collab_pct", "multi_affiliation_pct",
                                    "overlap_pct", "median_output_rank"});
        for (const auto* p : {&cmp.study, &cmp.control})
            for (const auto& g : p->summary.years)
                csv += csv_line({p->summary.group_id, std::to_string(g.year), std::to_string(g.summed_output),
                                 std::to_string(g.distinct_output), report_percent(g.first_author.percent()),
                                 report_decimal(g.authors_per_article), report_percent(g.intl_collab.percent()),
                                 report_percent(g.multi_affiliation.percent()),
                                 g.overlap ? report_percent(g.overlap->percent()) : "n/a",
                                 report_decimal(g.median_output_rank)});
        b.csv["group_comparison.csv"] = csv;
    }

    if (!study.empty()) {
        const Corpus& net = *src.network;
        std::vector<std::string> seeds;
        for (const auto& id : study)
            if (net.registry().contains(id)) seeds.push_back(id);
        b.markdown += "## Co-authorship network of the study group\n\n";
        std::string csv = csv_line({"year", "articles_per_institution", "external_institutions", "links",
                                    "total_link_strength", "clusters"});
        std::vector<std::int64_t> externals;
        for (int y : {s, e}) {
            auto g = network::cluster_graph(network::build_graph(net, seeds, y, build_options(c)),
                                            c.network.clustering_seed);
            auto st = network::graph_stats(g);
            externals.push_back(st.external_nodes);
            b.markdown += std::to_string(y) + ": Articles per institution: " +
                          std::to_string(c.network.min_articles) +
                          " | External institutions: " + std::to_string(st.external_nodes) +
                          " | Links: " + std::to_string(st.links) +
                          " | Total link strength: " + std::to_string(st.total_link_strength) +
                          " | Clusters: " + std::to_string(st.clusters) + "\n\n";
            csv += csv_line({std::to_string(y), std::to_string(c.network.min_articles),
                             std::to_string(st.external_nodes), std::to_string(st.links),
                             std::to_string(st.total_link_strength), std::to_string(st.clusters)});
        }
        b.markdown += "Change in external institutions: " +
                      report_percent(growth_pct(externals[0], externals[1])) + "%\n";
        b.csv["network_footer.csv"] = csv;
    }
    return b;
}

}  // namespace

ReportBundle build_report(const Corpus& corpus, const RunConfig& config) {
    auto study = study_group(corpus, config);
    return compose({&corpus, &corpus, &corpus}, config, study, config.control);
}

ReportBundle build_fixture_report(const RunConfig& config) {
    const auto& f = synth::paper_fixtures();
    auto rates = synth::fixture_rates_corpus();
    auto hp = synth::fixture_hyperprolific_corpus();
    auto net = synth::network_growth_corpus(f.facts.external_institutions_2019,
                                            f.facts.external_institutions_2023, config.network.min_articles);
    RunConfig c = config;
    c.funnel.start_year = 2019;
    c.funnel.end_year = 2023;
    return compose({&rates, &hp, &net}, c, f.study_ids(), f.control_ids());
}

// ---------------------------------------------------------------------------

void cmd_ingest(const RunConfig& c, std::ostream& out) {
    std::vector<std::string> inputs = c.inputs;
    if (inputs.empty() && !c.corpus.empty()) inputs.push_back(c.corpus);
    if (inputs.empty()) throw UsageError("no input files given");
    require_file(c.registry, "registry");
    for (const auto& p : inputs) require_file(p, "input");
    Writer w(c);

    auto registry = InstitutionRegistry::load_file(c.registry);
    IngestOptions o;
    o.years = c.years;
    o.format = c.input_format == "csv" ? InputFormat::csv
               : c.input_format == "jsonl" ? InputFormat::jsonl
                                           : InputFormat::automatic;
    std::vector<PublicationRecord> records;
    IngestReport report;
    std::set<std::string> seen;
    for (const auto& p : inputs) {
        auto res = ingest_file(p, registry, o);
        for (const auto& r : res.corpus.records()) {
            if (!seen.insert(r.record_id).second) {
                ++report.rejected;
                report.rejects.push_back({0, "duplicate record_id " + r.record_id + " across inputs (" + p + ")",
                                          serialize_record(r)});
                continue;
            }
            records.push_back(r);
            ++report.accepted;
        }
        report.filtered += res.report.filtered;
        report.rejected += res.report.rejected;
        report.unresolved_affiliations += res.report.unresolved_affiliations;
        for (auto& r : res.report.rejects) report.rejects.push_back(std::move(r));
    }
    Corpus corpus(std::move(records), registry);
    w.put("corpus.jsonl", serialize(corpus));
    w.put("registry.json", registry.to_json());
    w.put("ingest_report.json", report.to_json() + "\n");
    w.put("rejects.jsonl", report.rejects_jsonl());
    out << report.to_json() << "\n";
    list_written(w, out);
}

void cmd_metrics(const RunConfig& c, std::ostream& out) {
    auto l = load(c);
    Writer w(c);
    TableOptions o;
    o.hyperprolific = c.hyperprolific;
    o.external_min_pubs = c.external_min_pubs;
    auto rows = indicator_table(l.corpus, o);
    for (const auto& f : c.table_formats) {
        if (f == "csv") w.put("indicators.csv", indicator_table_csv(rows));
        if (f == "jsonl") w.put("indicators.jsonl", indicator_table_jsonl(rows));
    }
    out << rows.size() << " indicator rows\n";
    list_written(w, out);
}

void cmd_flags(const RunConfig& c, std::ostream& out) {
    auto l = load(c);
    Writer w(c);
    const auto& corpus = l.corpus;
    auto range = corpus.year_range();
    std::vector<authorship::FlagRecord> flags;
    const auto ids = institutions_of(corpus);
    if (range) {
        for (const auto& id : ids)
            for (int y = range->first; y <= range->last; ++y)
                for (auto& f : authorship::hyperprolific_authors(corpus, id, y, c.hyperprolific))
                    flags.push_back(std::move(f));
        for (const auto& id : ids)
            for (auto& f : authorship::external_authors(corpus, id, c.external_min_pubs))
                flags.push_back(std::move(f));
        for (const auto& [author, pos] : corpus.by_author())
            if (auto f = authorship::surge_detect(authorship::build_profile(corpus, author), range->last, c.surge))
                flags.push_back(std::move(*f));
        for (const auto& [name, group] : {std::pair{"study", c.study}, std::pair{"control", c.control}}) {
            if (group.size() < 2) continue;
            for (auto& f : authorship::cross_group_authors(corpus, group, c.cross_group_min_pubs, name))
                flags.push_back(std::move(f));
        }
    }
    w.put("flags.jsonl", authorship::flags_jsonl(flags));
    if (range) w.put("hyperprolific.csv", authorship::hyperprolific_table_csv(corpus, ids, *range, c.hyperprolific));
    std::map<std::string, int> by_kind;
    for (const auto& f : flags) ++by_kind[std::string(authorship::flag_kind_name(f.flag))];
    for (const auto& [k, n] : by_kind) out << k << ": " << n << "\n";
    list_written(w, out);
}

void cmd_network(const RunConfig& c, std::ostream& out) {
    auto l = load(c);
    Writer w(c);
    auto seeds = c.network.seed_group.empty() ? study_group(l.corpus, c) : c.network.seed_group;
    if (seeds.empty()) throw DataError("network: no seed institutions (configure groups.study or network.seed_group)");
    const int year = c.network.year.value_or(c.funnel.end_year);
    auto format = network::parse_format(c.network.format);
    auto g = network::cluster_graph(network::build_graph(l.corpus, seeds, year, build_options(c)),
                                    c.network.clustering_seed);
    const char* ext = format == network::ExportFormat::edge_csv ? "csv"
                      : format == network::ExportFormat::graphml ? "graphml"
                                                                 : "json";
    w.put(std::string("network.") + ext, network::export_graph(g, format));
    auto st = network::graph_stats(g);
    w.put("network_stats.json", st.to_json() + "\n");
    out << "Articles per institution: " << c.network.min_articles << " | External institutions: " << st.external_nodes
        << " | Links: " << st.links << " | Total link strength: " << st.total_link_strength
        << " | Clusters: " << st.clusters << "\n";
    list_written(w, out);
}

void cmd_screen(const RunConfig& c, std::ostream& out) {
    auto l = load(c);
    Writer w(c);
    auto res = screening::run_funnel(l.corpus, c.funnel);
    std::set<std::string> subjects(res.stages[2].survivors.begin(), res.stages[2].survivors.end());
    for (const auto& id : c.study)
        if (l.corpus.registry().contains(id)) subjects.insert(id);
    std::optional<network::CoauthorshipGraph> graph;
    if (!res.final_flagged.empty())
        graph = network::build_graph(l.corpus, res.final_flagged, c.funnel.end_year, build_options(c));
    screening::DossierConfig dc = c.dossier;
    dc.hyperprolific = c.hyperprolific;
    dc.external_min_pubs = c.external_min_pubs;
    auto signals = screening::collect_signals(l.corpus, {subjects.begin(), subjects.end()}, c.funnel, dc,
                                              graph ? &*graph : nullptr);
    auto dossiers = screening::flag_report(res, signals, dc);
    const auto summary = res.summary_markdown();
    w.put("funnel_summary.md", summary);
    w.put("funnel.jsonl", res.to_jsonl());
    w.put("dossiers.jsonl", screening::dossiers_jsonl(dossiers));
    out << summary;
    list_written(w, out);
}

void cmd_synth(const RunConfig& c, std::ostream& out) {
    synth::GeneratorSpec spec;
    if (!c.synth.spec.empty()) {
        require_file(c.synth.spec, "generator spec");
        spec = synth::GeneratorSpec::from_json(io::read_file(c.synth.spec));
    } else if (c.synth.preset == "scale") {
        spec = synth::scale_spec(c.synth.seed, c.synth.records, c.synth.institutions < 10 ? 200 : c.synth.institutions);
    } else {
        synth::UniverseOptions o;
        o.institutions = c.synth.institutions;
        o.surges = c.synth.surges;
        spec = synth::planted_universe(c.synth.seed, o);
    }
    spec.validate();
    Writer w(c);
    auto g = synth::generate(spec);
    const auto records = g.records_jsonl();
    w.put("spec.json", spec.to_json());
    w.put("records.jsonl", records);
    w.put("registry.json", g.registry.to_json());
    w.put("ground_truth.jsonl", g.truth.to_jsonl());
    if (c.synth.oracle) {
        oracle::Options o;
        o.hyperprolific_threshold = c.hyperprolific.threshold;
        o.hyperprolific_inclusive = c.hyperprolific.inclusive;
        o.external_min_pubs = c.external_min_pubs;
        w.put("oracle_indicators.csv", oracle::metrics_csv(records, o));
    }
    if (c.synth.fixtures)
        for (const auto& [name, text] : synth::fixture_files()) w.put("fixtures/" + name, text);
    out << g.records.size() << " records, " << g.truth.plants.size() << " plants\n";
    list_written(w, out);
}

void cmd_report(const RunConfig& c, std::ostream& out) {
    ReportBundle b;
    if (c.fixtures) {
        Writer w(c);
        b = build_fixture_report(c);
        w.put("report.md", b.markdown);
        for (const auto& [name, text] : b.csv) w.put(name, text);
        out << b.markdown;
        list_written(w, out);
        return;
    }
    auto l = load(c);
    for (const auto& id : c.control) l.corpus.require_institution(id);
    Writer w(c);
    b = build_report(l.corpus, c);
    w.put("report.md", b.markdown);
    for (const auto& [name, text] : b.csv) w.put(name, text);
    out << b.markdown;
    list_written(w, out);
}

}  // namespace bibscreen::cli
