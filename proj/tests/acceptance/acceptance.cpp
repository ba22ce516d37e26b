// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "bibscreen/authorship.hpp"
#include "bibscreen/cli.hpp"
#include "bibscreen/indicators.hpp"
#include "bibscreen/network.hpp"
#include "bibscreen/synth.hpp"
#include "support.hpp"

using namespace bibscreen;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const std::function<Verdict()>& body) {
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " -- " << v.detail
              << std::endl;
}

std::int64_t rounded_growth(std::int64_t a, std::int64_t b) {
    return indicators::growth_pct(a, b)->round_half_up();
}

Verdict output_growth() {
    auto t0 = Clock::now();
    const auto& f = synth::paper_fixtures();
    std::vector<std::string> off;
    for (const auto& r : f.output) {
        auto got = rounded_growth(r.articles_2019, r.articles_2023);
        if (std::llabs(got - r.change_pct) > 1)
            off.push_back(r.id + " " + std::to_string(r.articles_2019) + "->" + std::to_string(r.articles_2023) +
                          " computes " + std::to_string(got) + "% vs published " + std::to_string(r.change_pct) + "%");
    }
    const double secs = seconds_since(t0);
    // The same counts must come back out of the fixture corpus (not timed).
    auto corpus = synth::fixture_rates_corpus();
    std::size_t corpus_mismatch = 0;
    for (const auto& r : f.output)
        if (indicators::output_count(corpus, r.id, 2019) != r.articles_2019 ||
            indicators::output_count(corpus, r.id, 2023) != r.articles_2023)
            ++corpus_mismatch;
    std::ostringstream d;
    d << f.output.size() << " rows, " << f.output.size() - off.size() << " within 1 point, fixture corpus counts "
      << (corpus_mismatch ? "differ on " + std::to_string(corpus_mismatch) + " rows" : "match")
      << ", arithmetic " << secs << " s";
    for (const auto& o : off) d << "; " << o;
    return {off.empty() && corpus_mismatch == 0 && f.output.size() == 23 && secs < 1.0, d.str()};
}

Verdict multi_affiliation_change() {
    const auto& f = synth::paper_fixtures();
    auto corpus = synth::fixture_rates_corpus();
    std::vector<std::string> off;
    for (const auto& r : f.multi_affiliation) {
        if (std::abs((r.pct_2023 - r.pct_2019) - r.change) > 1) off.push_back(r.id + " published columns");
        auto a = indicators::multi_affiliation_pct(corpus, r.id, 2019);
        auto b = indicators::multi_affiliation_pct(corpus, r.id, 2023);
        if (!a || !b) {
            off.push_back(r.id + " has no data");
            continue;
        }
        auto change = (*b - *a).round_half_up();
        if (std::llabs(change - r.change) > 1)
            off.push_back(r.id + " corpus change " + std::to_string(change) + " vs " + std::to_string(r.change));
    }
    std::ostringstream d;
    d << f.multi_affiliation.size() << " rows, " << off.size() << " outside 1 point";
    for (const auto& o : off) d << "; " << o;
    return {off.empty() && f.multi_affiliation.size() == 23, d.str()};
}

Verdict external_growth() {
    const auto& f = synth::paper_fixtures();
    auto corpus = synth::network_growth_corpus(f.facts.external_institutions_2019, f.facts.external_institutions_2023);
    std::vector<std::int64_t> ext;
    for (int y : {2019, 2023}) {
        auto g = network::build_graph(corpus, f.study_ids(), y);
        ext.push_back(network::graph_stats(g).external_nodes);
    }
    const auto pct = rounded_growth(ext[0], ext[1]);
    std::ostringstream d;
    d << "external institutions " << ext[0] << " -> " << ext[1] << ", reported " << pct << "% vs published "
      << f.facts.external_institutions_change_pct << "%";
    return {ext[0] == 27 && ext[1] == 254 && std::llabs(pct - f.facts.external_institutions_change_pct) <= 1, d.str()};
}

Verdict group_aggregates() {
    const auto& f = synth::paper_fixtures();
    const YearRange years{2019, 2023};
    auto rates = synth::fixture_rates_corpus();
    auto study = indicators::group_summary(rates, "study", f.study_ids(), years);
    auto control = indicators::group_summary(rates, "control", f.control_ids(), years);
    const auto sg = study.growth_pct->round_half_up(), cg = control.growth_pct->round_half_up();

    auto hp = synth::fixture_hyperprolific_corpus();
    auto total = [&](const std::vector<std::string>& ids, int y) {
        std::int64_t n = 0;
        for (const auto& id : ids) n += static_cast<std::int64_t>(authorship::hyperprolific_authors(hp, id, y).size());
        return n;
    };
    const auto s19 = total(f.study_ids(), 2019), s23 = total(f.study_ids(), 2023);
    const auto controls = static_cast<std::int64_t>(f.control_ids().size());
    const Rational c19(total(f.control_ids(), 2019), controls), c23(total(f.control_ids(), 2023), controls);
    const bool flat = c19.round_half_up() == f.facts.control_hyperprolific_per_institution &&
                      c23.round_half_up() == f.facts.control_hyperprolific_per_institution;

    std::ostringstream d;
    d << "study growth " << sg << "% (published " << f.facts.study_growth_pct << "%), control " << cg
      << "% (published " << f.facts.control_growth_pct << "%), study hyperprolific " << s19 << " -> " << s23
      << ", control per institution " << c19.format_fixed(2) << " -> " << c23.format_fixed(2);
    return {sg == f.facts.study_growth_pct && cg == f.facts.control_growth_pct &&
                s19 == f.facts.study_hyperprolific_2019 && s23 == f.facts.study_hyperprolific_2023 && flat,
            d.str()};
}

Verdict oracle_equivalence() {
    auto t0 = Clock::now();
    int equal = 0;
    std::size_t largest = 0;
    std::string first;
    for (std::uint64_t i = 0; i < 25; ++i) {
        std::size_t n = 0;
        auto diff = testing::oracle_mismatch(testing::bounded_spec(1000 + 37 * i, 5000), &n);
        largest = std::max(largest, n);
        if (diff.empty())
            ++equal;
        else if (first.empty())
            first = diff;
    }
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << equal << "/25 corpora equal (largest " << largest << " records), " << secs << " s";
    if (!first.empty()) d << "; " << first;
    return {equal == 25 && largest <= 5000 && secs < 30.0, d.str()};
}

Verdict planted_recovery() {
    auto t0 = Clock::now();
    int funnel = 0, detectors = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto r = testing::planted_recovery(seed);
        funnel += r.funnel_exact;
        detectors += r.detectors_exact;
        if (!r.detail.empty() && first.empty()) first = "seed " + std::to_string(seed) + ": " + r.detail;
    }
    std::ostringstream d;
    d << "funnel exact on " << funnel << "/100 seeds, detectors exact on " << detectors << "/100, "
      << seconds_since(t0) << " s";
    if (!first.empty()) d << "; " << first;
    return {funnel >= 95 && detectors == 100, d.str()};
}

Verdict properties() {
    auto t0 = Clock::now();
    auto outcomes = testing::property_batches(200);
    bool ok = true;
    std::ostringstream d;
    for (const auto& o : outcomes) {
        ok = ok && o.ok() && o.cases >= 200;
        d << o.name << " " << o.cases - o.failures << "/" << o.cases;
        if (!o.first_failure.empty()) d << " (" << o.first_failure << ")";
        d << "; ";
    }
    d << seconds_since(t0) << " s";
    return {ok, d.str()};
}

int cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err, {});
    if (code != 0) std::cerr << err.str();
    return code;
}

Verdict pipeline_scale() {
    const fs::path dir = fs::temp_directory_path() / ("bibscreen-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    const std::string d = dir.string();

    auto in_child = [](const std::function<int()>& body, double& secs, long& maxrss_kb) {
        auto t0 = Clock::now();
        pid_t pid = ::fork();
        if (pid == 0) {
            int code = 1;
            try {
                code = body();
            } catch (...) {
            }
            std::fflush(nullptr);
            ::_exit(code);
        }
        int status = 0;
        struct rusage usage {};
        ::wait4(pid, &status, 0, &usage);
        secs = seconds_since(t0);
        maxrss_kb = usage.ru_maxrss;
        return WIFEXITED(status) ? WEXITSTATUS(status) : 99;
    };

    double gen_secs = 0, secs = 0;
    long gen_rss = 0, rss = 0;
    int code = in_child(
        [&] { return cli({"synth", "--preset", "scale", "--records", "100000", "--seed", "7", "-o", d + "/raw"}); },
        gen_secs, gen_rss);
    if (code != 0) return {false, "synthetic corpus generation failed with exit " + std::to_string(code)};

    std::size_t records = 0;
    {
        std::ifstream in(d + "/raw/records.jsonl");
        std::string line;
        while (std::getline(in, line)) ++records;
    }
    code = in_child(
        [&] {
            const std::string reg = d + "/ingest/registry.json", corpus = d + "/ingest/corpus.jsonl";
            std::vector<std::vector<std::string>> steps{
                {"ingest", d + "/raw/records.jsonl", "-r", d + "/raw/registry.json", "-o", d + "/ingest"},
                {"metrics", "--corpus", corpus, "-r", reg, "-o", d + "/metrics"},
                {"flags", "--corpus", corpus, "-r", reg, "-o", d + "/flags"},
                {"network", "--corpus", corpus, "-r", reg, "-o", d + "/network"},
                {"screen", "--corpus", corpus, "-r", reg, "-o", d + "/screen"},
                {"report", "--corpus", corpus, "-r", reg, "-o", d + "/report"},
            };
            for (const auto& s : steps)
                if (int c = cli(s); c != 0) return c;
            return 0;
        },
        secs, rss);
    const bool report_written = fs::exists(d + "/report/report.md");
    fs::remove_all(dir);
    std::ostringstream out;
    out << records << " input lines, pipeline " << secs << " s, peak RSS " << rss / 1024 << " MiB (generation "
        << gen_secs << " s, " << gen_rss / 1024 << " MiB)";
    if (code != 0) out << ", pipeline exit " << code;
    return {code == 0 && report_written && records >= 100000 && secs < 60.0 && rss < 2L * 1024 * 1024, out.str()};
}

Verdict round_trips() {
    int corpora = 0, corpus_ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = synth::generate(testing::random_spec(seed * 101));
        auto c = g.corpus();
        auto back = ingest_text(serialize(c), c.registry()).corpus;
        ++corpora;
        corpus_ok += back == c && serialize(back) == serialize(c);
    }

    int graphs = 0, graph_ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        network::CoauthorshipGraph g;
        const int n = 30;
        for (int i = 0; i < n; ++i) {
            char id[8];
            std::snprintf(id, sizeof id, "n%02d", i);
            g.nodes.push_back({id, static_cast<std::int64_t>(rng() % 500), 0, 0, i < 3});
        }
        std::set<std::pair<int, int>> pairs;
        while (pairs.size() < 100) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
        }
        for (auto [a, b] : pairs)
            g.edges.push_back({g.nodes[a].id, g.nodes[b].id, static_cast<std::int64_t>(1 + rng() % 20)});
        g.refresh_strengths();
        g = network::cluster_graph(g, seed);

        auto csv = network::import_edge_csv(network::export_graph(g, network::ExportFormat::edge_csv));
        bool same_edges = csv.edges == g.edges && csv.nodes.size() == g.nodes.size();
        for (std::size_t i = 0; same_edges && i < g.nodes.size(); ++i)
            same_edges = csv.nodes[i].id == g.nodes[i].id &&
                         csv.nodes[i].total_link_strength == g.nodes[i].total_link_strength;
        auto vos = network::import_vosviewer_json(network::export_graph(g, network::ExportFormat::vosviewer_json));
        ++graphs;
        graph_ok += same_edges && vos == g && g.edges.size() == 100;
    }
    std::ostringstream d;
    d << "corpus serialize/re-ingest identical " << corpus_ok << "/" << corpora << ", 100-edge graph export/import identical "
      << graph_ok << "/" << graphs;
    return {corpus_ok == corpora && graph_ok == graphs, d.str()};
}

}  // namespace

int main() {
    report(1, "output growth within 1 point for all 23 fixture rows, under 1 s", output_growth);
    report(2, "multi-affiliation change within 1 point for all 23 fixture rows", multi_affiliation_change);
    report(3, "external-institution growth 27 -> 254 reported as 840% within 1 point", external_growth);
    report(4, "study 266% vs control 10% growth, hyperprolific 18 -> 260 vs flat control", group_aggregates);
    report(5, "indicator table equals the full-scan oracle on 25 corpora, under 30 s", oracle_equivalence);
    report(6, "planted surges recovered on at least 95/100 seeds, detectors exact on all", planted_recovery);
    report(7, "property batches of 200 generated cases, zero failures", properties);
    report(8, "100k-record pipeline under 60 s and 2 GB", pipeline_scale);
    report(9, "corpus and graph round-trips", round_trips);
    std::cout << (9 - failures) << "/9 criteria passed" << std::endl;
    return failures;
}
