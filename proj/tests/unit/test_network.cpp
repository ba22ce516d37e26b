#include <doctest.h>

#include "bibscreen/error.hpp"
#include "bibscreen/indicators.hpp"
#include "bibscreen/network.hpp"
#include "bibscreen/synth.hpp"
#include "support.hpp"

using namespace bibscreen;
using namespace bibscreen::network;
using testing::TinyCorpus;

namespace {

CoauthorshipGraph graph_of(std::vector<std::string> ids, std::vector<Edge> edges) {
    CoauthorshipGraph g;
    for (auto& id : ids) g.nodes.push_back({id, 0, 0, 0, false});
    g.edges = std::move(edges);
    g.refresh_strengths();
    return g;
}

}  // namespace

TEST_CASE("two institutions co-authoring three records") {
    TinyCorpus t;
    t.inst("a", "SA").inst("b", "US");
    for (int i = 0; i < 3; ++i) t.rec("r" + std::to_string(i), 2023, {{"x", {"a"}}, {"y", {"b"}}});
    auto g = build_graph(t.build(), {"a"}, 2023, {1, Qualification::total_output});
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == Edge{"a", "b", 3});
    CHECK(g.find("a")->seed);
    CHECK(g.find("b")->article_count == 3);
    auto st = graph_stats(g);
    CHECK(st.nodes == 2);
    CHECK(st.external_nodes == 1);
    CHECK(st.links == 1);
    CHECK(st.total_link_strength == 3);
    CHECK(st.node_strength_sum == 6);
    CHECK(export_graph(g, ExportFormat::edge_csv) == "source,target,strength\na,b,3\n");
}

TEST_CASE("external nodes below min_articles are dropped") {
    TinyCorpus t;
    t.inst("s", "SA").inst("big", "US").inst("small", "US");
    for (int i = 0; i < 5; ++i) t.rec("b" + std::to_string(i), 2023, {{"x", {"big"}}});
    t.rec("j1", 2023, {{"x", {"s"}}, {"y", {"big"}}, {"z", {"small"}}});
    auto c = t.build();
    auto g = build_graph(c, {"s"}, 2023, {6, Qualification::total_output});
    CHECK(g.find("big"));
    CHECK_FALSE(g.find("small"));
    CHECK(g.check().empty());
    auto co = build_graph(c, {"s"}, 2023, {2, Qualification::co_published});
    CHECK_FALSE(co.find("big"));
}

TEST_CASE("closed seed group") {
    TinyCorpus t;
    t.inst("a", "SA").inst("b", "SA");
    t.rec("r1", 2023, {{"x", {"a"}}}).rec("r2", 2023, {{"y", {"b"}}});
    auto g = build_graph(t.build(), {"a", "b"}, 2023);
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.empty());
}

TEST_CASE("empty graph") {
    CoauthorshipGraph g;
    CHECK(graph_stats(g) == GraphStats{});
    CHECK(export_graph(g, ExportFormat::edge_csv) == "source,target,strength\n");
}

TEST_CASE("clustering: components and cliques") {
    auto two = cluster_graph(graph_of({"a", "b", "c", "d"}, {{"a", "b", 2}, {"c", "d", 2}}));
    CHECK(two.find("a")->cluster == 1);
    CHECK(two.find("b")->cluster == 1);
    CHECK(two.find("c")->cluster == 2);
    CHECK(two.find("d")->cluster == 2);

    std::vector<Edge> clique;
    std::vector<std::string> ids{"a", "b", "c", "d", "e"};
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) clique.push_back({ids[i], ids[j], 1});
    auto one = cluster_graph(graph_of(ids, clique));
    CHECK(graph_stats(one).clusters == 1);
}

TEST_CASE("clustering recovers two planted blocks") {
    std::vector<std::string> ids;
    for (int i = 0; i < 20; ++i) ids.push_back((i < 10 ? "p" : "q") + std::to_string(i % 10));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const bool same = (i < 10) == (j < 10);
            auto [a, b] = std::minmax(ids[i], ids[j]);
            edges.push_back({a, b, same ? 10 : 1});
        }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
    std::sort(ids.begin(), ids.end());
    for (std::uint64_t seed : {0u, 1u, 7u}) {
        auto g = cluster_graph(graph_of(ids, edges), seed);
        CHECK(graph_stats(g).clusters == 2);
        for (const auto& n : g.nodes) CHECK(n.cluster == (n.id[0] == 'p' ? 1 : 2));
        CHECK(modularity(g) > singleton_modularity(g));
    }
}

TEST_CASE("export formats and errors") {
    CHECK(parse_format("csv") == ExportFormat::edge_csv);
    CHECK(parse_format("vosviewer") == ExportFormat::vosviewer_json);
    CHECK(parse_format("graphml") == ExportFormat::graphml);
    CHECK_THROWS_WITH_AS(parse_format("dot"), doctest::Contains("graphml"), UsageError);
    auto g = cluster_graph(graph_of({"a", "b", "c"}, {{"a", "b", 3}, {"b", "c", 1}}));
    CHECK(export_graph(g, ExportFormat::vosviewer_json) == export_graph(g, ExportFormat::vosviewer_json));
    CHECK(import_vosviewer_json(export_graph(g, ExportFormat::vosviewer_json)) == g);
    auto xml = export_graph(g, ExportFormat::graphml);
    CHECK(xml.find("<graphml") != std::string::npos);
    CHECK(import_edge_csv(export_graph(g, ExportFormat::edge_csv)).edges == g.edges);
}

TEST_CASE("planted external institutions: 27 then 254") {
    const auto& f = synth::paper_fixtures();
    auto c = synth::network_growth_corpus(27, 254);
    auto g19 = build_graph(c, f.study_ids(), 2019);
    auto g23 = build_graph(c, f.study_ids(), 2023);
    CHECK(g19.nodes.size() == f.study_ids().size() + 27);
    CHECK(graph_stats(g23).external_nodes == 254);
    CHECK(indicators::growth_pct(27, 254)->round_half_up() == 841);
    for (const auto& n : g23.nodes) CHECK((n.seed || n.article_count >= 91));
}

TEST_CASE("graph build is deterministic and order independent") {
    auto c = synth::generate(testing::random_spec(9)).corpus();
    auto records = c.records();
    std::reverse(records.begin(), records.end());
    Corpus r(records, c.registry());
    std::vector<std::string> seeds{c.by_institution().begin()->first};
    CHECK(build_graph(c, seeds, 2023, {1, Qualification::total_output}) ==
          build_graph(r, seeds, 2023, {1, Qualification::total_output}));
}
