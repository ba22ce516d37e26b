#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bibscreen/corpus.hpp"
#include "bibscreen/rational.hpp"

namespace bibscreen::network {

/// What "min_articles" counts when deciding whether an external institution
/// becomes a node.
enum class Qualification {
    total_output,  // all records of the institution in the year
    co_published,  // records shared with at least one seed member
};

struct BuildOptions {
    std::int64_t min_articles = 91;
    Qualification qualification = Qualification::total_output;
};

struct Node {
    std::string id;
    std::int64_t article_count = 0;
    std::int64_t total_link_strength = 0;
    int cluster = 0;  // 0 until clustered
    bool seed = false;

    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string a;  // a < b
    std::string b;
    std::int64_t strength = 0;

    bool operator==(const Edge&) const = default;
};

struct GraphParams {
    int year = 0;
    std::vector<std::string> seed_group;  // sorted
    std::int64_t min_articles = 0;
    Qualification qualification = Qualification::total_output;

    bool operator==(const GraphParams&) const = default;
};

/// Nodes sorted by id, edges sorted by (a, b).
struct CoauthorshipGraph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    GraphParams params;

    const Node* find(std::string_view id) const;
    /// Recomputes every node's total_link_strength from the edges.
    void refresh_strengths();
    /// Empty when the structural invariants hold.
    std::vector<std::string> check() const;

    bool operator==(const CoauthorshipGraph&) const = default;
};

CoauthorshipGraph build_graph(const Corpus& corpus, const std::vector<std::string>& seed_group,
                              int year, const BuildOptions& options = {});

/// Greedy modularity agglomeration followed by a local-move pass whose visit
/// order is shuffled with `seed`. Labels run from 1 in order of each
/// cluster's smallest node id.
CoauthorshipGraph cluster_graph(CoauthorshipGraph graph, std::uint64_t seed = 0);

/// Newman modularity of the current labels.
Rational modularity(const CoauthorshipGraph& graph);
/// Modularity when every node sits in its own cluster.
Rational singleton_modularity(const CoauthorshipGraph& graph);

struct GraphStats {
    std::int64_t nodes = 0;
    std::int64_t external_nodes = 0;
    std::int64_t links = 0;
    std::int64_t total_link_strength = 0;  // sum over edges
    std::int64_t node_strength_sum = 0;    // sum over nodes, twice the edge sum
    std::int64_t clusters = 0;

    std::string to_json() const;
    bool operator==(const GraphStats&) const = default;
};

GraphStats graph_stats(const CoauthorshipGraph& graph);

enum class ExportFormat { edge_csv, vosviewer_json, graphml };

/// Accepts "csv", "vosviewer" and "graphml"; throws UsageError listing them.
ExportFormat parse_format(std::string_view name);
std::string_view format_name(ExportFormat format);

std::string export_graph(const CoauthorshipGraph& graph, ExportFormat format);

/// Edge-list import: nodes are the edge endpoints, article counts zero.
CoauthorshipGraph import_edge_csv(std::string_view text);
/// Full import of the VOSviewer-style JSON written by export_graph.
CoauthorshipGraph import_vosviewer_json(std::string_view text);

}  // namespace bibscreen::network
