#include "bibscreen/network.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "bibscreen/error.hpp"

namespace bibscreen::network {

const Node* CoauthorshipGraph::find(std::string_view id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const Node& n, std::string_view v) { return n.id < v; });
    if (it == nodes.end() || it->id != id) return nullptr;
    return &*it;
}

void CoauthorshipGraph::refresh_strengths() {
    std::unordered_map<std::string, std::int64_t> sums;
    for (const auto& e : edges) {
        sums[e.a] += e.strength;
        sums[e.b] += e.strength;
    }
    for (auto& n : nodes) n.total_link_strength = sums[n.id];
}

std::vector<std::string> CoauthorshipGraph::check() const {
    std::vector<std::string> problems;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i - 1].id < nodes[i].id)) problems.push_back("nodes not sorted or repeated");
    std::int64_t edge_sum = 0;
    std::unordered_map<std::string, std::int64_t> sums;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.a == e.b) problems.push_back("self edge on " + e.a);
        if (!(e.a < e.b)) problems.push_back("edge endpoints out of order: " + e.a + "," + e.b);
        if (e.strength < 1) problems.push_back("non-positive strength on " + e.a + "," + e.b);
        if (!find(e.a) || !find(e.b)) problems.push_back("edge to unknown node " + e.a + "," + e.b);
        if (i > 0 && !(std::tie(edges[i - 1].a, edges[i - 1].b) < std::tie(e.a, e.b)))
            problems.push_back("edges not sorted or repeated");
        edge_sum += e.strength;
        sums[e.a] += e.strength;
        sums[e.b] += e.strength;
    }
    std::int64_t node_sum = 0;
    for (const auto& n : nodes) {
        node_sum += n.total_link_strength;
        if (n.total_link_strength != sums[n.id])
            problems.push_back("total link strength of " + n.id + " disagrees with its edges");
        if (!n.seed && n.article_count < params.min_articles)
            problems.push_back("external node " + n.id + " below min_articles");
    }
    if (node_sum != 2 * edge_sum) problems.push_back("handshake identity fails");
    return problems;
}

CoauthorshipGraph build_graph(const Corpus& corpus, const std::vector<std::string>& seed_group,
                              int year, const BuildOptions& options) {
    if (seed_group.empty()) throw UsageError("network seed group must not be empty");
    if (options.min_articles < 0) throw UsageError("min_articles must be non-negative");
    std::set<std::string> seeds(seed_group.begin(), seed_group.end());
    for (const auto& s : seeds) corpus.require_institution(s);

    CoauthorshipGraph g;
    g.params.year = year;
    g.params.seed_group.assign(seeds.begin(), seeds.end());
    g.params.min_articles = options.min_articles;
    g.params.qualification = options.qualification;

    // Records of the year that involve a seed member, once each.
    std::set<std::size_t> seed_records;
    for (const auto& s : seeds)
        for (std::size_t i : corpus.records_of_institution(s))
            if (corpus.record(i).year == year) seed_records.insert(i);

    std::map<std::string, std::int64_t> co_published;
    for (std::size_t i : seed_records)
        for (const auto& inst : corpus.record(i).institutions())
            if (!seeds.count(inst)) ++co_published[inst];

    auto total_output = [&](const std::string& id) {
        std::int64_t n = 0;
        for (std::size_t i : corpus.records_of_institution(id))
            if (corpus.record(i).year == year) ++n;
        return n;
    };

    std::map<std::string, Node> nodes;
    for (const auto& s : seeds) nodes[s] = Node{s, total_output(s), 0, 0, true};
    for (const auto& [id, shared] : co_published) {
        auto total = total_output(id);
        auto measure = options.qualification == Qualification::total_output ? total : shared;
        if (measure >= options.min_articles) nodes[id] = Node{id, total, 0, 0, false};
    }

    std::map<std::pair<std::string, std::string>, std::int64_t> strengths;
    for (const auto& r : corpus.records()) {
        if (r.year != year) continue;
        std::vector<std::string> present;
        for (auto& inst : r.institutions())
            if (nodes.count(inst)) present.push_back(std::move(inst));
        for (std::size_t a = 0; a < present.size(); ++a)
            for (std::size_t b = a + 1; b < present.size(); ++b) ++strengths[{present[a], present[b]}];
    }
    for (auto& [id, n] : nodes) g.nodes.push_back(std::move(n));
    for (const auto& [pair, s] : strengths) g.edges.push_back({pair.first, pair.second, s});
    g.refresh_strengths();
    return g;
}

namespace {

struct Indexed {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> adj;
    std::vector<std::int64_t> degree;
    std::int64_t degree_sum = 0;  // twice the edge sum
};

Indexed index_graph(const CoauthorshipGraph& g) {
    Indexed x;
    x.n = g.nodes.size();
    x.adj.resize(x.n);
    x.degree.assign(x.n, 0);
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < x.n; ++i) pos[g.nodes[i].id] = i;
    for (const auto& e : g.edges) {
        auto a = pos.at(e.a), b = pos.at(e.b);
        x.adj[a].push_back({b, e.strength});
        x.adj[b].push_back({a, e.strength});
        x.degree[a] += e.strength;
        x.degree[b] += e.strength;
        x.degree_sum += 2 * e.strength;
    }
    return x;
}

Rational modularity_of(const Indexed& x, const std::vector<std::size_t>& comm) {
    if (x.degree_sum == 0) return Rational(0);
    std::map<std::size_t, std::int64_t> internal, degree;
    for (std::size_t v = 0; v < x.n; ++v) {
        degree[comm[v]] += x.degree[v];
        for (const auto& [u, w] : x.adj[v])
            if (comm[u] == comm[v]) internal[comm[v]] += w;  // each edge seen twice
    }
    __extension__ typedef __int128 Wide;
    Wide s = x.degree_sum;
    Wide num = 0;
    for (const auto& [c, d] : degree) {
        Wide in = internal.count(c) ? internal[c] : 0;
        num += s * in - Wide(d) * d;
    }
    // Reduce before narrowing: the fraction is in (-1, 1].
    Wide den = s * s;
    Wide a = num < 0 ? -num : num, b = den;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    if (a == 0) a = 1;
    return Rational(static_cast<std::int64_t>(num / a), static_cast<std::int64_t>(den / a));
}

}  // namespace

CoauthorshipGraph cluster_graph(CoauthorshipGraph graph, std::uint64_t seed) {
    auto x = index_graph(graph);
    const std::size_t n = x.n;
    if (n == 0) return graph;
    const std::int64_t S = x.degree_sum;

    // Agglomeration over community ids; ids are node indices (sorted by id).
    std::vector<std::map<std::size_t, std::int64_t>> cadj(n);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& [u, w] : x.adj[v]) cadj[v][u] += w;
    std::vector<std::int64_t> cdeg = x.degree;
    std::vector<std::size_t> comm(n);
    for (std::size_t v = 0; v < n; ++v) comm[v] = v;
    std::vector<bool> alive(n, true);

    while (true) {
        bool found = false;
        std::int64_t best = 0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (const auto& [j, w] : cadj[i]) {
                if (j <= i) continue;
                std::int64_t gain = S * w - cdeg[i] * cdeg[j];
                if (gain > best) {
                    best = gain;
                    bi = i;
                    bj = j;
                    found = true;
                }
            }
        }
        if (!found) break;
        for (const auto& [k, w] : cadj[bj]) {
            if (k == bi) continue;
            cadj[bi][k] += w;
            cadj[k].erase(bj);
            cadj[k][bi] += w;
        }
        cadj[bi].erase(bj);
        cadj[bj].clear();
        cdeg[bi] += cdeg[bj];
        cdeg[bj] = 0;
        alive[bj] = false;
        for (auto& c : comm)
            if (c == bj) c = bi;
    }

    // Local moves: a node changes community only for a strict gain.
    std::vector<std::size_t> order(n);
    for (std::size_t v = 0; v < n; ++v) order[v] = v;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    for (int pass = 0; pass < 100; ++pass) {
        bool moved = false;
        for (std::size_t v : order) {
            if (x.degree[v] == 0) continue;
            std::map<std::size_t, std::int64_t> k;
            for (const auto& [u, w] : x.adj[v]) k[comm[u]] += w;
            const std::size_t a = comm[v];
            const std::int64_t kva = k.count(a) ? k[a] : 0;
            const std::int64_t da = cdeg[a] - x.degree[v];
            std::int64_t best = 0;
            std::size_t target = a;
            for (const auto& [b, kvb] : k) {
                if (b == a) continue;
                std::int64_t gain = S * (kvb - kva) - x.degree[v] * (cdeg[b] - da);
                if (gain > best) {
                    best = gain;
                    target = b;
                }
            }
            if (target != a) {
                cdeg[a] -= x.degree[v];
                cdeg[target] += x.degree[v];
                comm[v] = target;
                moved = true;
            }
        }
        if (!moved) break;
    }

    std::map<std::size_t, int> label;
    for (std::size_t v = 0; v < n; ++v)
        if (!label.count(comm[v])) label.emplace(comm[v], static_cast<int>(label.size()) + 1);
    for (std::size_t v = 0; v < n; ++v) graph.nodes[v].cluster = label[comm[v]];
    return graph;
}

Rational modularity(const CoauthorshipGraph& graph) {
    auto x = index_graph(graph);
    std::vector<std::size_t> comm(x.n);
    for (std::size_t v = 0; v < x.n; ++v) comm[v] = static_cast<std::size_t>(graph.nodes[v].cluster);
    return modularity_of(x, comm);
}

Rational singleton_modularity(const CoauthorshipGraph& graph) {
    auto x = index_graph(graph);
    std::vector<std::size_t> comm(x.n);
    for (std::size_t v = 0; v < x.n; ++v) comm[v] = v;
    return modularity_of(x, comm);
}

GraphStats graph_stats(const CoauthorshipGraph& graph) {
    GraphStats s;
    s.nodes = static_cast<std::int64_t>(graph.nodes.size());
    std::set<int> clusters;
    for (const auto& n : graph.nodes) {
        if (!n.seed) ++s.external_nodes;
        s.node_strength_sum += n.total_link_strength;
        if (n.cluster > 0) clusters.insert(n.cluster);
    }
    s.links = static_cast<std::int64_t>(graph.edges.size());
    for (const auto& e : graph.edges) s.total_link_strength += e.strength;
    s.clusters = static_cast<std::int64_t>(clusters.size());
    return s;
}

}  // namespace bibscreen::network
