#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bibscreen/csv.hpp"
#include "bibscreen/error.hpp"
#include "bibscreen/network.hpp"

namespace bibscreen::network {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::pair<ExportFormat, std::string_view> kFormats[] = {
    {ExportFormat::edge_csv, "csv"},
    {ExportFormat::vosviewer_json, "vosviewer"},
    {ExportFormat::graphml, "graphml"},
};

std::string_view qualification_name(Qualification q) {
    return q == Qualification::total_output ? "total_output" : "co_published";
}

Qualification parse_qualification(std::string_view s) {
    if (s == "total_output") return Qualification::total_output;
    if (s == "co_published") return Qualification::co_published;
    throw DataError("unknown qualification '" + std::string(s) + "'");
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string edge_csv(const CoauthorshipGraph& g) {
    std::string out = "source,target,strength\n";
    for (const auto& e : g.edges) {
        out += csv::join_row({e.a, e.b, std::to_string(e.strength)});
        out += '\n';
    }
    return out;
}

std::string vosviewer(const CoauthorshipGraph& g) {
    std::map<std::string, std::size_t> ids;
    ojson items = ojson::array();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        ids[n.id] = i + 1;
        ojson item;
        item["id"] = i + 1;
        item["label"] = n.id;
        item["cluster"] = n.cluster;
        item["weights"] = {{"Documents", n.article_count},
                           {"Total link strength", n.total_link_strength}};
        item["scores"] = {{"Seed", n.seed ? 1 : 0}};
        items.push_back(std::move(item));
    }
    ojson links = ojson::array();
    for (const auto& e : g.edges)
        links.push_back({{"source_id", ids.at(e.a)}, {"target_id", ids.at(e.b)},
                         {"strength", e.strength}});
    ojson root;
    root["network"] = {{"items", std::move(items)}, {"links", std::move(links)}};
    root["parameters"] = {{"year", g.params.year},
                          {"seed_group", g.params.seed_group},
                          {"min_articles", g.params.min_articles},
                          {"qualification", qualification_name(g.params.qualification)}};
    return root.dump(2) + "\n";
}

std::string graphml(const CoauthorshipGraph& g) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"articles\" for=\"node\" attr.name=\"article_count\" attr.type=\"long\"/>\n"
        << "  <key id=\"tls\" for=\"node\" attr.name=\"total_link_strength\" attr.type=\"long\"/>\n"
        << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n"
        << "  <key id=\"seed\" for=\"node\" attr.name=\"seed\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"strength\" for=\"edge\" attr.name=\"strength\" attr.type=\"long\"/>\n"
        << "  <graph id=\"coauthorship-" << g.params.year << "\" edgedefault=\"undirected\">\n";
    for (const auto& n : g.nodes) {
        out << "    <node id=\"" << xml_escape(n.id) << "\">"
            << "<data key=\"articles\">" << n.article_count << "</data>"
            << "<data key=\"tls\">" << n.total_link_strength << "</data>"
            << "<data key=\"cluster\">" << n.cluster << "</data>"
            << "<data key=\"seed\">" << (n.seed ? "true" : "false") << "</data></node>\n";
    }
    for (const auto& e : g.edges) {
        out << "    <edge source=\"" << xml_escape(e.a) << "\" target=\"" << xml_escape(e.b)
            << "\"><data key=\"strength\">" << e.strength << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
    return out.str();
}

void finish_import(CoauthorshipGraph& g) {
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (std::size_t i = 1; i < g.edges.size(); ++i)
        if (g.edges[i].a == g.edges[i - 1].a && g.edges[i].b == g.edges[i - 1].b)
            throw DataError("duplicate edge " + g.edges[i].a + "," + g.edges[i].b);
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        if (g.nodes[i].id == g.nodes[i - 1].id) throw DataError("duplicate node " + g.nodes[i].id);
}

Edge make_edge(std::string a, std::string b, std::int64_t strength) {
    if (a == b) throw DataError("self edge on " + a);
    if (strength < 1) throw DataError("edge " + a + "," + b + " has non-positive strength");
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b), strength};
}

}  // namespace

ExportFormat parse_format(std::string_view name) {
    std::string known;
    for (const auto& [f, n] : kFormats) {
        if (n == name) return f;
        if (!known.empty()) known += ", ";
        known += n;
    }
    throw UsageError("unknown graph format '" + std::string(name) + "' (supported: " + known + ")");
}

std::string_view format_name(ExportFormat format) {
    for (const auto& [f, n] : kFormats)
        if (f == format) return n;
    return "unknown";
}

std::string export_graph(const CoauthorshipGraph& graph, ExportFormat format) {
    switch (format) {
        case ExportFormat::edge_csv: return edge_csv(graph);
        case ExportFormat::vosviewer_json: return vosviewer(graph);
        case ExportFormat::graphml: return graphml(graph);
    }
    throw UsageError("unsupported graph format");
}

CoauthorshipGraph import_edge_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header || header->fields != std::vector<std::string>{"source", "target", "strength"})
        throw DataError("edge list must start with the header source,target,strength");
    CoauthorshipGraph g;
    std::set<std::string> ids;
    while (auto row = reader.next()) {
        if (reader.last_malformed() || row->fields.size() != 3)
            throw DataError("edge list line " + std::to_string(row->line_number) +
                            ": expected 3 fields");
        std::int64_t s = 0;
        const auto& f = row->fields[2];
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), s);
        if (ec != std::errc() || p != f.data() + f.size())
            throw DataError("edge list line " + std::to_string(row->line_number) +
                            ": bad strength '" + f + "'");
        ids.insert(row->fields[0]);
        ids.insert(row->fields[1]);
        g.edges.push_back(make_edge(row->fields[0], row->fields[1], s));
    }
    for (const auto& id : ids) g.nodes.push_back(Node{id, 0, 0, 0, false});
    finish_import(g);
    g.refresh_strengths();
    return g;
}

CoauthorshipGraph import_vosviewer_json(std::string_view text) {
    CoauthorshipGraph g;
    try {
        auto root = nlohmann::json::parse(text);
        const auto& net = root.at("network");
        std::map<std::int64_t, std::string> labels;
        for (const auto& item : net.at("items")) {
            Node n;
            n.id = item.at("label").get<std::string>();
            n.cluster = item.value("cluster", 0);
            const auto& w = item.at("weights");
            n.article_count = w.value("Documents", std::int64_t{0});
            n.total_link_strength = w.value("Total link strength", std::int64_t{0});
            if (item.contains("scores")) n.seed = item["scores"].value("Seed", 0) != 0;
            auto id = item.at("id").get<std::int64_t>();
            if (!labels.emplace(id, n.id).second)
                throw DataError("duplicate item id " + std::to_string(id));
            g.nodes.push_back(std::move(n));
        }
        for (const auto& link : net.at("links")) {
            auto a = labels.find(link.at("source_id").get<std::int64_t>());
            auto b = labels.find(link.at("target_id").get<std::int64_t>());
            if (a == labels.end() || b == labels.end()) throw DataError("link to unknown item");
            g.edges.push_back(make_edge(a->second, b->second, link.at("strength").get<std::int64_t>()));
        }
        if (root.contains("parameters")) {
            const auto& p = root["parameters"];
            g.params.year = p.value("year", 0);
            g.params.seed_group = p.value("seed_group", std::vector<std::string>{});
            g.params.min_articles = p.value("min_articles", std::int64_t{0});
            g.params.qualification =
                parse_qualification(p.value("qualification", std::string("total_output")));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed network JSON: ") + e.what());
    }
    finish_import(g);
    return g;
}

std::string GraphStats::to_json() const {
    ojson j;
    j["nodes"] = nodes;
    j["external_nodes"] = external_nodes;
    j["links"] = links;
    j["total_link_strength"] = total_link_strength;
    j["node_strength_sum"] = node_strength_sum;
    j["clusters"] = clusters;
    return j.dump();
}

}  // namespace bibscreen::network
