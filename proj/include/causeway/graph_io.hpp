#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "causeway/error.hpp"
#include "causeway/graph.hpp"

namespace causeway {

enum class GraphFormat { Dot, GraphML, EdgeListJson };

inline GraphFormat graph_format_from_name(const std::string& name) {
    if (name == "dot") return GraphFormat::Dot;
    if (name == "graphml") return GraphFormat::GraphML;
    if (name == "json") return GraphFormat::EdgeListJson;
    throw UsageError("unknown graph format: " + name + " (expected dot, graphml or json)");
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Undirected edges as `"A" -- "B";`, directed as `"A" -> "B";`. The header
// is `digraph` as soon as any directed edge is present.
inline std::string export_dot(const PartialDag& g) {
    const bool directed = g.directed_edge_count() > 0;
    std::string out = directed ? "digraph g {\n" : "graph g {\n";
    for (int v = 0; v < g.node_count(); ++v)
        out += "  " + detail::dot_quote(g.label(v)) + ";\n";
    for (const Edge& e : g.edges()) {
        out += "  " + detail::dot_quote(g.label(e.a)) +
               (e.directed ? " -> " : " -- ") + detail::dot_quote(g.label(e.b)) + ";\n";
    }
    out += "}\n";
    return out;
}

inline std::string export_graphml(const PartialDag& g) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (int v = 0; v < g.node_count(); ++v)
        out += "    <node id=\"n" + std::to_string(v) + "\"><data key=\"label\">" +
               detail::xml_escape(g.label(v)) + "</data></node>\n";
    for (const Edge& e : g.edges())
        out += "    <edge source=\"n" + std::to_string(e.a) + "\" target=\"n" +
               std::to_string(e.b) + "\" directed=\"" + (e.directed ? "true" : "false") +
               "\"/>\n";
    out += "  </graph>\n</graphml>\n";
    return out;
}

inline std::string export_graph_json(const PartialDag& g) {
    nlohmann::ordered_json j;
    j["nodes"] = g.labels();
    j["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges()) {
        nlohmann::ordered_json edge;
        edge["source"] = g.label(e.a);
        edge["target"] = g.label(e.b);
        edge["directed"] = e.directed;
        j["edges"].push_back(std::move(edge));
    }
    return j.dump(2) + "\n";
}

inline std::string export_graph(const PartialDag& g, GraphFormat format) {
    switch (format) {
        case GraphFormat::Dot: return export_dot(g);
        case GraphFormat::GraphML: return export_graphml(g);
        case GraphFormat::EdgeListJson: return export_graph_json(g);
    }
    throw UsageError("unknown graph format");
}

inline PartialDag graph_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("graph json: ") + e.what());
    }
    if (!j.contains("nodes") || !j["nodes"].is_array())
        throw ParseError("graph json: missing 'nodes' array");
    std::vector<std::string> labels = j["nodes"].get<std::vector<std::string>>();
    PartialDag g(static_cast<int>(labels.size()), labels);
    auto index_of = [&labels](const std::string& name) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        throw ParseError("graph json: unknown node '" + name + "'");
    };
    if (!j.contains("edges")) return g;
    for (const auto& e : j["edges"]) {
        if (!e.contains("source") || !e.contains("target"))
            throw ParseError("graph json: edge without source/target");
        const int a = index_of(e["source"].get<std::string>());
        const int b = index_of(e["target"].get<std::string>());
        const bool directed = e.value("directed", false);
        if (directed)
            g.add_directed(a, b);
        else
            g.add_undirected(std::min(a, b), std::max(a, b));
    }
    return g;
}

}  // namespace causeway
