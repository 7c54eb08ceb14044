#include "techspace/mapping.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "json.hpp"

#include "techspace/errors.hpp"
#include "techspace/io.hpp"

namespace techspace {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

// Positive edges, strongest first, ties by (u, v).
std::vector<WeightedEdge> ranked_edges(const ProximityMatrix& matrix) {
  std::vector<WeightedEdge> edges;
  for (std::size_t u = 0; u < matrix.size(); ++u) {
    for (std::size_t v = u + 1; v < matrix.size(); ++v) {
      const double w = export_weight(matrix, u, v);
      if (w > 0.0) edges.push_back({u, v, w, EdgeTier::Extra});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  return edges;
}

std::string_view tier_name(EdgeTier tier) { return tier == EdgeTier::Tree ? "tree" : "extra"; }

std::string xml_escape(std::string_view s) {
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

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::vector<const WeightedEdge*> all_edges(const BackboneNetwork& network) {
  std::vector<const WeightedEdge*> edges;
  for (const auto& e : network.tree_edges) edges.push_back(&e);
  for (const auto& e : network.extra_edges) edges.push_back(&e);
  return edges;
}

std::string to_graphml(const BackboneNetwork& net, const GraphAttributes& attrs) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  for (const auto& [key, value] : attrs) {
    out += "  <key id=\"" + xml_escape(key) + "\" for=\"graph\" attr.name=\"" + xml_escape(key) +
           "\" attr.type=\"string\"/>\n";
  }
  out += "  <key id=\"code\" for=\"node\" attr.name=\"code\" attr.type=\"string\"/>\n";
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
  out += "  <key id=\"tier\" for=\"edge\" attr.name=\"tier\" attr.type=\"string\"/>\n";
  out += "  <graph id=\"technology_space\" edgedefault=\"undirected\">\n";
  for (const auto& [key, value] : attrs) {
    out += "    <data key=\"" + xml_escape(key) + "\">" + xml_escape(value) + "</data>\n";
  }
  for (const auto& node : net.nodes) {
    const auto id = xml_escape(node);
    out += "    <node id=\"" + id + "\"><data key=\"code\">" + id + "</data></node>\n";
  }
  for (const auto* e : all_edges(net)) {
    out += "    <edge source=\"" + xml_escape(net.nodes[e->u]) + "\" target=\"" +
           xml_escape(net.nodes[e->v]) + "\"><data key=\"weight\">" + format_double(e->weight) +
           "</data><data key=\"tier\">" + std::string(tier_name(e->tier)) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string to_dot(const BackboneNetwork& net, const GraphAttributes& attrs) {
  std::string out = "graph technology_space {\n";
  for (const auto& [key, value] : attrs) {
    out += "  " + dot_quote(key) + "=" + dot_quote(value) + ";\n";
  }
  for (const auto& node : net.nodes) {
    out += "  " + dot_quote(node) + " [code=" + dot_quote(node) + "];\n";
  }
  for (const auto* e : all_edges(net)) {
    out += "  " + dot_quote(net.nodes[e->u]) + " -- " + dot_quote(net.nodes[e->v]) +
           " [weight=" + format_double(e->weight) + ", tier=" + std::string(tier_name(e->tier)) +
           "];\n";
  }
  out += "}\n";
  return out;
}

std::string to_edge_csv(const BackboneNetwork& net) {
  std::string out = "class_i,class_j,weight,tier\n";
  for (const auto* e : all_edges(net)) {
    out += net.nodes[e->u] + "," + net.nodes[e->v] + "," + format_double(e->weight) + "," +
           std::string(tier_name(e->tier)) + "\n";
  }
  return out;
}

std::string to_json(const BackboneNetwork& net, const GraphAttributes& attrs) {
  nlohmann::ordered_json j;
  j["attributes"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : attrs) j["attributes"][key] = value;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : net.nodes) j["nodes"].push_back({{"id", node}, {"code", node}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto* e : all_edges(net)) {
    j["edges"].push_back({{"source", net.nodes[e->u]},
                          {"target", net.nodes[e->v]},
                          {"weight", e->weight},
                          {"tier", tier_name(e->tier)}});
  }
  j["requested_extra"] = net.requested_extra;
  j["shortfall"] = net.shortfall;
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<WeightedEdge> maximum_spanning_forest(const ProximityMatrix& matrix) {
  if (matrix.size() == 0) throw InputError("maximum_spanning_forest: empty vocabulary");
  DisjointSets sets(matrix.size());
  std::vector<WeightedEdge> forest;
  for (WeightedEdge e : ranked_edges(matrix)) {
    if (sets.unite(e.u, e.v)) {
      e.tier = EdgeTier::Tree;
      forest.push_back(e);
      if (forest.size() + 1 == matrix.size()) break;
    }
  }
  return forest;
}

BackboneNetwork extract_backbone(const ProximityMatrix& matrix, std::size_t extra_edges) {
  BackboneNetwork net;
  net.nodes.assign(matrix.classes().begin(), matrix.classes().end());
  net.tree_edges = maximum_spanning_forest(matrix);
  net.requested_extra = extra_edges;

  std::vector<char> in_tree(matrix.size() * matrix.size(), 0);
  for (const auto& e : net.tree_edges) in_tree[e.u * matrix.size() + e.v] = 1;
  if (extra_edges > 0) {
    for (const auto& e : ranked_edges(matrix)) {
      if (net.extra_edges.size() == extra_edges) break;
      if (!in_tree[e.u * matrix.size() + e.v]) net.extra_edges.push_back(e);
    }
  }
  net.shortfall = extra_edges - net.extra_edges.size();
  return net;
}

GraphFormat parse_graph_format(std::string_view text) {
  for (GraphFormat f : {GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::EdgeCsv,
                        GraphFormat::Json}) {
    if (std::equal(text.begin(), text.end(), to_string(f).begin(), to_string(f).end(),
                   [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; })) {
      return f;
    }
  }
  throw InputError("unknown graph format '" + std::string(text) +
                   "'; valid names: graphml, dot, edge-csv, json");
}

std::string_view to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl: return "graphml";
    case GraphFormat::Dot: return "dot";
    case GraphFormat::EdgeCsv: return "edge-csv";
    case GraphFormat::Json: return "json";
  }
  return "?";
}

std::string_view file_extension(GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphMl: return ".graphml";
    case GraphFormat::Dot: return ".dot";
    case GraphFormat::EdgeCsv: return ".edges.csv";
    case GraphFormat::Json: return ".json";
  }
  return "";
}

std::string export_graph(const BackboneNetwork& network, GraphFormat format,
                         const GraphAttributes& attributes) {
  switch (format) {
    case GraphFormat::GraphMl: return to_graphml(network, attributes);
    case GraphFormat::Dot: return to_dot(network, attributes);
    case GraphFormat::EdgeCsv: return to_edge_csv(network);
    case GraphFormat::Json: return to_json(network, attributes);
  }
  throw InputError("unknown graph format");
}

std::vector<EdgeRow> read_edge_csv(std::string_view text) {
  std::vector<EdgeRow> rows;
  bool header = true;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (header) {
      if (line != "class_i,class_j,weight,tier") {
        throw InputError("edge csv line 1: unexpected header");
      }
      header = false;
      return;
    }
    if (line.empty()) return;
    const auto f = split(line, ',');
    if (f.size() != 4 || (f[3] != "tree" && f[3] != "extra")) {
      throw InputError("edge csv line " + std::to_string(line_no) + ": malformed row");
    }
    rows.push_back({std::string(f[0]), std::string(f[1]), parse_double(f[2]),
                    f[3] == "tree" ? EdgeTier::Tree : EdgeTier::Extra});
  });
  return rows;
}

}  // namespace techspace
