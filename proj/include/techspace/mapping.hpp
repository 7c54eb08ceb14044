#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "techspace/measures.hpp"

namespace techspace {

enum class EdgeTier { Tree, Extra };

struct WeightedEdge {
  std::size_t u = 0;  // u < v, indices into the node list
  std::size_t v = 0;
  double weight = 0.0;
  EdgeTier tier = EdgeTier::Tree;

  bool operator==(const WeightedEdge&) const = default;
};

struct BackboneNetwork {
  std::vector<std::string> nodes;
  std::vector<WeightedEdge> tree_edges;
  std::vector<WeightedEdge> extra_edges;
  std::size_t requested_extra = 0;
  std::size_t shortfall = 0;  // requested_extra - extra_edges.size()
};

/// Maximum-weight spanning forest over the positive export weights of the
/// matrix (Kruskal). Ties are broken by (u, v), i.e. lexicographically by
/// class code. Throws InputError for an empty vocabulary.
std::vector<WeightedEdge> maximum_spanning_forest(const ProximityMatrix& matrix);

/// Spanning forest plus the `extra_edges` strongest positive non-tree edges.
BackboneNetwork extract_backbone(const ProximityMatrix& matrix, std::size_t extra_edges);

enum class GraphFormat { GraphMl, Dot, EdgeCsv, Json };

GraphFormat parse_graph_format(std::string_view text);
std::string_view to_string(GraphFormat format);
std::string_view file_extension(GraphFormat format);

/// Graph-level key/value attributes written into every format (digests etc.).
/// Edge CSV has no place for them; put them in a sidecar instead.
using GraphAttributes = std::map<std::string, std::string>;

/// Deterministic text rendering. Nodes carry their class code; edges carry
/// `weight` and `tier` (tree|extra).
std::string export_graph(const BackboneNetwork& network, GraphFormat format,
                         const GraphAttributes& attributes = {});

/// Parses the edge CSV format back into (class_i, class_j, weight, tier) rows.
struct EdgeRow {
  std::string class_i;
  std::string class_j;
  double weight = 0.0;
  EdgeTier tier = EdgeTier::Tree;

  auto operator<=>(const EdgeRow&) const = default;
};
std::vector<EdgeRow> read_edge_csv(std::string_view text);

}  // namespace techspace
