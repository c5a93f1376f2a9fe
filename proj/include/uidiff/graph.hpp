#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uidiff/model.hpp"

namespace uidiff::graph {

struct GraphParams {
    int k = 8;  ///< number of nearest neighbours per node, >= 1
};

/// Index of a node, equal to the control's position in its DetectionSet.
using NodeIndex = std::size_t;

/// Undirected K-nearest-neighbour graph over the controls of one image.
///
/// Node n corresponds to controls[n]. `neighbors(n)` holds the min(K, N-1) nodes
/// closest to n under the 4-coordinate Euclidean distance, ascending, ties broken
/// by ascending control id. The edge set is the symmetric closure of those lists.
class UiGraph {
public:
    UiGraph() = default;
    UiGraph(std::vector<Control> nodes, std::vector<std::vector<NodeIndex>> neighbor_lists);

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    const Control& node(NodeIndex n) const { return nodes_.at(n); }
    const std::vector<Control>& nodes() const noexcept { return nodes_; }
    const std::vector<NodeIndex>& neighbors(NodeIndex n) const { return neighbor_lists_.at(n); }

    /// Deduplicated undirected edges, each stored once as (low, high), sorted.
    const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const noexcept { return edges_; }
    bool has_edge(NodeIndex a, NodeIndex b) const noexcept;

    friend bool operator==(const UiGraph&, const UiGraph&) = default;

private:
    std::vector<Control> nodes_;
    std::vector<std::vector<NodeIndex>> neighbor_lists_;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
};

/// The min(k, N-1) nearest other controls of `dets.controls[target]`, as indices.
std::vector<NodeIndex> nearest_neighbors(NodeIndex target, const DetectionSet& dets, int k);

UiGraph build_graph(const DetectionSet& dets, const GraphParams& params);

/// Debug dump: nodes with boxes and neighbour lists, plus the edge list.
nlohmann::json to_json(const UiGraph& graph);

}  // namespace uidiff::graph
