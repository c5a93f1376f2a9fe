#include "uidiff/graph.hpp"

#include <algorithm>
#include <numeric>

namespace uidiff::graph {

UiGraph::UiGraph(std::vector<Control> nodes, std::vector<std::vector<NodeIndex>> neighbor_lists)
    : nodes_(std::move(nodes)), neighbor_lists_(std::move(neighbor_lists)) {
    if (nodes_.size() != neighbor_lists_.size()) {
        throw Error("graph needs one neighbour list per node");
    }
    for (NodeIndex n = 0; n < neighbor_lists_.size(); ++n) {
        for (const NodeIndex m : neighbor_lists_[n]) {
            if (m >= nodes_.size() || m == n) throw Error("invalid neighbour index");
            edges_.emplace_back(std::min(n, m), std::max(n, m));
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool UiGraph::has_edge(NodeIndex a, NodeIndex b) const noexcept {
    const std::pair<NodeIndex, NodeIndex> key{std::min(a, b), std::max(a, b)};
    return std::binary_search(edges_.begin(), edges_.end(), key);
}

std::vector<NodeIndex> nearest_neighbors(NodeIndex target, const DetectionSet& dets, int k) {
    const auto& controls = dets.controls;
    if (k < 1) throw Error("K must be at least 1");
    if (target >= controls.size()) throw Error("target control not in detection set");

    struct Candidate {
        double distance;
        ControlId id;
        NodeIndex index;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(controls.size());
    const auto& origin = controls[target].bbox;
    for (NodeIndex j = 0; j < controls.size(); ++j) {
        if (j == target) continue;
        candidates.push_back({euclidean_distance(origin, controls[j].bbox), controls[j].id, j});
    }
    const auto keep = std::min(candidates.size(), static_cast<std::size_t>(k));
    const auto closer = [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.id < b.id;
    };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), closer);

    std::vector<NodeIndex> out(keep);
    for (std::size_t i = 0; i < keep; ++i) out[i] = candidates[i].index;
    return out;
}

UiGraph build_graph(const DetectionSet& dets, const GraphParams& params) {
    if (params.k < 1) throw Error("K must be at least 1");
    std::vector<std::vector<NodeIndex>> lists(dets.controls.size());
    for (NodeIndex n = 0; n < dets.controls.size(); ++n) {
        lists[n] = nearest_neighbors(n, dets, params.k);
    }
    return UiGraph(dets.controls, std::move(lists));
}

nlohmann::json to_json(const UiGraph& graph) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeIndex n = 0; n < graph.size(); ++n) {
        const auto& c = graph.node(n);
        nlohmann::json neighbor_ids = nlohmann::json::array();
        for (const NodeIndex m : graph.neighbors(n)) neighbor_ids.push_back(graph.node(m).id);
        nodes.push_back({{"id", c.id},
                         {"category", std::string(to_string(c.category))},
                         {"bbox", {c.bbox.x1, c.bbox.y1, c.bbox.x2, c.bbox.y2}},
                         {"neighbors", std::move(neighbor_ids)}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges()) edges.push_back({graph.node(a).id, graph.node(b).id});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace uidiff::graph
