#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "uidiff/graph.hpp"
#include "uidiff/similarity.hpp"

namespace uidiff::matching {

using graph::NodeIndex;
using graph::UiGraph;
using similarity::SimilarityParams;

struct PairScore {
    ControlId source = 0;
    ControlId target = 0;
    double score = 0.0;

    friend bool operator==(const PairScore&, const PairScore&) = default;
};

struct MatchResult {
    std::vector<PairScore> matches;  ///< sorted by source id
    std::vector<ControlId> unmatched_source;
    std::vector<ControlId> unmatched_target;

    friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Nodes already expanded during one top-level score evaluation, per side.
struct VisitedRecord {
    std::vector<bool> source;
    std::vector<bool> target;

    VisitedRecord(std::size_t source_nodes, std::size_t target_nodes)
        : source(source_nodes, false), target(target_nodes, false) {}
};

/// Read-only scoring state for one image pair: both graphs, every node's hash, and
/// the leaf similarity of every node pair. Safe to share between threads.
class PairScorer {
public:
    PairScorer(const UiGraph& source, const Raster& source_image, const UiGraph& target,
               const Raster& target_image, SimilarityParams params);

    const UiGraph& source() const noexcept { return *source_; }
    const UiGraph& target() const noexcept { return *target_; }
    const SimilarityParams& params() const noexcept { return params_; }

    double base(NodeIndex v, NodeIndex w) const noexcept { return base_[v * target_->size() + w]; }
    /// Root gate: the two controls may depict the same control at all
    /// (same category, leaf similarity passes the hash and text gates, sizes agree).
    bool compatible(NodeIndex v, NodeIndex w) const noexcept;

    /// Whether neighbour p of v and neighbour q of w sit in the same place relative to
    /// their roots: the centre offsets may differ by at most
    /// layout_tolerance * (longer offset) + 4 px. Always true at layout_tolerance 1.
    bool layout_agrees(NodeIndex v, NodeIndex w, NodeIndex p, NodeIndex q) const noexcept;

    /// Recursive neighbourhood similarity, in [0, 1].
    ///
    /// At depth 0, or if either node has been expanded before in this evaluation, the
    /// leaf similarity is returned. Otherwise both are marked and the neighbour lists
    /// are compared: a pair (p, q) of NG_v x NG_w scores 0 across categories or when
    /// the layout disagrees, and recurses with depth - 1 otherwise (row-major order).
    /// The result is the symmetric mean of best matches,
    /// 0.5 * (mean_p max_q s(p, q) + mean_q max_p s(p, q)). Nodes with an empty
    /// neighbour list fall back to the leaf similarity.
    double neighbor_similarity(NodeIndex v, NodeIndex w, VisitedRecord& visited, int depth) const;

    /// Score of a top-level pair: 0.5 * (leaf + neighbourhood similarity at
    /// context_depth), with a fresh visited record.
    double score(NodeIndex v, NodeIndex w) const;

private:
    const UiGraph* source_;
    const UiGraph* target_;
    SimilarityParams params_;
    std::vector<double> base_;
};

bool size_compatible(const BBox& a, const BBox& b, double tolerance) noexcept;

/// All candidate pairs (compatible and score > ns), unordered.
std::vector<PairScore> candidate_pairs(const PairScorer& scorer, int jobs = 1);

/// One-to-one assignment: candidates by descending score, ties by ascending source
/// then target id, each accepted iff both endpoints are still free.
MatchResult greedy_assign(std::vector<PairScore> candidates, const UiGraph& source,
                          const UiGraph& target);

MatchResult assign_matches(const PairScorer& scorer, int jobs = 1);

MatchResult assign_matches(const UiGraph& source, const Raster& source_image,
                           const UiGraph& target, const Raster& target_image,
                           const SimilarityParams& params, int jobs = 1);

nlohmann::json to_json(const MatchResult& result);
MatchResult match_result_from_json(const nlohmann::json& j);

}  // namespace uidiff::matching
