#include "uidiff/matching.hpp"

#include <algorithm>
#include <cmath>

#include "uidiff/parallel.hpp"

namespace uidiff::matching {

bool size_compatible(const BBox& a, const BBox& b, double tolerance) noexcept {
    const auto fits = [tolerance](int x, int y) {
        return std::abs(x - y) <= tolerance * std::max(x, y);
    };
    return fits(a.width(), b.width()) && fits(a.height(), b.height());
}

PairScorer::PairScorer(const UiGraph& source, const Raster& source_image, const UiGraph& target,
                       const Raster& target_image, SimilarityParams params)
    : source_(&source), target_(&target), params_(params) {
    params_.validate();
    std::vector<similarity::PerceptualHash> hs(source.size());
    std::vector<similarity::PerceptualHash> ht(target.size());
    for (NodeIndex v = 0; v < source.size(); ++v) {
        hs[v] = similarity::average_hash(source_image, source.node(v).bbox);
    }
    for (NodeIndex w = 0; w < target.size(); ++w) {
        ht[w] = similarity::average_hash(target_image, target.node(w).bbox);
    }
    base_.assign(source.size() * target.size(), 0.0);
    for (NodeIndex v = 0; v < source.size(); ++v) {
        for (NodeIndex w = 0; w < target.size(); ++w) {
            base_[v * target.size() + w] = similarity::base_similarity(
                source.node(v), hs[v], target.node(w), ht[w], params_);
        }
    }
}

bool PairScorer::compatible(NodeIndex v, NodeIndex w) const noexcept {
    const auto& a = source_->node(v);
    const auto& b = target_->node(w);
    return a.category == b.category && base(v, w) > 0.0 &&
           size_compatible(a.bbox, b.bbox, params_.size_tolerance);
}

namespace {

constexpr double kLayoutSlack = 4.0;

double center_x(const BBox& b) { return 0.5 * (b.x1 + b.x2); }
double center_y(const BBox& b) { return 0.5 * (b.y1 + b.y2); }

}  // namespace

bool PairScorer::layout_agrees(NodeIndex v, NodeIndex w, NodeIndex p, NodeIndex q) const noexcept {
    if (params_.layout_tolerance >= 1.0) return true;
    const auto& bv = source_->node(v).bbox;
    const auto& bp = source_->node(p).bbox;
    const auto& bw = target_->node(w).bbox;
    const auto& bq = target_->node(q).bbox;
    const double sx = center_x(bp) - center_x(bv);
    const double sy = center_y(bp) - center_y(bv);
    const double tx = center_x(bq) - center_x(bw);
    const double ty = center_y(bq) - center_y(bw);
    const double reach = std::max(std::hypot(sx, sy), std::hypot(tx, ty));
    return std::hypot(sx - tx, sy - ty) <= params_.layout_tolerance * reach + kLayoutSlack;
}

double PairScorer::neighbor_similarity(NodeIndex v, NodeIndex w, VisitedRecord& visited,
                                       int depth) const {
    if (depth <= 0 || visited.source[v] || visited.target[w]) return base(v, w);
    visited.source[v] = true;
    visited.target[w] = true;

    const auto& ng_v = source_->neighbors(v);
    const auto& ng_w = target_->neighbors(w);
    if (ng_v.empty() || ng_w.empty()) return base(v, w);

    std::vector<double> best_row(ng_v.size(), 0.0);
    std::vector<double> best_col(ng_w.size(), 0.0);
    for (std::size_t p = 0; p < ng_v.size(); ++p) {
        for (std::size_t q = 0; q < ng_w.size(); ++q) {
            const NodeIndex a = ng_v[p];
            const NodeIndex b = ng_w[q];
            if (source_->node(a).category != target_->node(b).category) continue;
            if (!layout_agrees(v, w, a, b)) continue;
            const double s = neighbor_similarity(a, b, visited, depth - 1);
            best_row[p] = std::max(best_row[p], s);
            best_col[q] = std::max(best_col[q], s);
        }
    }
    double row_sum = 0.0;
    for (const double s : best_row) row_sum += s;
    double col_sum = 0.0;
    for (const double s : best_col) col_sum += s;
    const double value = 0.5 * (row_sum / static_cast<double>(ng_v.size()) +
                                col_sum / static_cast<double>(ng_w.size()));
    return std::clamp(value, 0.0, 1.0);
}

double PairScorer::score(NodeIndex v, NodeIndex w) const {
    VisitedRecord visited(source_->size(), target_->size());
    const double context = neighbor_similarity(v, w, visited, params_.context_depth);
    return 0.5 * (base(v, w) + context);
}

std::vector<PairScore> candidate_pairs(const PairScorer& scorer, int jobs) {
    const auto& source = scorer.source();
    const auto& target = scorer.target();
    std::vector<std::vector<PairScore>> per_source(source.size());
    parallel_for(source.size(), jobs, [&](std::size_t v) {
        for (NodeIndex w = 0; w < target.size(); ++w) {
            if (!scorer.compatible(v, w)) continue;
            const double s = scorer.score(v, w);
            if (s > scorer.params().ns) {
                per_source[v].push_back({source.node(v).id, target.node(w).id, s});
            }
        }
    });
    std::vector<PairScore> out;
    for (auto& list : per_source) out.insert(out.end(), list.begin(), list.end());
    return out;
}

MatchResult greedy_assign(std::vector<PairScore> candidates, const UiGraph& source,
                          const UiGraph& target) {
    std::sort(candidates.begin(), candidates.end(), [](const PairScore& a, const PairScore& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.source != b.source) return a.source < b.source;
        return a.target < b.target;
    });

    std::vector<ControlId> taken_source;
    std::vector<ControlId> taken_target;
    MatchResult result;
    for (const auto& c : candidates) {
        if (std::find(taken_source.begin(), taken_source.end(), c.source) != taken_source.end())
            continue;
        if (std::find(taken_target.begin(), taken_target.end(), c.target) != taken_target.end())
            continue;
        taken_source.push_back(c.source);
        taken_target.push_back(c.target);
        result.matches.push_back(c);
    }
    std::sort(result.matches.begin(), result.matches.end(),
              [](const PairScore& a, const PairScore& b) { return a.source < b.source; });

    std::sort(taken_source.begin(), taken_source.end());
    std::sort(taken_target.begin(), taken_target.end());
    for (const auto& c : source.nodes()) {
        if (!std::binary_search(taken_source.begin(), taken_source.end(), c.id))
            result.unmatched_source.push_back(c.id);
    }
    for (const auto& c : target.nodes()) {
        if (!std::binary_search(taken_target.begin(), taken_target.end(), c.id))
            result.unmatched_target.push_back(c.id);
    }
    return result;
}

MatchResult assign_matches(const PairScorer& scorer, int jobs) {
    return greedy_assign(candidate_pairs(scorer, jobs), scorer.source(), scorer.target());
}

MatchResult assign_matches(const UiGraph& source, const Raster& source_image,
                           const UiGraph& target, const Raster& target_image,
                           const SimilarityParams& params, int jobs) {
    const PairScorer scorer(source, source_image, target, target_image, params);
    return assign_matches(scorer, jobs);
}

nlohmann::json to_json(const MatchResult& result) {
    nlohmann::json matches = nlohmann::json::array();
    for (const auto& m : result.matches) {
        matches.push_back({{"source", m.source}, {"target", m.target}, {"score", m.score}});
    }
    return {{"matches", std::move(matches)},
            {"unmatched_source", result.unmatched_source},
            {"unmatched_target", result.unmatched_target}};
}

MatchResult match_result_from_json(const nlohmann::json& j) {
    MatchResult result;
    try {
        for (const auto& m : j.at("matches")) {
            result.matches.push_back({m.at("source").get<ControlId>(),
                                      m.at("target").get<ControlId>(),
                                      m.at("score").get<double>()});
        }
        result.unmatched_source = j.at("unmatched_source").get<std::vector<ControlId>>();
        result.unmatched_target = j.at("unmatched_target").get<std::vector<ControlId>>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed match result: ") + e.what());
    }
    return result;
}

}  // namespace uidiff::matching
