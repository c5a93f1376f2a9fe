#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidiff/graph.hpp"
#include "uidiff/matching.hpp"
#include "uidiff/model.hpp"
#include "uidiff/similarity.hpp"

namespace uidiff::changes {

enum class Method { Gvcd, Pwc, Rcd };

std::string_view to_string(Method method) noexcept;
/// Accepts "gvcd", "pwc", "rcd"; throws Error otherwise.
Method parse_method(std::string_view name);

struct EngineParams {
    graph::GraphParams graph;
    similarity::SimilarityParams similarity;

    void validate() const;
    friend bool operator==(const EngineParams& a, const EngineParams& b) {
        return a.graph.k == b.graph.k && a.similarity.h == b.similarity.h &&
               a.similarity.ts == b.similarity.ts && a.similarity.ns == b.similarity.ns &&
               a.similarity.size_tolerance == b.similarity.size_tolerance &&
               a.similarity.layout_tolerance == b.similarity.layout_tolerance &&
               a.similarity.context_depth == b.similarity.context_depth;
    }
};

/// A changed area. Control-based detectors fill in the control it came from.
struct ChangeRegion {
    BBox bbox;
    std::optional<ControlId> control_id;
    std::optional<ControlCategory> category;

    friend bool operator==(const ChangeRegion&, const ChangeRegion&) = default;
};

/// Binary matrix with one cell per image pixel.
class Heatmap {
public:
    Heatmap() = default;
    Heatmap(int width, int height) : width_(width), height_(height),
        cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::uint8_t at(int x, int y) const noexcept { return cells_[index(x, y)]; }
    /// Sets every cell inside the box (clipped) to one.
    void mark(const BBox& box);
    std::size_t count_nonzero() const noexcept;
    const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

    friend bool operator==(const Heatmap&, const Heatmap&) = default;

private:
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> cells_;
};

Heatmap build_heatmap(int width, int height, const std::vector<ChangeRegion>& regions);

/// Output of any change detector. `match_result` is present for the graph method
/// only; `dimension_mismatch` is set when pixel comparison was impossible.
struct ChangeReport {
    Method method = Method::Gvcd;
    int width_original = 0;
    int height_original = 0;
    int width_changed = 0;
    int height_changed = 0;
    std::vector<ChangeRegion> changes_in_original;
    std::vector<ChangeRegion> changes_in_changed;
    Heatmap heatmap_original;
    Heatmap heatmap_changed;
    std::optional<matching::MatchResult> match_result;
    EngineParams params;
    bool dimension_mismatch = false;

    std::vector<BBox> boxes_original() const;
    std::vector<BBox> boxes_changed() const;
    /// Rebuilds both heatmaps from the change lists.
    void refresh_heatmaps();

    friend bool operator==(const ChangeReport&, const ChangeReport&) = default;
};

/// Graph pipeline: KNN graphs for both images, matching, and every unmatched control
/// reported as a change in its own image.
ChangeReport detect_changes(const Raster& image_a, const DetectionSet& dets_a,
                            const Raster& image_b, const DetectionSet& dets_b,
                            const EngineParams& params, int jobs = 1);

nlohmann::json to_json(const ChangeReport& report);
/// Inverse of to_json; heatmaps are rebuilt from the change lists.
ChangeReport report_from_json(const nlohmann::json& j);
ChangeReport load_report_file(const std::filesystem::path& path);

/// Writes heatmap_a.png, heatmap_b.png, overlay_a.png, overlay_b.png and report.json.
void render_outputs(const ChangeReport& report, const Raster& image_a, const Raster& image_b,
                    const std::filesystem::path& out_dir);

/// Copy of `image` with a red border of `thickness` px drawn inside every box.
Raster draw_overlay(const Raster& image, const std::vector<ChangeRegion>& regions,
                    int thickness = 3);

void write_heatmap_png(const std::filesystem::path& path, const Heatmap& heatmap);

}  // namespace uidiff::changes
