#include "uidiff/changes.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "uidiff/image_io.hpp"

namespace uidiff::changes {

using nlohmann::json;

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Gvcd: return "gvcd";
        case Method::Pwc: return "pwc";
        case Method::Rcd: return "rcd";
    }
    return "gvcd";
}

Method parse_method(std::string_view name) {
    if (name == "gvcd") return Method::Gvcd;
    if (name == "pwc") return Method::Pwc;
    if (name == "rcd") return Method::Rcd;
    throw Error("unknown method '" + std::string(name) + "' (expected gvcd, pwc or rcd)");
}

void EngineParams::validate() const {
    if (graph.k < 1) throw Error("k must be >= 1, got " + std::to_string(graph.k));
    similarity.validate();
}

void Heatmap::mark(const BBox& box) {
    const auto clip = intersection(box, BBox{0, 0, width_, height_});
    if (!clip) return;
    for (int y = clip->y1; y < clip->y2; ++y) {
        std::fill_n(cells_.begin() + static_cast<std::ptrdiff_t>(index(clip->x1, y)),
                    clip->width(), std::uint8_t{1});
    }
}

std::size_t Heatmap::count_nonzero() const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Heatmap build_heatmap(int width, int height, const std::vector<ChangeRegion>& regions) {
    Heatmap map(width, height);
    for (const auto& r : regions) map.mark(r.bbox);
    return map;
}

namespace {

std::vector<BBox> boxes_of(const std::vector<ChangeRegion>& regions) {
    std::vector<BBox> out;
    out.reserve(regions.size());
    for (const auto& r : regions) out.push_back(r.bbox);
    return out;
}

std::vector<ChangeRegion> regions_for(const std::vector<ControlId>& ids, const DetectionSet& dets) {
    std::vector<ChangeRegion> out;
    for (const auto id : ids) {
        const auto& c = dets.controls[*dets.find(id)];
        out.push_back({c.bbox, c.id, c.category});
    }
    return out;
}

json regions_to_json(const std::vector<ChangeRegion>& regions) {
    json out = json::array();
    for (const auto& r : regions) {
        json item = {{"bbox", {r.bbox.x1, r.bbox.y1, r.bbox.x2, r.bbox.y2}}};
        if (r.control_id) item["control_id"] = *r.control_id;
        if (r.category) item["category"] = std::string(uidiff::to_string(*r.category));
        out.push_back(std::move(item));
    }
    return out;
}

std::vector<ChangeRegion> regions_from_json(const json& j) {
    std::vector<ChangeRegion> out;
    for (const auto& item : j) {
        const auto b = item.at("bbox").get<std::vector<int>>();
        if (b.size() != 4) throw SchemaError("change bbox must have 4 entries");
        ChangeRegion r{{b[0], b[1], b[2], b[3]}, std::nullopt, std::nullopt};
        if (item.contains("control_id")) r.control_id = item["control_id"].get<ControlId>();
        if (item.contains("category")) r.category = parse_category(item["category"].get<std::string>());
        out.push_back(r);
    }
    return out;
}

}  // namespace

std::vector<BBox> ChangeReport::boxes_original() const { return boxes_of(changes_in_original); }
std::vector<BBox> ChangeReport::boxes_changed() const { return boxes_of(changes_in_changed); }

void ChangeReport::refresh_heatmaps() {
    heatmap_original = build_heatmap(width_original, height_original, changes_in_original);
    heatmap_changed = build_heatmap(width_changed, height_changed, changes_in_changed);
}

ChangeReport detect_changes(const Raster& image_a, const DetectionSet& dets_a,
                            const Raster& image_b, const DetectionSet& dets_b,
                            const EngineParams& params, int jobs) {
    params.validate();
    dets_a.validate();
    dets_b.validate();
    if (dets_a.image_width != image_a.width() || dets_a.image_height != image_a.height() ||
        dets_b.image_width != image_b.width() || dets_b.image_height != image_b.height()) {
        throw BoundsError("annotation image size does not match the image");
    }
    const auto graph_a = graph::build_graph(dets_a, params.graph);
    const auto graph_b = graph::build_graph(dets_b, params.graph);
    auto result = matching::assign_matches(graph_a, image_a, graph_b, image_b, params.similarity, jobs);

    ChangeReport report;
    report.method = Method::Gvcd;
    report.width_original = image_a.width();
    report.height_original = image_a.height();
    report.width_changed = image_b.width();
    report.height_changed = image_b.height();
    report.changes_in_original = regions_for(result.unmatched_source, dets_a);
    report.changes_in_changed = regions_for(result.unmatched_target, dets_b);
    report.match_result = std::move(result);
    report.params = params;
    report.refresh_heatmaps();
    return report;
}

json to_json(const ChangeReport& report) {
    json j = {
        {"method", std::string(to_string(report.method))},
        {"image_a", {{"width", report.width_original}, {"height", report.height_original}}},
        {"image_b", {{"width", report.width_changed}, {"height", report.height_changed}}},
        {"dimension_mismatch", report.dimension_mismatch},
        {"params",
         {{"k", report.params.graph.k},
          {"h", report.params.similarity.h},
          {"ts", report.params.similarity.ts},
          {"ns", report.params.similarity.ns},
          {"size_tolerance", report.params.similarity.size_tolerance},
          {"layout_tolerance", report.params.similarity.layout_tolerance},
          {"context_depth", report.params.similarity.context_depth}}},
        {"changes_a", regions_to_json(report.changes_in_original)},
        {"changes_b", regions_to_json(report.changes_in_changed)},
    };
    if (report.match_result) j["match_result"] = matching::to_json(*report.match_result);
    return j;
}

ChangeReport report_from_json(const json& j) {
    ChangeReport report;
    try {
        report.method = parse_method(j.at("method").get<std::string>());
        report.width_original = j.at("image_a").at("width").get<int>();
        report.height_original = j.at("image_a").at("height").get<int>();
        report.width_changed = j.at("image_b").at("width").get<int>();
        report.height_changed = j.at("image_b").at("height").get<int>();
        report.dimension_mismatch = j.at("dimension_mismatch").get<bool>();
        const auto& p = j.at("params");
        report.params.graph.k = p.at("k").get<int>();
        report.params.similarity.h = p.at("h").get<int>();
        report.params.similarity.ts = p.at("ts").get<double>();
        report.params.similarity.ns = p.at("ns").get<double>();
        report.params.similarity.size_tolerance = p.at("size_tolerance").get<double>();
        report.params.similarity.layout_tolerance = p.at("layout_tolerance").get<double>();
        report.params.similarity.context_depth = p.at("context_depth").get<int>();
        report.changes_in_original = regions_from_json(j.at("changes_a"));
        report.changes_in_changed = regions_from_json(j.at("changes_b"));
        if (j.contains("match_result")) {
            report.match_result = matching::match_result_from_json(j["match_result"]);
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed change report: ") + e.what());
    }
    report.refresh_heatmaps();
    return report;
}

ChangeReport load_report_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return report_from_json(json::parse(buffer.str()));
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

Raster draw_overlay(const Raster& image, const std::vector<ChangeRegion>& regions,
                    int thickness) {
    static constexpr Rgb kRed{255, 0, 0};
    Raster out = image;
    for (const auto& r : regions) {
        const auto clip = intersection(r.bbox, image.bounds());
        if (!clip) continue;
        const auto& b = *clip;
        const int t = std::max(1, thickness);
        out.fill({b.x1, b.y1, b.x2, std::min(b.y2, b.y1 + t)}, kRed);
        out.fill({b.x1, std::max(b.y1, b.y2 - t), b.x2, b.y2}, kRed);
        out.fill({b.x1, b.y1, std::min(b.x2, b.x1 + t), b.y2}, kRed);
        out.fill({std::max(b.x1, b.x2 - t), b.y1, b.x2, b.y2}, kRed);
    }
    return out;
}

void write_heatmap_png(const std::filesystem::path& path, const Heatmap& heatmap) {
    std::vector<std::uint8_t> gray(heatmap.cells().size());
    std::transform(heatmap.cells().begin(), heatmap.cells().end(), gray.begin(),
                   [](std::uint8_t v) { return v ? std::uint8_t{255} : std::uint8_t{0}; });
    write_png_gray(path, heatmap.width(), heatmap.height(), gray);
}

void render_outputs(const ChangeReport& report, const Raster& image_a, const Raster& image_b,
                    const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

    write_heatmap_png(out_dir / "heatmap_a.png", report.heatmap_original);
    write_heatmap_png(out_dir / "heatmap_b.png", report.heatmap_changed);
    write_png(out_dir / "overlay_a.png", draw_overlay(image_a, report.changes_in_original));
    write_png(out_dir / "overlay_b.png", draw_overlay(image_b, report.changes_in_changed));

    std::ofstream out(out_dir / "report.json", std::ios::binary);
    if (!out) throw IoError("cannot write report.json in '" + out_dir.string() + "'");
    out << to_json(report).dump(2) << '\n';
}

}  // namespace uidiff::changes
