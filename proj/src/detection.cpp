#include "uidiff/detection.hpp"

#include <fstream>
#include <sstream>

#include "uidiff/rng.hpp"

namespace uidiff::detection {

using nlohmann::json;

namespace {

int require_int(const json& value, const std::string& what) {
    if (!value.is_number_integer()) throw SchemaError(what + " must be an integer");
    const auto v = value.get<std::int64_t>();
    if (v < INT32_MIN || v > INT32_MAX) throw SchemaError(what + " out of range");
    return static_cast<int>(v);
}

Control parse_control(const json& item, std::size_t index, bool& has_id, int width,
                      int height) {
    const std::string where = "controls[" + std::to_string(index) + "]";
    if (!item.is_object()) throw SchemaError(where + " must be an object");

    Control control;
    const bool this_has_id = item.contains("id");
    if (index == 0) has_id = this_has_id;
    if (this_has_id != has_id) {
        throw SchemaError(where + ": ids must be given for all controls or for none");
    }
    if (this_has_id) {
        const int id = require_int(item["id"], where + ".id");
        if (id < 0) throw SchemaError(where + ".id must be non-negative");
        control.id = static_cast<ControlId>(id);
    } else {
        control.id = static_cast<ControlId>(index);
    }

    if (!item.contains("bbox") || !item["bbox"].is_array() || item["bbox"].size() != 4) {
        throw SchemaError(where + ".bbox must be an array of 4 integers");
    }
    const auto& b = item["bbox"];
    control.bbox = {require_int(b[0], where + ".bbox[0]"), require_int(b[1], where + ".bbox[1]"),
                    require_int(b[2], where + ".bbox[2]"), require_int(b[3], where + ".bbox[3]")};
    if (control.bbox.x1 >= control.bbox.x2 || control.bbox.y1 >= control.bbox.y2) {
        throw SchemaError(where + ".bbox is degenerate " + to_string(control.bbox));
    }
    if (!control.bbox.inside(width, height)) {
        throw BoundsError(where + ".bbox " + to_string(control.bbox) + " outside " +
                          std::to_string(width) + "x" + std::to_string(height) + " image");
    }

    if (!item.contains("category") || !item["category"].is_string()) {
        throw SchemaError(where + ".category must be a string");
    }
    control.category = parse_category(item["category"].get<std::string>());

    if (item.contains("text") && !item["text"].is_null()) {
        if (!item["text"].is_string()) throw SchemaError(where + ".text must be a string");
        control.text = item["text"].get<std::string>();
    }
    return control;
}

}  // namespace

DetectionSet load_annotations(const json& document) {
    if (!document.is_object()) throw SchemaError("annotation document must be an object");
    if (!document.contains("image") || !document["image"].is_object()) {
        throw SchemaError("missing 'image' object");
    }
    const auto& image = document["image"];
    if (!image.contains("width") || !image.contains("height")) {
        throw SchemaError("'image' needs width and height");
    }
    DetectionSet dets;
    dets.image_width = require_int(image["width"], "image.width");
    dets.image_height = require_int(image["height"], "image.height");
    if (dets.image_width <= 0 || dets.image_height <= 0) {
        throw SchemaError("image size must be positive");
    }

    if (!document.contains("controls") || !document["controls"].is_array()) {
        throw SchemaError("missing 'controls' array");
    }
    const auto& controls = document["controls"];
    dets.controls.reserve(controls.size());
    bool has_id = false;
    for (std::size_t i = 0; i < controls.size(); ++i) {
        dets.controls.push_back(
            parse_control(controls[i], i, has_id, dets.image_width, dets.image_height));
    }
    dets.validate();
    return dets;
}

DetectionSet load_annotations_string(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    return load_annotations(document);
}

DetectionSet load_annotations_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_annotations_string(buffer.str());
}

json serialize(const DetectionSet& dets) {
    json controls = json::array();
    for (const auto& c : dets.controls) {
        json item = {{"id", c.id},
                     {"bbox", {c.bbox.x1, c.bbox.y1, c.bbox.x2, c.bbox.y2}},
                     {"category", std::string(to_string(c.category))}};
        if (c.text) item["text"] = *c.text;
        controls.push_back(std::move(item));
    }
    return {{"image", {{"width", dets.image_width}, {"height", dets.image_height}}},
            {"controls", std::move(controls)}};
}

void save_annotations_file(const std::filesystem::path& path, const DetectionSet& dets) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << serialize(dets).dump(2) << '\n';
}

DetectionSet apply_noise(const DetectionSet& dets, const NoiseParams& noise) {
    if (!noise.enabled()) return dets;
    Rng rng(noise.seed);
    const auto jitter = [&] { return uniform_int(rng, -noise.jitter_px, noise.jitter_px); };

    DetectionSet out{dets.image_width, dets.image_height, {}};
    for (const auto& c : dets.controls) {
        if (chance(rng, noise.drop_probability)) continue;
        Control moved = c;
        if (noise.jitter_px > 0) {
            BBox b{c.bbox.x1 + jitter(), c.bbox.y1 + jitter(), c.bbox.x2 + jitter(),
                   c.bbox.y2 + jitter()};
            b.x1 = std::clamp(b.x1, 0, dets.image_width - 1);
            b.y1 = std::clamp(b.y1, 0, dets.image_height - 1);
            b.x2 = std::clamp(b.x2, b.x1 + 1, dets.image_width);
            b.y2 = std::clamp(b.y2, b.y1 + 1, dets.image_height);
            moved.bbox = b;
        }
        out.controls.push_back(std::move(moved));
    }
    return out;
}

DetectionSet detect(const DetectorSource& source, const NoiseParams& noise) {
    auto dets = std::visit(
        [](const auto& s) -> DetectionSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AnnotationFile>) {
                return load_annotations_file(s.path);
            } else {
                s.detections.validate();
                return s.detections;
            }
        },
        source);
    return apply_noise(dets, noise);
}

}  // namespace uidiff::detection
