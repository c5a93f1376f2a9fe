#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "uidiff/model.hpp"

namespace uidiff::detection {

/// Parses an annotation document:
///   { "image": {"width": W, "height": H},
///     "controls": [ {"id": int?, "bbox": [x1,y1,x2,y2], "category": str, "text": str?} ] }
/// Ids are either given for every control (strictly increasing) or for none, in which
/// case they are assigned 0..N-1 in input order.
/// Throws SchemaError, BoundsError or CategoryError; never returns a partial set.
DetectionSet load_annotations(const nlohmann::json& document);
DetectionSet load_annotations_string(const std::string& text);
DetectionSet load_annotations_file(const std::filesystem::path& path);

nlohmann::json serialize(const DetectionSet& dets);
void save_annotations_file(const std::filesystem::path& path, const DetectionSet& dets);

/// Detector imperfection model for robustness runs. Defaults are a perfect detector.
struct NoiseParams {
    double drop_probability = 0.0;
    int jitter_px = 0;
    std::uint64_t seed = 0;

    bool enabled() const noexcept { return drop_probability > 0.0 || jitter_px > 0; }
};

/// Drops each control with probability p and moves every box edge by up to
/// +/- jitter pixels, keeping boxes valid and on-canvas. Ids are preserved.
DetectionSet apply_noise(const DetectionSet& dets, const NoiseParams& noise);

struct AnnotationFile {
    std::filesystem::path path;
};

/// Annotations stored alongside a generated pair.
struct GroundTruth {
    DetectionSet detections;
};

using DetectorSource = std::variant<AnnotationFile, GroundTruth>;

DetectionSet detect(const DetectorSource& source, const NoiseParams& noise = {});

}  // namespace uidiff::detection
