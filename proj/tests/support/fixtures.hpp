#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uidiff/matching.hpp"
#include "uidiff/model.hpp"
#include "uidiff/rng.hpp"

namespace uidiff::testing {

Control make_control(ControlId id, BBox box, ControlCategory category = ControlCategory::Button,
                     std::optional<std::string> text = std::nullopt);

DetectionSet make_dets(int width, int height, std::vector<Control> controls);

/// Random blocky texture; every cell of `cell` px gets its own colour.
Raster random_texture(int width, int height, int cell, Rng& rng);

/// Empty directory under the working directory, wiped first.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

/// Random DetectionSet of up to `max_controls` boxes on a width x height canvas.
DetectionSet random_dets(Rng& rng, int max_controls, int width = 400, int height = 300);

/// Brute-force nearest neighbours: every other control sorted by (distance, id).
std::vector<std::size_t> reference_neighbors(const DetectionSet& dets, std::size_t target, int k);

/// A pair of small screens where the second is loosely derived from the first:
/// some controls copied in place, some moved, some dropped and some new.
struct MatchingInstance {
    Raster image_a;
    DetectionSet dets_a;
    Raster image_b;
    DetectionSet dets_b;
    int k = 2;
    similarity::SimilarityParams params;
};

MatchingInstance random_matching_instance(Rng& rng, int max_controls = 6);

/// Exhaustive reference for matching: neighbour lists by full sort, every pair
/// score recomputed from scratch, then repeated selection of the best free pair.
matching::MatchResult reference_assign(const MatchingInstance& instance);

}  // namespace uidiff::testing
