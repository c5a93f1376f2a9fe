#pragma once

#include "uidiff/changes.hpp"

namespace uidiff::baselines {

/// Baseline output shares the report layout; `match_result` stays empty.
using BaselineReport = changes::ChangeReport;

inline constexpr int kMinComponentArea = 16;
inline constexpr double kSameLocationIou = 0.5;
inline constexpr int kRegionHashThreshold = 10;

/// Boxes of the 4-connected components of `mask` (row-major, width*height) with at
/// least `min_area` pixels, in scan order of each component's first pixel.
std::vector<BBox> connected_components(const std::vector<std::uint8_t>& mask, int width,
                                       int height, int min_area);

/// Connected components whose boxes overlap are merged until no two boxes overlap,
/// so fragments of one changed object become one region. Result sorted by (y1, x1).
std::vector<BBox> merge_overlapping(std::vector<BBox> boxes);

/// Change regions of a difference mask: components, then overlap merging.
std::vector<BBox> mask_regions(const std::vector<std::uint8_t>& mask, int width, int height,
                               int min_area = kMinComponentArea);

/// Pixel-wise comparison. Images of different sizes give a report with
/// `dimension_mismatch` set and no regions. Otherwise each surviving component of
/// the exact-inequality mask is reported in every image where its differing pixels
/// show something other than the modal colour just around the component; a
/// component that is backdrop on both sides is reported in both.
BaselineReport pixel_wise_detect(const Raster& image_a, const Raster& image_b,
                                 int min_area = kMinComponentArea);

/// Region-based comparison. Controls are paired across images by IOU >= 0.5
/// (greedy by descending IOU, one-to-one); a pair whose hash difference exceeds the
/// threshold is a change in both images, and unpaired controls are changes in their
/// own image.
BaselineReport region_based_detect(const Raster& image_a, const DetectionSet& dets_a,
                                   const Raster& image_b, const DetectionSet& dets_b,
                                   int hash_threshold = kRegionHashThreshold);

}  // namespace uidiff::baselines
