#include "uidiff/baselines.hpp"

#include <algorithm>
#include <vector>

#include "uidiff/similarity.hpp"

namespace uidiff::baselines {

using changes::ChangeRegion;
using changes::Method;

std::vector<BBox> connected_components(const std::vector<std::uint8_t>& mask, int width,
                                       int height, int min_area) {
    std::vector<BBox> out;
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<std::size_t> stack;
    const auto w = static_cast<std::size_t>(width);
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask[start] || seen[start]) continue;
        BBox box{width, height, 0, 0};
        std::int64_t area = 0;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % w);
            const int y = static_cast<int>(i / w);
            ++area;
            box.x1 = std::min(box.x1, x);
            box.y1 = std::min(box.y1, y);
            box.x2 = std::max(box.x2, x + 1);
            box.y2 = std::max(box.y2, y + 1);
            const auto visit = [&](std::size_t j) {
                if (mask[j] && !seen[j]) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            };
            if (x > 0) visit(i - 1);
            if (x + 1 < width) visit(i + 1);
            if (y > 0) visit(i - w);
            if (y + 1 < height) visit(i + w);
        }
        if (area >= min_area) out.push_back(box);
    }
    return out;
}

std::vector<BBox> merge_overlapping(std::vector<BBox> boxes) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            for (std::size_t j = i + 1; j < boxes.size();) {
                if (overlaps(boxes[i], boxes[j])) {
                    boxes[i] = {std::min(boxes[i].x1, boxes[j].x1), std::min(boxes[i].y1, boxes[j].y1),
                                std::max(boxes[i].x2, boxes[j].x2), std::max(boxes[i].y2, boxes[j].y2)};
                    boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                } else {
                    ++j;
                }
            }
        }
    }
    std::sort(boxes.begin(), boxes.end(), [](const BBox& a, const BBox& b) {
        return a.y1 != b.y1 ? a.y1 < b.y1 : a.x1 < b.x1;
    });
    return boxes;
}

std::vector<BBox> mask_regions(const std::vector<std::uint8_t>& mask, int width, int height,
                               int min_area) {
    return merge_overlapping(connected_components(mask, width, height, min_area));
}

namespace {

BaselineReport empty_report(Method method, const Raster& a, const Raster& b) {
    BaselineReport report;
    report.method = method;
    report.width_original = a.width();
    report.height_original = a.height();
    report.width_changed = b.width();
    report.height_changed = b.height();
    return report;
}

// True when some differing pixel of the component shows something other than the
// surrounding backdrop in this image.
bool has_content(const Raster& image, const std::vector<std::uint8_t>& mask, const BBox& box) {
    const Rgb backdrop = ring_mode(image, box, 3);
    for (int y = box.y1; y < box.y2; ++y)
        for (int x = box.x1; x < box.x2; ++x)
            if (mask[static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width()) +
                     static_cast<std::size_t>(x)] &&
                image.at(x, y) != backdrop)
                return true;
    return false;
}

}  // namespace

BaselineReport pixel_wise_detect(const Raster& image_a, const Raster& image_b, int min_area) {
    auto report = empty_report(Method::Pwc, image_a, image_b);
    if (image_a.width() != image_b.width() || image_a.height() != image_b.height()) {
        report.dimension_mismatch = true;
        report.refresh_heatmaps();
        return report;
    }
    const auto& pa = image_a.pixels();
    const auto& pb = image_b.pixels();
    std::vector<std::uint8_t> mask(pa.size() / 3, 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = pa[3 * i] != pb[3 * i] || pa[3 * i + 1] != pb[3 * i + 1] ||
                  pa[3 * i + 2] != pb[3 * i + 2];
    }
    for (const auto& box : mask_regions(mask, image_a.width(), image_a.height(), min_area)) {
        const bool in_a = has_content(image_a, mask, box);
        const bool in_b = has_content(image_b, mask, box);
        if (in_a || !in_b) report.changes_in_original.push_back({box, std::nullopt, std::nullopt});
        if (in_b || !in_a) report.changes_in_changed.push_back({box, std::nullopt, std::nullopt});
    }
    report.refresh_heatmaps();
    return report;
}

BaselineReport region_based_detect(const Raster& image_a, const DetectionSet& dets_a,
                                   const Raster& image_b, const DetectionSet& dets_b,
                                   int hash_threshold) {
    auto report = empty_report(Method::Rcd, image_a, image_b);
    const auto& ca = dets_a.controls;
    const auto& cb = dets_b.controls;

    struct Pair {
        double overlap;
        std::size_t a;
        std::size_t b;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
            const double v = iou(ca[i].bbox, cb[j].bbox);
            if (v >= kSameLocationIou) pairs.push_back({v, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.overlap != y.overlap) return x.overlap > y.overlap;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<bool> paired_a(ca.size(), false);
    std::vector<bool> flagged_a(ca.size(), false);
    std::vector<bool> paired_b(cb.size(), false);
    std::vector<bool> flagged_b(cb.size(), false);
    for (const auto& p : pairs) {
        if (paired_a[p.a] || paired_b[p.b]) continue;
        paired_a[p.a] = true;
        paired_b[p.b] = true;
        const auto ha = similarity::average_hash(image_a, ca[p.a].bbox);
        const auto hb = similarity::average_hash(image_b, cb[p.b].bbox);
        if (similarity::hash_difference(ha, hb) > hash_threshold) {
            flagged_a[p.a] = true;
            flagged_b[p.b] = true;
        }
    }
    for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!paired_a[i] || flagged_a[i]) {
            report.changes_in_original.push_back({ca[i].bbox, ca[i].id, ca[i].category});
        }
    }
    for (std::size_t j = 0; j < cb.size(); ++j) {
        if (!paired_b[j] || flagged_b[j]) {
            report.changes_in_changed.push_back({cb[j].bbox, cb[j].id, cb[j].category});
        }
    }
    report.refresh_heatmaps();
    return report;
}

}  // namespace uidiff::baselines
