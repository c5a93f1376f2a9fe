#include "uidiff/model.hpp"

#include <algorithm>
#include <cmath>

namespace uidiff {

std::optional<BBox> intersection(const BBox& a, const BBox& b) noexcept {
    BBox out{std::max(a.x1, b.x1), std::max(a.y1, b.y1), std::min(a.x2, b.x2),
             std::min(a.y2, b.y2)};
    if (out.x1 >= out.x2 || out.y1 >= out.y2) return std::nullopt;
    return out;
}

bool overlaps(const BBox& a, const BBox& b) noexcept {
    return a.x1 < b.x2 && b.x1 < a.x2 && a.y1 < b.y2 && b.y1 < a.y2;
}

double euclidean_distance(const BBox& a, const BBox& b) noexcept {
    const double d1 = a.x1 - b.x1;
    const double d2 = a.y1 - b.y1;
    const double d3 = a.x2 - b.x2;
    const double d4 = a.y2 - b.y2;
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4);
}

double iou(const BBox& a, const BBox& b) noexcept {
    const auto overlap = intersection(a, b);
    if (!overlap) return 0.0;
    const auto ao = overlap->area();
    const auto uni = a.area() + b.area() - ao;
    return static_cast<double>(ao) / static_cast<double>(uni);
}

std::string to_string(const BBox& box) {
    return "(" + std::to_string(box.x1) + "," + std::to_string(box.y1) + "," +
           std::to_string(box.x2) + "," + std::to_string(box.y2) + ")";
}

namespace {

constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
    "ICON",
    "DROPDOWN",
    "BUTTON",
    "MENU",
    "INPUT",
    "LIST",
    "TABBAR",
    "TABLE",
    "RADIO_SELECTED",
    "RADIO_UNSELECTED",
    "CHECKBOX_UNCHECKED",
    "CHECKBOX_CHECKED",
    "TREE",
    "IMAGE",
    "TEXT",
    "LABEL_OF_TEXT_AREA",
    "DESCRIPTION_LIST",
    "LEGEND",
    "HORIZONTAL_AXIS",
    "CHART",
    "PLOT_TITLE",
    "GRAPH",
    "VERTICAL_AXIS",
    "DATE_AREA",
};

}  // namespace

const std::array<ControlCategory, kCategoryCount>& all_categories() noexcept {
    static const auto categories = [] {
        std::array<ControlCategory, kCategoryCount> out{};
        for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = static_cast<ControlCategory>(i);
        return out;
    }();
    return categories;
}

std::string_view to_string(ControlCategory category) noexcept {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

ControlCategory parse_category(std::string_view label) {
    const auto it = std::find(kCategoryNames.begin(), kCategoryNames.end(), label);
    if (it == kCategoryNames.end()) {
        throw CategoryError("unknown control category '" + std::string(label) + "'");
    }
    return static_cast<ControlCategory>(it - kCategoryNames.begin());
}

void DetectionSet::validate() const {
    if (image_width <= 0 || image_height <= 0) {
        throw SchemaError("image size must be positive, got " + std::to_string(image_width) +
                          "x" + std::to_string(image_height));
    }
    for (std::size_t i = 0; i < controls.size(); ++i) {
        const auto& c = controls[i];
        if (i > 0 && c.id <= controls[i - 1].id) {
            throw SchemaError("control ids must be strictly increasing (id " +
                              std::to_string(c.id) + " at index " + std::to_string(i) + ")");
        }
        if (!c.bbox.valid()) {
            throw SchemaError("control " + std::to_string(c.id) + " has degenerate bbox " +
                              to_string(c.bbox));
        }
        if (!c.bbox.inside(image_width, image_height)) {
            throw BoundsError("control " + std::to_string(c.id) + " bbox " + to_string(c.bbox) +
                              " exceeds image " + std::to_string(image_width) + "x" +
                              std::to_string(image_height));
        }
    }
}

std::optional<std::size_t> DetectionSet::find(ControlId id) const noexcept {
    const auto it = std::lower_bound(controls.begin(), controls.end(), id,
                                     [](const Control& c, ControlId v) { return c.id < v; });
    if (it == controls.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - controls.begin());
}

Raster::Raster(int width, int height, Rgb fill_color) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("negative raster size");
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
        pixels_[i] = fill_color.r;
        pixels_[i + 1] = fill_color.g;
        pixels_[i + 2] = fill_color.b;
    }
}

Raster::Raster(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 0 || height < 0 ||
        pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
        throw Error("pixel buffer does not match raster size");
    }
}

void Raster::fill(const BBox& box, Rgb c) {
    const auto clip = intersection(box, bounds());
    if (!clip) return;
    for (int y = clip->y1; y < clip->y2; ++y)
        for (int x = clip->x1; x < clip->x2; ++x) set(x, y, c);
}

Raster Raster::crop(const BBox& box) const {
    const auto clip = intersection(box, bounds());
    if (!clip) return {};
    Raster out(clip->width(), clip->height());
    for (int y = 0; y < out.height(); ++y) {
        const auto* src = &pixels_[offset(clip->x1, clip->y1 + y)];
        std::copy(src, src + static_cast<std::ptrdiff_t>(out.width()) * 3,
                  out.pixels_.begin() + static_cast<std::ptrdiff_t>(out.offset(0, y)));
    }
    return out;
}

void Raster::blit(const Raster& patch, int x, int y) {
    const BBox target{x, y, x + patch.width(), y + patch.height()};
    const auto clip = intersection(target, bounds());
    if (!clip) return;
    for (int yy = clip->y1; yy < clip->y2; ++yy)
        for (int xx = clip->x1; xx < clip->x2; ++xx) set(xx, yy, patch.at(xx - x, yy - y));
}

Raster resize_nearest(const Raster& src, int width, int height) {
    Raster out(width, height);
    if (src.empty()) return out;
    for (int y = 0; y < height; ++y) {
        const int sy = static_cast<int>(static_cast<std::int64_t>(y) * src.height() / height);
        for (int x = 0; x < width; ++x) {
            const int sx = static_cast<int>(static_cast<std::int64_t>(x) * src.width() / width);
            out.set(x, y, src.at(sx, sy));
        }
    }
    return out;
}

namespace {

Rgb mode_of(std::vector<std::uint32_t>& colors) {
    std::sort(colors.begin(), colors.end());
    std::uint32_t best = colors.front();
    std::size_t best_run = 0;
    for (std::size_t i = 0; i < colors.size();) {
        std::size_t j = i;
        while (j < colors.size() && colors[j] == colors[i]) ++j;
        if (j - i > best_run) {
            best_run = j - i;
            best = colors[i];
        }
        i = j;
    }
    return unpack(best);
}

}  // namespace

Rgb ring_mode(const Raster& image, const BBox& box, int width) {
    std::vector<std::uint32_t> colors;
    const auto outer = intersection(box.expanded(width), image.bounds());
    if (outer) {
        for (int y = outer->y1; y < outer->y2; ++y)
            for (int x = outer->x1; x < outer->x2; ++x)
                if (!box.contains(x, y)) colors.push_back(pack(image.at(x, y)));
    }
    if (colors.empty()) return image.empty() ? Rgb{} : image.at(0, 0);
    return mode_of(colors);
}

Rgb border_mode(const Raster& image) {
    if (image.empty()) return {};
    std::vector<std::uint32_t> colors;
    const int w = image.width();
    const int h = image.height();
    for (int x = 0; x < w; ++x) {
        colors.push_back(pack(image.at(x, 0)));
        if (h > 1) colors.push_back(pack(image.at(x, h - 1)));
    }
    for (int y = 1; y + 1 < h; ++y) {
        colors.push_back(pack(image.at(0, y)));
        if (w > 1) colors.push_back(pack(image.at(w - 1, y)));
    }
    return mode_of(colors);
}

}  // namespace uidiff
