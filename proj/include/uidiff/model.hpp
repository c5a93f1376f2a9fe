#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uidiff {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class CategoryError : public Error {
public:
    using Error::Error;
};

class DegenerateBox : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Axis-aligned pixel box, origin top-left, x2/y2 exclusive.
struct BBox {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    constexpr int width() const noexcept { return x2 - x1; }
    constexpr int height() const noexcept { return y2 - y1; }
    constexpr std::int64_t area() const noexcept {
        return static_cast<std::int64_t>(width()) * height();
    }
    constexpr bool valid() const noexcept { return x1 >= 0 && y1 >= 0 && x1 < x2 && y1 < y2; }
    constexpr bool contains(int x, int y) const noexcept {
        return x >= x1 && x < x2 && y >= y1 && y < y2;
    }
    constexpr bool inside(int image_width, int image_height) const noexcept {
        return valid() && x2 <= image_width && y2 <= image_height;
    }
    constexpr BBox translated(int dx, int dy) const noexcept {
        return {x1 + dx, y1 + dy, x2 + dx, y2 + dy};
    }
    constexpr BBox expanded(int margin) const noexcept {
        return {x1 - margin, y1 - margin, x2 + margin, y2 + margin};
    }

    friend constexpr bool operator==(const BBox&, const BBox&) = default;
};

/// Intersection of two boxes; nullopt when they do not overlap.
std::optional<BBox> intersection(const BBox& a, const BBox& b) noexcept;
bool overlaps(const BBox& a, const BBox& b) noexcept;

/// Euclidean distance between the two boxes viewed as 4-vectors (x1, y1, x2, y2).
double euclidean_distance(const BBox& a, const BBox& b) noexcept;

/// Intersection over union; 0 for disjoint boxes, 1 for identical ones.
double iou(const BBox& a, const BBox& b) noexcept;

std::string to_string(const BBox& box);

enum class ControlCategory : std::uint8_t {
    Icon,
    Dropdown,
    Button,
    Menu,
    Input,
    List,
    Tabbar,
    Table,
    RadioSelected,
    RadioUnselected,
    CheckboxUnchecked,
    CheckboxChecked,
    Tree,
    Image,
    Text,
    LabelOfTextArea,
    DescriptionList,
    Legend,
    HorizontalAxis,
    Chart,
    PlotTitle,
    Graph,
    VerticalAxis,
    DateArea,
};

inline constexpr std::size_t kCategoryCount = 24;

const std::array<ControlCategory, kCategoryCount>& all_categories() noexcept;
std::string_view to_string(ControlCategory category) noexcept;
/// Throws CategoryError for anything outside the 24 known labels.
ControlCategory parse_category(std::string_view label);

using ControlId = std::uint32_t;

struct Control {
    ControlId id = 0;
    BBox bbox;
    ControlCategory category = ControlCategory::Icon;
    std::optional<std::string> text;

    friend bool operator==(const Control&, const Control&) = default;
};

struct DetectionSet {
    int image_width = 0;
    int image_height = 0;
    std::vector<Control> controls;

    /// Throws BoundsError or SchemaError when an invariant is broken.
    void validate() const;
    /// Index of the control with the given id, or nullopt.
    std::optional<std::size_t> find(ControlId id) const noexcept;

    friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

constexpr std::uint32_t pack(Rgb c) noexcept {
    return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | std::uint32_t{c.b};
}
constexpr Rgb unpack(std::uint32_t v) noexcept {
    return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
            static_cast<std::uint8_t>(v)};
}

/// Rec. 601 luma scaled by 1000 so it stays integral.
constexpr std::uint32_t luma_milli(Rgb c) noexcept {
    return 299u * c.r + 587u * c.g + 114u * c.b;
}

/// Row-major RGB8 image.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, Rgb fill = {});
    Raster(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return width_ == 0 || height_ == 0; }
    BBox bounds() const noexcept { return {0, 0, width_, height_}; }

    Rgb at(int x, int y) const noexcept {
        const auto* p = &pixels_[offset(x, y)];
        return {p[0], p[1], p[2]};
    }
    void set(int x, int y, Rgb c) noexcept {
        auto* p = &pixels_[offset(x, y)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    void fill(const BBox& box, Rgb c);
    /// Copy of the pixels inside `box` (clipped to the image).
    Raster crop(const BBox& box) const;
    /// Paste `patch` with its top-left corner at (x, y); pixels outside are clipped.
    void blit(const Raster& patch, int x, int y);

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
    std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    std::size_t offset(int x, int y) const noexcept {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Nearest-neighbour rescale of a raster to the requested size.
Raster resize_nearest(const Raster& src, int width, int height);

/// Modal colour of the ring of `width` pixels around the box, clipped to the image.
/// Ties go to the smallest packed value.
Rgb ring_mode(const Raster& image, const BBox& box, int width);
/// Modal colour of the outermost pixel frame of the image.
Rgb border_mode(const Raster& image);

}  // namespace uidiff
