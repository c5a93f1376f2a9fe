#include "uidiff/similarity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace uidiff::similarity {

void SimilarityParams::validate() const {
    if (h < 0 || h > 64) throw Error("h must be in [0, 64], got " + std::to_string(h));
    if (!(ts >= 0.0 && ts <= 1.0)) throw Error("ts must be in [0, 1], got " + std::to_string(ts));
    if (!(ns >= 0.0 && ns <= 1.0)) throw Error("ns must be in [0, 1], got " + std::to_string(ns));
    if (!(size_tolerance >= 0.0 && size_tolerance <= 1.0)) {
        throw Error("size tolerance must be in [0, 1], got " + std::to_string(size_tolerance));
    }
    if (!(layout_tolerance >= 0.0 && layout_tolerance <= 1.0)) {
        throw Error("layout tolerance must be in [0, 1], got " + std::to_string(layout_tolerance));
    }
    if (context_depth < 1) {
        throw Error("context depth must be >= 1, got " + std::to_string(context_depth));
    }
}

namespace {

struct Span {
    int pixel;
    std::int64_t weight;
};

// Overlap of every pixel with each of the 8 cells along one axis, in units of 1/8 pixel.
// Pixel j covers [8j, 8j + 8), cell c covers [c * extent, (c + 1) * extent).
std::array<std::vector<Span>, 8> cell_spans(int extent) {
    std::array<std::vector<Span>, 8> spans;
    for (int c = 0; c < 8; ++c) {
        const std::int64_t lo = static_cast<std::int64_t>(c) * extent;
        const std::int64_t hi = lo + extent;
        for (int j = static_cast<int>(lo / 8); j < extent && 8LL * j < hi; ++j) {
            const std::int64_t w = std::min<std::int64_t>(hi, 8LL * j + 8) -
                                   std::max<std::int64_t>(lo, 8LL * j);
            if (w > 0) spans[c].push_back({j, w});
        }
    }
    return spans;
}

}  // namespace

PerceptualHash average_hash(const Raster& image, const BBox& box) {
    if (box.width() <= 0 || box.height() <= 0) {
        throw DegenerateBox("cannot hash degenerate box " + to_string(box));
    }
    if (!box.inside(image.width(), image.height())) {
        throw BoundsError("box " + to_string(box) + " outside image");
    }
    const int w = box.width();
    const int h = box.height();
    const auto xs = cell_spans(w);
    const auto ys = cell_spans(h);

    std::vector<std::int64_t> row_luma(static_cast<std::size_t>(w));
    std::array<std::array<std::int64_t, 8>, 8> cells{};
    std::int64_t total = 0;
    std::vector<std::array<std::int64_t, 8>> row_cells(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            row_luma[static_cast<std::size_t>(x)] = luma_milli(image.at(box.x1 + x, box.y1 + y));
            total += row_luma[static_cast<std::size_t>(x)];
        }
        auto& rc = row_cells[static_cast<std::size_t>(y)];
        for (int c = 0; c < 8; ++c) {
            std::int64_t s = 0;
            for (const auto& span : xs[c]) s += row_luma[static_cast<std::size_t>(span.pixel)] * span.weight;
            rc[c] = s;
        }
    }
    for (int r = 0; r < 8; ++r) {
        for (const auto& span : ys[r]) {
            const auto& rc = row_cells[static_cast<std::size_t>(span.pixel)];
            for (int c = 0; c < 8; ++c) cells[r][c] += rc[c] * span.weight;
        }
    }

    // Cell mean = cells / (w * h) in these units and patch mean = total / (w * h),
    // so the comparison reduces to cells >= total.
    PerceptualHash hash;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            if (cells[r][c] >= total) hash.bits |= std::uint64_t{1} << (r * 8 + c);
    return hash;
}

int hash_difference(PerceptualHash a, PerceptualHash b) noexcept {
    return std::popcount(a.bits ^ b.bits);
}

constexpr char32_t kReplacement = 0xFFFD;

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        int extra = 0;
        char32_t cp = 0;
        if (lead < 0x80) {
            cp = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            extra = 1;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            extra = 2;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            extra = 3;
            cp = lead & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = i + static_cast<std::size_t>(extra) < text.size();
        for (int k = 1; ok && k <= extra; ++k) {
            const auto cont = static_cast<unsigned char>(text[i + static_cast<std::size_t>(k)]);
            if ((cont & 0xC0) != 0x80) {
                ok = false;
            } else {
                cp = (cp << 6) | (cont & 0x3F);
            }
        }
        const bool overlong = (extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
                              (extra == 3 && cp < 0x10000);
        if (!ok || overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

std::size_t levenshtein(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t substitution = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, substitution});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double text_similarity(const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a && !b) return 1.0;
    if (!a || !b) return 0.0;
    const auto ua = decode_utf8(*a);
    const auto ub = decode_utf8(*b);
    const auto longest = std::max(ua.size(), ub.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

double base_similarity(const Control& a, PerceptualHash hash_a, const Control& b,
                       PerceptualHash hash_b, const SimilarityParams& params) {
    if (a.category != b.category) return 0.0;
    const int hamming = hash_difference(hash_a, hash_b);
    if (hamming > params.h) return 0.0;
    const double visual = 1.0 - static_cast<double>(hamming) / 64.0;
    if (a.category != ControlCategory::Text) return visual;
    const double text = text_similarity(a.text, b.text);
    if (text < params.ts) return 0.0;
    return 0.5 * text + 0.5 * visual;
}

double base_similarity(const Control& a, const Control& b, const Raster& image_a,
                       const Raster& image_b, const SimilarityParams& params) {
    if (a.category != b.category) return 0.0;
    return base_similarity(a, average_hash(image_a, a.bbox), b, average_hash(image_b, b.bbox),
                           params);
}

}  // namespace uidiff::similarity
