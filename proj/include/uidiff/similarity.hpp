#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uidiff/model.hpp"

namespace uidiff::similarity {

/// 64-bit average hash over an 8x8 grid; bit (row * 8 + col) belongs to that cell.
struct PerceptualHash {
    std::uint64_t bits = 0;

    bool bit(int row, int col) const noexcept { return (bits >> (row * 8 + col)) & 1u; }
    friend constexpr bool operator==(const PerceptualHash&, const PerceptualHash&) = default;
};

struct SimilarityParams {
    int h = 10;       ///< max hash difference, [0, 64]
    double ts = 0.7;  ///< min text similarity for TEXT pairs, [0, 1]
    double ns = 0.8;  ///< min neighbour similarity to accept a match, [0, 1]
    /// Largest relative change of width or height under which two controls can still
    /// be the same control, [0, 1]. 1 disables the check.
    double size_tolerance = 0.1;
    /// Allowed disagreement of a neighbour's offset from its root, relative to the
    /// offset length, [0, 1]. 1 disables the check.
    double layout_tolerance = 0.25;
    /// Levels of neighbourhood expansion below a scored pair, >= 1.
    int context_depth = 1;

    /// Throws Error with a range message when a field is out of range.
    void validate() const;
};

/// Average hash of a box: Rec. 601 luma, area-averaged onto an 8x8 grid, bit set
/// iff the cell mean is >= the patch mean. Computed in exact integer arithmetic.
/// Throws DegenerateBox on an empty box and BoundsError if it leaves the image.
PerceptualHash average_hash(const Raster& image, const BBox& box);

/// Hamming distance, in [0, 64].
int hash_difference(PerceptualHash a, PerceptualHash b) noexcept;

/// Unicode scalar values of a UTF-8 string; malformed bytes decode to U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view text);

std::size_t levenshtein(const std::vector<char32_t>& a, const std::vector<char32_t>& b);

/// 1 - levenshtein / max length over code points. Both absent or both empty give 1,
/// exactly one absent gives 0.
double text_similarity(const std::optional<std::string>& a, const std::optional<std::string>& b);

/// Leaf score for a pair of controls, in [0, 1]:
///   different categories                  -> 0
///   hamming > h                           -> 0
///   TEXT pair with text similarity < ts   -> 0
///   TEXT pair                             -> 0.5 * textsim + 0.5 * (1 - hamming / 64)
///   any other category                    -> 1 - hamming / 64
double base_similarity(const Control& a, PerceptualHash hash_a, const Control& b,
                       PerceptualHash hash_b, const SimilarityParams& params);

double base_similarity(const Control& a, const Control& b, const Raster& image_a,
                       const Raster& image_b, const SimilarityParams& params);

}  // namespace uidiff::similarity
