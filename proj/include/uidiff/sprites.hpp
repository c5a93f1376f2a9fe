#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "uidiff/model.hpp"
#include "uidiff/rng.hpp"

namespace uidiff::datagen {

/// Colour scheme shared by the controls of one synthetic screen.
struct Theme {
    Rgb background;
    Rgb surface;  ///< fill of boxed controls
    Rgb accent;   ///< buttons, selected states, chart series
    Rgb ink;      ///< text and outlines
    Rgb muted;    ///< secondary lines
};

Theme random_theme(Rng& rng);

/// A rendered control. Every pixel differs from the theme background, so the
/// sprite is one solid region when pasted onto an empty canvas.
struct Sprite {
    Raster pixels;
    ControlCategory category = ControlCategory::Icon;
    std::optional<std::string> text;
};

/// Renders a control of the given category with a random size typical for it.
Sprite render_control(ControlCategory category, const Theme& theme, Rng& rng);

/// Glyph cell of the built-in bitmap font at scale 1.
inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

/// Draws ASCII text with the built-in 5x7 pseudo-font; non-printable bytes are blank.
void draw_text(Raster& canvas, int x, int y, std::string_view text, Rgb color, int scale);
int text_width(std::string_view text, int scale) noexcept;

/// Random words for TEXT controls and labels.
std::string random_words(Rng& rng, int min_words, int max_words);

/// Procedural screen: rows of controls from the sprite bank on a flat background.
struct Layout {
    Raster image;
    DetectionSet detections;
    Theme theme;
};

Layout synthesize_layout(int width, int height, Rng& rng);

}  // namespace uidiff::datagen
