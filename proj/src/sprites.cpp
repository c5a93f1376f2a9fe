#include "uidiff/sprites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace uidiff::datagen {

namespace {

constexpr int kScale = 2;
constexpr int kAdvance = (kGlyphWidth + 1) * kScale;
constexpr int kLineHeight = kGlyphHeight * kScale + 4;

Rgb random_color(Rng& rng, int lo, int hi) {
    return {static_cast<std::uint8_t>(uniform_int(rng, lo, hi)),
            static_cast<std::uint8_t>(uniform_int(rng, lo, hi)),
            static_cast<std::uint8_t>(uniform_int(rng, lo, hi))};
}

Rgb saturated_color(Rng& rng) {
    std::array<int, 3> ch = {uniform_int(rng, 150, 240), uniform_int(rng, 20, 120),
                             uniform_int(rng, 40, 200)};
    // Random channel order gives reds, greens, blues and mixtures.
    for (int i = 2; i > 0; --i) std::swap(ch[static_cast<std::size_t>(i)], ch[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
    return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
            static_cast<std::uint8_t>(ch[2])};
}

Rgb mix(Rgb a, Rgb b, double t) {
    const auto m = [t](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + (y - x) * t));
    };
    return {m(a.r, b.r), m(a.g, b.g), m(a.b, b.b)};
}

Rgb contrasting_ink(Rgb fill) { return luma_milli(fill) > 140000 ? Rgb{20, 20, 28} : Rgb{250, 250, 250}; }

// Glyph bitmaps: 35 bits per printable ASCII character, row-major 5x7.
std::uint64_t glyph_bits(unsigned char c) {
    if (c <= ' ' || c > '~') return 0;
    std::uint64_t bits = splitmix64(0xC0FFEEull * 131 + c) & ((std::uint64_t{1} << 35) - 1);
    // Keep a stem so every glyph has some ink.
    for (int row = 0; row < kGlyphHeight; ++row) bits |= std::uint64_t{1} << (row * kGlyphWidth + (c % 2 ? 0 : 4));
    return bits;
}

class Painter {
public:
    Painter(int w, int h, Rgb fill) : image_(w, h, fill) {}

    int w() const { return image_.width(); }
    int h() const { return image_.height(); }
    Raster& image() { return image_; }

    void rect(int x1, int y1, int x2, int y2, Rgb c) { image_.fill({x1, y1, x2, y2}, c); }
    void frame(int x1, int y1, int x2, int y2, Rgb c, int t = 1) {
        rect(x1, y1, x2, y1 + t, c);
        rect(x1, y2 - t, x2, y2, c);
        rect(x1, y1, x1 + t, y2, c);
        rect(x2 - t, y1, x2, y2, c);
    }
    void border(Rgb c, int t = 1) { frame(0, 0, w(), h(), c, t); }
    void disc(double cx, double cy, double r, Rgb c) {
        for (int y = 0; y < h(); ++y)
            for (int x = 0; x < w(); ++x) {
                const double dx = x + 0.5 - cx;
                const double dy = y + 0.5 - cy;
                if (dx * dx + dy * dy <= r * r) image_.set(x, y, c);
            }
    }
    void ring(double cx, double cy, double r, double t, Rgb c) {
        for (int y = 0; y < h(); ++y)
            for (int x = 0; x < w(); ++x) {
                const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
                if (d <= r && d >= r - t) image_.set(x, y, c);
            }
    }
    void line(int x0, int y0, int x1, int y1, Rgb c, int t = 1) {
        const int dx = std::abs(x1 - x0);
        const int dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1;
        const int sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        for (;;) {
            rect(x0, y0, x0 + t, y0 + t, c);
            if (x0 == x1 && y0 == y1) break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }
    void text(int x, int y, std::string_view s, Rgb c, int scale = kScale) {
        draw_text(image_, x, y, s, c, scale);
    }

private:
    Raster image_;
};

constexpr std::array<std::string_view, 48> kWords = {
    "home",   "search", "save",    "cancel", "submit",  "next",    "back",   "login",
    "email",  "name",   "profile", "orders", "cart",    "help",    "about",  "price",
    "total",  "status", "report",  "users",  "delete",  "edit",    "view",   "open",
    "close",  "filter", "sort",    "upload", "export",  "import",  "share",  "print",
    "sales",  "region", "account", "notes",  "billing", "address", "phone",  "city",
    "active", "draft",  "review",  "team",   "project", "invoice", "budget", "daily",
};

std::string random_word(Rng& rng) {
    return std::string(kWords[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(kWords.size()) - 1))]);
}

std::string random_number(Rng& rng, int digits) {
    std::string s;
    for (int i = 0; i < digits; ++i) s.push_back(static_cast<char>('0' + uniform_int(rng, 0, 9)));
    return s;
}

// Replace any pixel that equals the background so the sprite is solid on the canvas.
void make_solid(Raster& r, Rgb background) {
    const Rgb nudged{static_cast<std::uint8_t>(background.r ^ 1), background.g,
                     static_cast<std::uint8_t>(background.b ^ 1)};
    for (int y = 0; y < r.height(); ++y)
        for (int x = 0; x < r.width(); ++x)
            if (r.at(x, y) == background) r.set(x, y, nudged);
}

Sprite text_sprite(ControlCategory category, const std::string& s, Rgb ink, Rgb fill, int scale) {
    const int w = text_width(s, scale) + 4;
    const int h = kGlyphHeight * scale + 4;
    Painter p(w, h, fill);
    p.text(2, 2, s, ink, scale);
    return {std::move(p.image()), category, std::nullopt};
}

Sprite icon(const Theme& th, Rng& rng) {
    const int size = uniform_int(rng, 20, 44);
    Painter p(size, size, chance(rng, 0.5) ? th.surface : th.background);
    const Rgb c = chance(rng, 0.6) ? th.accent : th.ink;
    // Random mirror-symmetric 5x5 pattern scaled onto the icon.
    std::array<bool, 25> cells{};
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 3; ++x) {
            const bool on = chance(rng, 0.55);
            cells[static_cast<std::size_t>(y * 5 + x)] = on;
            cells[static_cast<std::size_t>(y * 5 + 4 - x)] = on;
        }
    const double cell = size / 5.0;
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x)
            if (cells[static_cast<std::size_t>(y * 5 + x)])
                p.rect(static_cast<int>(x * cell), static_cast<int>(y * cell),
                       static_cast<int>((x + 1) * cell), static_cast<int>((y + 1) * cell), c);
    if (chance(rng, 0.3)) p.border(th.muted);
    return {std::move(p.image()), ControlCategory::Icon, std::nullopt};
}

Sprite button(const Theme& th, Rng& rng) {
    const std::string label = random_word(rng);
    const int w = std::max(uniform_int(rng, 70, 150), text_width(label, kScale) + 24);
    const int h = uniform_int(rng, 28, 42);
    const bool filled = chance(rng, 0.6);
    const Rgb fill = filled ? th.accent : th.surface;
    Painter p(w, h, fill);
    p.border(filled ? mix(th.accent, th.ink, 0.4) : th.ink, uniform_int(rng, 1, 2));
    p.text((w - text_width(label, kScale)) / 2, (h - kGlyphHeight * kScale) / 2, label,
           contrasting_ink(fill));
    return {std::move(p.image()), ControlCategory::Button, std::nullopt};
}

Sprite dropdown(const Theme& th, Rng& rng) {
    const std::string label = random_word(rng);
    const int w = std::max(uniform_int(rng, 120, 210), text_width(label, kScale) + 40);
    const int h = uniform_int(rng, 28, 36);
    Painter p(w, h, th.surface);
    p.border(th.ink);
    p.text(6, (h - kGlyphHeight * kScale) / 2, label, th.ink);
    const int ax = w - 18;
    const int ay = h / 2 - 3;
    for (int i = 0; i < 6; ++i) p.rect(ax + i, ay + i, ax + 12 - i, ay + i + 1, th.ink);
    p.rect(w - 26, 3, w - 25, h - 3, th.muted);
    return {std::move(p.image()), ControlCategory::Dropdown, std::nullopt};
}

Sprite menu(const Theme& th, Rng& rng) {
    const std::string label = random_word(rng);
    const int w = text_width(label, kScale) + uniform_int(rng, 16, 40);
    const int h = uniform_int(rng, 24, 32);
    const Rgb fill = chance(rng, 0.5) ? th.surface : mix(th.surface, th.accent, 0.2);
    Painter p(w, h, fill);
    p.text((w - text_width(label, kScale)) / 2, (h - kGlyphHeight * kScale) / 2, label, th.ink);
    if (chance(rng, 0.4)) p.rect(0, h - 3, w, h, th.accent);
    return {std::move(p.image()), ControlCategory::Menu, std::nullopt};
}

Sprite input(const Theme& th, Rng& rng) {
    const int w = uniform_int(rng, 150, 260);
    const int h = uniform_int(rng, 28, 36);
    Painter p(w, h, Rgb{255, 255, 255});
    p.border(th.muted, uniform_int(rng, 1, 2));
    if (chance(rng, 0.7)) {
        std::string hint = random_word(rng);
        if (chance(rng, 0.5)) hint += " " + random_word(rng);
        p.text(8, (h - kGlyphHeight * kScale) / 2, hint, mix(th.muted, Rgb{255, 255, 255}, 0.2));
    }
    return {std::move(p.image()), ControlCategory::Input, std::nullopt};
}

Sprite list(const Theme& th, Rng& rng) {
    const int rows = uniform_int(rng, 4, 9);
    const int row_h = uniform_int(rng, 22, 28);
    const int w = uniform_int(rng, 150, 240);
    const int h = rows * row_h + 2;
    Painter p(w, h, th.surface);
    p.border(th.ink);
    const int selected = uniform_int(rng, -1, rows - 1);
    for (int r = 0; r < rows; ++r) {
        const int y = 1 + r * row_h;
        if (r == selected) p.rect(1, y, w - 1, y + row_h, mix(th.surface, th.accent, 0.5));
        p.text(8, y + (row_h - kGlyphHeight * kScale) / 2, random_word(rng), th.ink);
        if (r > 0) p.rect(1, y, w - 1, y + 1, th.muted);
    }
    return {std::move(p.image()), ControlCategory::List, std::nullopt};
}

Sprite tabbar(const Theme& th, Rng& rng) {
    const int tabs = uniform_int(rng, 3, 6);
    const int h = uniform_int(rng, 32, 40);
    std::vector<std::string> labels;
    int w = 0;
    for (int i = 0; i < tabs; ++i) {
        labels.push_back(random_word(rng));
        w += text_width(labels.back(), kScale) + 28;
    }
    Painter p(w, h, th.surface);
    const int active = uniform_int(rng, 0, tabs - 1);
    int x = 0;
    for (int i = 0; i < tabs; ++i) {
        const int tw = text_width(labels[static_cast<std::size_t>(i)], kScale) + 28;
        if (i == active) p.rect(x, 0, x + tw, h, th.accent);
        p.frame(x, 0, x + tw, h, th.muted);
        p.text(x + 14, (h - kGlyphHeight * kScale) / 2, labels[static_cast<std::size_t>(i)],
               i == active ? contrasting_ink(th.accent) : th.ink);
        x += tw;
    }
    return {std::move(p.image()), ControlCategory::Tabbar, std::nullopt};
}

Sprite table(const Theme& th, Rng& rng) {
    const int cols = uniform_int(rng, 3, 5);
    const int rows = uniform_int(rng, 4, 8);
    const int col_w = uniform_int(rng, 80, 110);
    const int row_h = 24;
    const int w = cols * col_w + 1;
    const int h = rows * row_h + 1;
    Painter p(w, h, Rgb{255, 255, 255});
    p.rect(0, 0, w, row_h, mix(th.accent, th.surface, 0.3));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::string cell = r == 0 ? random_word(rng) : random_number(rng, uniform_int(rng, 1, 5));
            p.text(c * col_w + 6, r * row_h + 5, cell.substr(0, 7), th.ink);
        }
    for (int r = 0; r <= rows; ++r) p.rect(0, r * row_h, w, r * row_h + 1, th.muted);
    for (int c = 0; c <= cols; ++c) p.rect(c * col_w, 0, c * col_w + 1, h, th.muted);
    return {std::move(p.image()), ControlCategory::Table, std::nullopt};
}

Sprite radio(const Theme& th, Rng& rng, bool selected) {
    const int size = uniform_int(rng, 14, 22);
    Painter p(size, size, th.background);
    const double c = size / 2.0;
    p.disc(c, c, c, Rgb{255, 255, 255});
    p.ring(c, c, c, 1.6, th.ink);
    if (selected) p.disc(c, c, c * 0.45, th.accent);
    return {std::move(p.image()),
            selected ? ControlCategory::RadioSelected : ControlCategory::RadioUnselected,
            std::nullopt};
}

Sprite checkbox(const Theme& th, Rng& rng, bool checked) {
    const int size = uniform_int(rng, 14, 22);
    Painter p(size, size, checked ? th.accent : Rgb{255, 255, 255});
    p.border(th.ink, size > 18 ? 2 : 1);
    if (checked) {
        const Rgb mark = contrasting_ink(th.accent);
        p.line(size / 5, size / 2, size * 2 / 5, size * 3 / 4, mark, 2);
        p.line(size * 2 / 5, size * 3 / 4, size * 4 / 5, size / 4, mark, 2);
    }
    return {std::move(p.image()),
            checked ? ControlCategory::CheckboxChecked : ControlCategory::CheckboxUnchecked,
            std::nullopt};
}

Sprite tree(const Theme& th, Rng& rng) {
    const int rows = uniform_int(rng, 5, 10);
    const int row_h = 22;
    const int w = uniform_int(rng, 160, 240);
    const int h = rows * row_h + 4;
    Painter p(w, h, th.surface);
    int depth = 0;
    for (int r = 0; r < rows; ++r) {
        const int y = 2 + r * row_h;
        const int x = 6 + depth * 16;
        p.rect(x, y + 6, x + 8, y + 14, th.muted);
        p.text(x + 14, y + 4, random_word(rng), th.ink);
        depth = std::clamp(depth + uniform_int(rng, -1, 1), 0, 4);
    }
    p.border(th.muted);
    return {std::move(p.image()), ControlCategory::Tree, std::nullopt};
}

Sprite image(Rng& rng) {
    const int w = uniform_int(rng, 100, 260);
    const int h = uniform_int(rng, 80, 190);
    const Rgb top = random_color(rng, 30, 230);
    const Rgb bottom = random_color(rng, 30, 230);
    Painter p(w, h, top);
    for (int y = 0; y < h; ++y) p.rect(0, y, w, y + 1, mix(top, bottom, static_cast<double>(y) / h));
    const int blobs = uniform_int(rng, 2, 6);
    for (int i = 0; i < blobs; ++i) {
        p.disc(uniform_real(rng, 0, w), uniform_real(rng, 0, h), uniform_real(rng, 8, h / 2.0),
               random_color(rng, 0, 255));
    }
    return {std::move(p.image()), ControlCategory::Image, std::nullopt};
}

Sprite text_control(const Theme& th, Rng& rng) {
    std::string s = random_words(rng, 1, 4);
    auto sprite = text_sprite(ControlCategory::Text, s, th.ink, th.background, kScale);
    sprite.text = std::move(s);
    return sprite;
}

Sprite label(const Theme& th, Rng& rng) {
    return text_sprite(ControlCategory::LabelOfTextArea, random_word(rng) + ":", th.ink,
                       th.background, kScale);
}

Sprite description_list(const Theme& th, Rng& rng) {
    const int items = uniform_int(rng, 2, 4);
    const int w = uniform_int(rng, 190, 300);
    const int h = items * 2 * kLineHeight + 6;
    Painter p(w, h, th.background);
    for (int i = 0; i < items; ++i) {
        const int y = 3 + i * 2 * kLineHeight;
        p.text(4, y, random_word(rng), th.ink);
        p.text(28, y + kLineHeight, random_words(rng, 1, 2), th.muted);
    }
    return {std::move(p.image()), ControlCategory::DescriptionList, std::nullopt};
}

Sprite legend(const Theme& th, Rng& rng) {
    const int items = uniform_int(rng, 2, 4);
    const int w = uniform_int(rng, 110, 150);
    const int h = items * kLineHeight + 8;
    Painter p(w, h, th.surface);
    p.border(th.muted);
    for (int i = 0; i < items; ++i) {
        const int y = 4 + i * kLineHeight;
        p.rect(6, y + 3, 16, y + 13, saturated_color(rng));
        p.text(22, y + 1, random_word(rng), th.ink);
    }
    return {std::move(p.image()), ControlCategory::Legend, std::nullopt};
}

Sprite horizontal_axis(const Theme& th, Rng& rng) {
    const int ticks = uniform_int(rng, 4, 8);
    const int spacing = uniform_int(rng, 40, 60);
    const int w = ticks * spacing + 12;
    const int h = kGlyphHeight * kScale + 12;
    Painter p(w, h, th.background);
    p.rect(0, 0, w, 2, th.ink);
    const int step = uniform_int(rng, 1, 5) * 10;
    for (int i = 0; i <= ticks; ++i) {
        const int x = 2 + i * spacing;
        p.rect(x, 0, x + 2, 6, th.ink);
        if (i < ticks) p.text(x + 2, 9, std::to_string(i * step), th.muted);
    }
    return {std::move(p.image()), ControlCategory::HorizontalAxis, std::nullopt};
}

Sprite vertical_axis(const Theme& th, Rng& rng) {
    const int ticks = uniform_int(rng, 4, 7);
    const int spacing = uniform_int(rng, 28, 40);
    const int h = ticks * spacing + 12;
    const int w = 3 * kAdvance + 10;
    Painter p(w, h, th.background);
    p.rect(w - 2, 0, w, h, th.ink);
    const int step = uniform_int(rng, 1, 9) * 5;
    for (int i = 0; i <= ticks; ++i) {
        const int y = 2 + i * spacing;
        p.rect(w - 7, y, w, y + 2, th.ink);
        if (i < ticks) p.text(1, y + 2, std::to_string((ticks - i) * step).substr(0, 3), th.muted);
    }
    return {std::move(p.image()), ControlCategory::VerticalAxis, std::nullopt};
}

Sprite chart(const Theme& th, Rng& rng) {
    const int bars = uniform_int(rng, 4, 10);
    const int bar_w = uniform_int(rng, 14, 28);
    const int gap = uniform_int(rng, 6, 14);
    const int w = bars * (bar_w + gap) + gap + 4;
    const int h = uniform_int(rng, 140, 230);
    Painter p(w, h, Rgb{255, 255, 255});
    const Rgb series = chance(rng, 0.5) ? th.accent : saturated_color(rng);
    for (int i = 0; i < bars; ++i) {
        const int bh = uniform_int(rng, h / 10, h - 12);
        const int x = 2 + gap + i * (bar_w + gap);
        p.rect(x, h - 2 - bh, x + bar_w, h - 2, i % 3 == 2 ? mix(series, th.ink, 0.4) : series);
    }
    p.rect(0, h - 2, w, h, th.ink);
    p.rect(0, 0, 2, h, th.ink);
    return {std::move(p.image()), ControlCategory::Chart, std::nullopt};
}

Sprite graph(const Theme& th, Rng& rng) {
    const int w = uniform_int(rng, 200, 340);
    const int h = uniform_int(rng, 140, 230);
    Painter p(w, h, Rgb{252, 252, 252});
    for (int gy = h / 4; gy < h; gy += h / 4) p.rect(0, gy, w, gy + 1, mix(th.muted, Rgb{255, 255, 255}, 0.6));
    const int series = uniform_int(rng, 1, 3);
    for (int s = 0; s < series; ++s) {
        const Rgb c = s == 0 ? th.accent : saturated_color(rng);
        const int points = uniform_int(rng, 5, 12);
        int px = 0;
        int py = uniform_int(rng, 8, h - 8);
        for (int i = 1; i <= points; ++i) {
            const int nx = i * (w - 3) / points;
            const int ny = std::clamp(py + uniform_int(rng, -h / 3, h / 3), 6, h - 8);
            p.line(px, py, nx, ny, c, 2);
            px = nx;
            py = ny;
        }
    }
    p.border(th.muted);
    return {std::move(p.image()), ControlCategory::Graph, std::nullopt};
}

Sprite plot_title(const Theme& th, Rng& rng) {
    const std::string s = random_words(rng, 1, 3);
    return text_sprite(ControlCategory::PlotTitle, s, mix(th.ink, th.accent, 0.3), th.background, 3);
}

Sprite date_area(const Theme& th, Rng& rng) {
    const std::string date = "20" + random_number(rng, 2) + "-" +
                             std::to_string(uniform_int(rng, 10, 12)) + "-" +
                             std::to_string(uniform_int(rng, 10, 28));
    const int w = text_width(date, kScale) + 40;
    const int h = uniform_int(rng, 28, 34);
    Painter p(w, h, Rgb{255, 255, 255});
    p.border(th.muted);
    p.text(6, (h - kGlyphHeight * kScale) / 2, date, th.ink);
    p.rect(w - 26, 7, w - 8, h - 6, th.accent);
    p.rect(w - 24, 12, w - 10, h - 8, Rgb{255, 255, 255});
    return {std::move(p.image()), ControlCategory::DateArea, std::nullopt};
}

}  // namespace

Theme random_theme(Rng& rng) {
    Theme t;
    if (chance(rng, 0.8)) {
        t.background = random_color(rng, 228, 250);
        t.surface = mix(t.background, random_color(rng, 160, 255), 0.35);
        t.ink = random_color(rng, 10, 50);
        t.muted = random_color(rng, 120, 160);
    } else {
        t.background = random_color(rng, 18, 40);
        t.surface = mix(t.background, random_color(rng, 60, 120), 0.5);
        t.ink = random_color(rng, 215, 245);
        t.muted = random_color(rng, 100, 140);
    }
    t.accent = saturated_color(rng);
    if (t.surface == t.background) t.surface.r ^= 8;
    return t;
}

int text_width(std::string_view text, int scale) noexcept {
    if (text.empty()) return 0;
    return static_cast<int>(text.size()) * (kGlyphWidth + 1) * scale - scale;
}

void draw_text(Raster& canvas, int x, int y, std::string_view text, Rgb color, int scale) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto bits = glyph_bits(static_cast<unsigned char>(text[i]));
        const int gx = x + static_cast<int>(i) * (kGlyphWidth + 1) * scale;
        for (int row = 0; row < kGlyphHeight; ++row)
            for (int col = 0; col < kGlyphWidth; ++col)
                if ((bits >> (row * kGlyphWidth + col)) & 1u)
                    canvas.fill({gx + col * scale, y + row * scale, gx + (col + 1) * scale,
                                 y + (row + 1) * scale},
                                color);
    }
}

std::string random_words(Rng& rng, int min_words, int max_words) {
    const int n = uniform_int(rng, min_words, max_words);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += random_word(rng);
    }
    return out;
}

Sprite render_control(ControlCategory category, const Theme& theme, Rng& rng) {
    Sprite s;
    switch (category) {
        case ControlCategory::Icon: s = icon(theme, rng); break;
        case ControlCategory::Dropdown: s = dropdown(theme, rng); break;
        case ControlCategory::Button: s = button(theme, rng); break;
        case ControlCategory::Menu: s = menu(theme, rng); break;
        case ControlCategory::Input: s = input(theme, rng); break;
        case ControlCategory::List: s = list(theme, rng); break;
        case ControlCategory::Tabbar: s = tabbar(theme, rng); break;
        case ControlCategory::Table: s = table(theme, rng); break;
        case ControlCategory::RadioSelected: s = radio(theme, rng, true); break;
        case ControlCategory::RadioUnselected: s = radio(theme, rng, false); break;
        case ControlCategory::CheckboxUnchecked: s = checkbox(theme, rng, false); break;
        case ControlCategory::CheckboxChecked: s = checkbox(theme, rng, true); break;
        case ControlCategory::Tree: s = tree(theme, rng); break;
        case ControlCategory::Image: s = image(rng); break;
        case ControlCategory::Text: s = text_control(theme, rng); break;
        case ControlCategory::LabelOfTextArea: s = label(theme, rng); break;
        case ControlCategory::DescriptionList: s = description_list(theme, rng); break;
        case ControlCategory::Legend: s = legend(theme, rng); break;
        case ControlCategory::HorizontalAxis: s = horizontal_axis(theme, rng); break;
        case ControlCategory::Chart: s = chart(theme, rng); break;
        case ControlCategory::PlotTitle: s = plot_title(theme, rng); break;
        case ControlCategory::Graph: s = graph(theme, rng); break;
        case ControlCategory::VerticalAxis: s = vertical_axis(theme, rng); break;
        case ControlCategory::DateArea: s = date_area(theme, rng); break;
    }
    make_solid(s.pixels, theme.background);
    return s;
}

namespace {

struct Weighted {
    ControlCategory category;
    int weight;
};

constexpr std::array<Weighted, kCategoryCount> kLayoutWeights = {{
    {ControlCategory::Text, 20},
    {ControlCategory::Button, 10},
    {ControlCategory::Icon, 10},
    {ControlCategory::Input, 7},
    {ControlCategory::LabelOfTextArea, 6},
    {ControlCategory::Menu, 6},
    {ControlCategory::Image, 5},
    {ControlCategory::Dropdown, 5},
    {ControlCategory::CheckboxUnchecked, 4},
    {ControlCategory::CheckboxChecked, 3},
    {ControlCategory::RadioUnselected, 3},
    {ControlCategory::RadioSelected, 2},
    {ControlCategory::DateArea, 3},
    {ControlCategory::List, 2},
    {ControlCategory::Tabbar, 2},
    {ControlCategory::Table, 2},
    {ControlCategory::Tree, 1},
    {ControlCategory::DescriptionList, 2},
    {ControlCategory::Legend, 2},
    {ControlCategory::HorizontalAxis, 1},
    {ControlCategory::Chart, 2},
    {ControlCategory::PlotTitle, 2},
    {ControlCategory::Graph, 2},
    {ControlCategory::VerticalAxis, 1},
}};

ControlCategory weighted_category(Rng& rng) {
    int total = 0;
    for (const auto& w : kLayoutWeights) total += w.weight;
    int pick = uniform_int(rng, 0, total - 1);
    for (const auto& w : kLayoutWeights) {
        if (pick < w.weight) return w.category;
        pick -= w.weight;
    }
    return ControlCategory::Text;
}

}  // namespace

Layout synthesize_layout(int width, int height, Rng& rng) {
    Layout layout;
    layout.theme = random_theme(rng);
    layout.image = Raster(width, height, layout.theme.background);
    layout.detections.image_width = width;
    layout.detections.image_height = height;

    constexpr int kMargin = 16;
    ControlId next_id = 0;
    int y = kMargin;
    while (y < height - kMargin - 12) {
        int x = kMargin + uniform_int(rng, 0, 60);
        int row_height = 0;
        int misses = 0;
        while (misses < 3) {
            auto sprite = render_control(weighted_category(rng), layout.theme, rng);
            const int w = sprite.pixels.width();
            const int h = sprite.pixels.height();
            if (x + w > width - kMargin || y + h > height - kMargin) {
                ++misses;
                continue;
            }
            const int dy = uniform_int(rng, 0, 6);
            if (y + dy + h > height - kMargin) {
                ++misses;
                continue;
            }
            layout.image.blit(sprite.pixels, x, y + dy);
            Control c{next_id++, {x, y + dy, x + w, y + dy + h}, sprite.category, sprite.text};
            layout.detections.controls.push_back(std::move(c));
            row_height = std::max(row_height, h + dy);
            x += w + uniform_int(rng, 14, 60);
            if (chance(rng, 0.3)) x += uniform_int(rng, 80, 320);
        }
        if (row_height == 0) break;
        y += row_height + uniform_int(rng, 16, 48);
        if (chance(rng, 0.2)) y += uniform_int(rng, 30, 120);
    }
    return layout;
}

}  // namespace uidiff::datagen
