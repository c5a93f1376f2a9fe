#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "uidiff/similarity.hpp"

namespace uidiff::testing {

Control make_control(ControlId id, BBox box, ControlCategory category,
                     std::optional<std::string> text) {
    return Control{id, box, category, std::move(text)};
}

DetectionSet make_dets(int width, int height, std::vector<Control> controls) {
    DetectionSet d;
    d.image_width = width;
    d.image_height = height;
    d.controls = std::move(controls);
    return d;
}

Raster random_texture(int width, int height, int cell, Rng& rng) {
    Raster r(width, height);
    for (int cy = 0; cy < height; cy += cell) {
        for (int cx = 0; cx < width; cx += cell) {
            const Rgb c{static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                        static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                        static_cast<std::uint8_t>(uniform_int(rng, 0, 255))};
            r.fill({cx, cy, std::min(cx + cell, width), std::min(cy + cell, height)}, c);
        }
    }
    return r;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::current_path() / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

DetectionSet random_dets(Rng& rng, int max_controls, int width, int height) {
    const int n = uniform_int(rng, 0, max_controls);
    std::vector<Control> cs;
    for (int i = 0; i < n; ++i) {
        const int w = uniform_int(rng, 1, 60);
        const int h = uniform_int(rng, 1, 40);
        const int x = uniform_int(rng, 0, width - w);
        const int y = uniform_int(rng, 0, height - h);
        const auto cat = all_categories()[static_cast<std::size_t>(uniform_int(rng, 0, 23))];
        std::optional<std::string> text;
        if (cat == ControlCategory::Text) text = "t" + std::to_string(i);
        cs.push_back(make_control(static_cast<ControlId>(i), {x, y, x + w, y + h}, cat, text));
    }
    return make_dets(width, height, std::move(cs));
}

std::vector<std::size_t> reference_neighbors(const DetectionSet& dets, std::size_t target, int k) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < dets.controls.size(); ++i) {
        if (i != target) others.push_back(i);
    }
    const auto& t = dets.controls[target].bbox;
    auto dist = [&](std::size_t i) {
        const auto& b = dets.controls[i].bbox;
        const double d[4] = {double(b.x1 - t.x1), double(b.y1 - t.y1), double(b.x2 - t.x2),
                             double(b.y2 - t.y2)};
        return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3]);
    };
    // Insertion sort keeps the oracle free of std::sort comparator subtleties.
    for (std::size_t i = 1; i < others.size(); ++i) {
        for (std::size_t j = i; j > 0; --j) {
            const auto a = others[j - 1];
            const auto b = others[j];
            const bool swap = dist(b) < dist(a) ||
                              (dist(b) == dist(a) && dets.controls[b].id < dets.controls[a].id);
            if (!swap) break;
            std::swap(others[j - 1], others[j]);
        }
    }
    if (others.size() > static_cast<std::size_t>(k)) others.resize(static_cast<std::size_t>(k));
    return others;
}

namespace {

constexpr ControlCategory kInstanceCategories[] = {ControlCategory::Button, ControlCategory::Icon,
                                                   ControlCategory::Text};
const char* const kWords[] = {"save", "saved", "open", "close"};

std::optional<std::string> text_for(ControlCategory cat, Rng& rng) {
    if (cat != ControlCategory::Text) return std::nullopt;
    return std::string(kWords[uniform_int(rng, 0, 3)]);
}

// Finds a spot for a w x h box that does not overlap `taken`; nullopt after 50 tries.
std::optional<BBox> free_spot(Rng& rng, int width, int height, int w, int h,
                              const std::vector<BBox>& taken) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        const int x = uniform_int(rng, 0, width - w);
        const int y = uniform_int(rng, 0, height - h);
        const BBox b{x, y, x + w, y + h};
        if (std::none_of(taken.begin(), taken.end(), [&](const BBox& t) { return overlaps(t, b); }))
            return b;
    }
    return std::nullopt;
}

}  // namespace

MatchingInstance random_matching_instance(Rng& rng, int max_controls) {
    constexpr int kW = 160;
    constexpr int kH = 120;
    MatchingInstance inst;
    inst.image_a = Raster(kW, kH, Rgb{250, 250, 250});
    inst.image_b = Raster(kW, kH, Rgb{250, 250, 250});
    inst.k = uniform_int(rng, 1, 5);
    inst.params.h = uniform_int(rng, 0, 3) == 0 ? 20 : 10;
    inst.params.ns = uniform_real(rng, 0.3, 0.95);
    inst.params.ts = 0.5;
    inst.params.context_depth = uniform_int(rng, 1, 3);
    inst.params.layout_tolerance = uniform_int(rng, 0, 1) ? 0.25 : 1.0;

    std::vector<Control> ca;
    std::vector<BBox> taken_a;
    const int na = uniform_int(rng, 0, max_controls);
    for (int i = 0; i < na; ++i) {
        const int w = uniform_int(rng, 8, 30);
        const int h = uniform_int(rng, 8, 20);
        auto spot = free_spot(rng, kW, kH, w, h, taken_a);
        if (!spot) continue;
        const auto cat = kInstanceCategories[uniform_int(rng, 0, 2)];
        inst.image_a.blit(random_texture(w, h, uniform_int(rng, 2, 6), rng), spot->x1, spot->y1);
        ca.push_back(make_control(static_cast<ControlId>(ca.size()), *spot, cat, text_for(cat, rng)));
        taken_a.push_back(*spot);
    }

    std::vector<Control> cb;
    std::vector<BBox> taken_b;
    for (const auto& c : ca) {
        const int roll = uniform_int(rng, 0, 9);
        if (roll == 0) continue;  // dropped
        BBox box = c.bbox;
        if (roll <= 2) {
            auto spot = free_spot(rng, kW, kH, c.bbox.width(), c.bbox.height(), taken_b);
            if (!spot) continue;
            box = *spot;
        } else if (std::any_of(taken_b.begin(), taken_b.end(),
                               [&](const BBox& t) { return overlaps(t, box); })) {
            continue;
        }
        inst.image_b.blit(inst.image_a.crop(c.bbox), box.x1, box.y1);
        auto text = c.text;
        if (text && uniform_int(rng, 0, 3) == 0) text = text_for(c.category, rng);
        cb.push_back(make_control(static_cast<ControlId>(cb.size()), box, c.category, text));
        taken_b.push_back(box);
    }
    const int extra = uniform_int(rng, 0, 2);
    for (int i = 0; i < extra && static_cast<int>(cb.size()) < max_controls; ++i) {
        const int w = uniform_int(rng, 8, 30);
        const int h = uniform_int(rng, 8, 20);
        auto spot = free_spot(rng, kW, kH, w, h, taken_b);
        if (!spot) continue;
        const auto cat = kInstanceCategories[uniform_int(rng, 0, 2)];
        if (!ca.empty() && uniform_int(rng, 0, 1)) {
            // A look-alike of an existing control.
            const auto& src = ca[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ca.size()) - 1))];
            auto s2 = free_spot(rng, kW, kH, src.bbox.width(), src.bbox.height(), taken_b);
            if (!s2) continue;
            inst.image_b.blit(inst.image_a.crop(src.bbox), s2->x1, s2->y1);
            cb.push_back(make_control(static_cast<ControlId>(cb.size()), *s2, src.category, src.text));
            taken_b.push_back(*s2);
            continue;
        }
        inst.image_b.blit(random_texture(w, h, uniform_int(rng, 2, 6), rng), spot->x1, spot->y1);
        cb.push_back(make_control(static_cast<ControlId>(cb.size()), *spot, cat, text_for(cat, rng)));
        taken_b.push_back(*spot);
    }
    inst.dets_a = make_dets(kW, kH, std::move(ca));
    inst.dets_b = make_dets(kW, kH, std::move(cb));
    return inst;
}

namespace {

struct Reference {
    const MatchingInstance& in;
    std::vector<std::vector<std::size_t>> ng_a;
    std::vector<std::vector<std::size_t>> ng_b;
    std::vector<std::vector<double>> leaf;

    explicit Reference(const MatchingInstance& instance) : in(instance) {
        const auto& a = in.dets_a.controls;
        const auto& b = in.dets_b.controls;
        for (std::size_t v = 0; v < a.size(); ++v) ng_a.push_back(reference_neighbors(in.dets_a, v, in.k));
        for (std::size_t w = 0; w < b.size(); ++w) ng_b.push_back(reference_neighbors(in.dets_b, w, in.k));
        leaf.assign(a.size(), std::vector<double>(b.size(), 0.0));
        for (std::size_t v = 0; v < a.size(); ++v) {
            for (std::size_t w = 0; w < b.size(); ++w) {
                leaf[v][w] = similarity::base_similarity(a[v], b[w], in.image_a, in.image_b, in.params);
            }
        }
    }

    static double cx(const BBox& b) { return 0.5 * (b.x1 + b.x2); }
    static double cy(const BBox& b) { return 0.5 * (b.y1 + b.y2); }

    bool same_place(std::size_t v, std::size_t w, std::size_t p, std::size_t q) const {
        if (in.params.layout_tolerance >= 1.0) return true;
        const auto& A = in.dets_a.controls;
        const auto& B = in.dets_b.controls;
        const double sx = cx(A[p].bbox) - cx(A[v].bbox);
        const double sy = cy(A[p].bbox) - cy(A[v].bbox);
        const double tx = cx(B[q].bbox) - cx(B[w].bbox);
        const double ty = cy(B[q].bbox) - cy(B[w].bbox);
        const double reach = std::max(std::hypot(sx, sy), std::hypot(tx, ty));
        return std::hypot(sx - tx, sy - ty) <= in.params.layout_tolerance * reach + 4.0;
    }

    double context(std::size_t v, std::size_t w, int depth, std::vector<bool>& seen_a,
                   std::vector<bool>& seen_b) const {
        if (depth == 0 || seen_a[v] || seen_b[w]) return leaf[v][w];
        seen_a[v] = true;
        seen_b[w] = true;
        if (ng_a[v].empty() || ng_b[w].empty()) return leaf[v][w];
        std::vector<double> row(ng_a[v].size(), 0.0);
        std::vector<double> col(ng_b[w].size(), 0.0);
        for (std::size_t i = 0; i < ng_a[v].size(); ++i) {
            for (std::size_t j = 0; j < ng_b[w].size(); ++j) {
                const auto p = ng_a[v][i];
                const auto q = ng_b[w][j];
                if (in.dets_a.controls[p].category != in.dets_b.controls[q].category) continue;
                if (!same_place(v, w, p, q)) continue;
                const double s = context(p, q, depth - 1, seen_a, seen_b);
                if (s > row[i]) row[i] = s;
                if (s > col[j]) col[j] = s;
            }
        }
        double rs = 0.0;
        for (double s : row) rs += s;
        double cs = 0.0;
        for (double s : col) cs += s;
        return std::clamp(0.5 * (rs / static_cast<double>(row.size()) + cs / static_cast<double>(col.size())),
                          0.0, 1.0);
    }

    bool sizes_agree(const BBox& a, const BBox& b) const {
        const double t = in.params.size_tolerance;
        return std::abs(a.width() - b.width()) <= t * std::max(a.width(), b.width()) &&
               std::abs(a.height() - b.height()) <= t * std::max(a.height(), b.height());
    }
};

}  // namespace

matching::MatchResult reference_assign(const MatchingInstance& instance) {
    const Reference ref(instance);
    const auto& A = instance.dets_a.controls;
    const auto& B = instance.dets_b.controls;

    std::vector<matching::PairScore> candidates;
    for (std::size_t v = 0; v < A.size(); ++v) {
        for (std::size_t w = 0; w < B.size(); ++w) {
            if (A[v].category != B[w].category || ref.leaf[v][w] <= 0.0) continue;
            if (!ref.sizes_agree(A[v].bbox, B[w].bbox)) continue;
            std::vector<bool> seen_a(A.size(), false);
            std::vector<bool> seen_b(B.size(), false);
            const double ctx = ref.context(v, w, instance.params.context_depth, seen_a, seen_b);
            const double score = 0.5 * (ref.leaf[v][w] + ctx);
            if (score > instance.params.ns) candidates.push_back({A[v].id, B[w].id, score});
        }
    }

    matching::MatchResult out;
    std::vector<bool> used_a(A.size(), false);
    std::vector<bool> used_b(B.size(), false);
    auto index_of = [](const std::vector<Control>& cs, ControlId id) {
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (cs[i].id == id) return i;
        }
        return cs.size();
    };
    for (;;) {
        const matching::PairScore* best = nullptr;
        for (const auto& c : candidates) {
            if (used_a[index_of(A, c.source)] || used_b[index_of(B, c.target)]) continue;
            if (!best || c.score > best->score ||
                (c.score == best->score &&
                 (c.source < best->source || (c.source == best->source && c.target < best->target)))) {
                best = &c;
            }
        }
        if (!best) break;
        used_a[index_of(A, best->source)] = true;
        used_b[index_of(B, best->target)] = true;
        out.matches.push_back(*best);
    }
    std::sort(out.matches.begin(), out.matches.end(),
              [](const matching::PairScore& x, const matching::PairScore& y) { return x.source < y.source; });
    for (std::size_t v = 0; v < A.size(); ++v) {
        if (!used_a[v]) out.unmatched_source.push_back(A[v].id);
    }
    for (std::size_t w = 0; w < B.size(); ++w) {
        if (!used_b[w]) out.unmatched_target.push_back(B[w].id);
    }
    return out;
}

}  // namespace uidiff::testing
