#include "uidiff/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "uidiff/baselines.hpp"
#include "uidiff/detection.hpp"
#include "uidiff/image_io.hpp"
#include "uidiff/parallel.hpp"

namespace uidiff::datagen {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 8> kKindNames = {
    "ADD_CONTROL", "CHANGE_LOCATION", "CHANGE_COLOR",   "DUPLICATE",
    "REMOVE",      "RESIZE_SMALLER",  "RESIZE_LARGER",  "SWAP_CONTROLS",
};

constexpr std::array<std::string_view, 4> kSideNames = {"left", "right", "top", "bottom"};

json box_json(const BBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

BBox box_from_json(const json& j) {
    const auto v = j.get<std::vector<int>>();
    if (v.size() != 4) throw SchemaError("bbox must have 4 entries");
    return {v[0], v[1], v[2], v[3]};
}

json boxes_json(const std::vector<BBox>& boxes) {
    json out = json::array();
    for (const auto& b : boxes) out.push_back(box_json(b));
    return out;
}

std::vector<BBox> boxes_from_json(const json& j) {
    std::vector<BBox> out;
    for (const auto& item : j) out.push_back(box_from_json(item));
    return out;
}

bool contains_id(const std::vector<ControlId>& ids, ControlId id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Control& control_by_id(DetectionSet& dets, ControlId id) {
    return dets.controls[*dets.find(id)];
}

ControlId next_id(const PairState& s) {
    ControlId next = 0;
    for (const auto& c : s.original_dets.controls) next = std::max(next, c.id + 1);
    for (const auto& c : s.changed_dets.controls) next = std::max(next, c.id + 1);
    return next;
}

// Original controls still unmodified in the changed image.
std::vector<ControlId> eligible(const PairState& s) {
    std::vector<ControlId> out;
    for (const auto& c : s.changed_dets.controls) {
        if (s.original_dets.find(c.id) && !contains_id(s.touched, c.id)) out.push_back(c.id);
    }
    return out;
}

ControlId pick(const std::vector<ControlId>& ids, Rng& rng) {
    return ids[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ids.size()) - 1))];
}

// Boxes a new placement must keep clear of: current controls and every ground-truth
// region so far, grown by the placement margin.
std::vector<BBox> blocked(const PairState& s, const std::vector<ControlId>& except) {
    std::vector<BBox> out;
    for (const auto& c : s.changed_dets.controls) {
        if (!contains_id(except, c.id)) out.push_back(c.bbox.expanded(kPlacementMargin));
    }
    for (const auto& b : s.gt_original) out.push_back(b.expanded(kPlacementMargin));
    for (const auto& b : s.gt_changed) out.push_back(b.expanded(kPlacementMargin));
    return out;
}

bool is_free(const BBox& box, const std::vector<BBox>& blocked_boxes, const Raster& canvas) {
    if (!box.inside(canvas.width(), canvas.height())) return false;
    return std::none_of(blocked_boxes.begin(), blocked_boxes.end(),
                        [&](const BBox& b) { return overlaps(box, b); });
}

BBox random_spot(int w, int h, const std::vector<BBox>& blocked_boxes, const Raster& canvas,
                 Rng& rng) {
    if (w <= canvas.width() && h <= canvas.height()) {
        for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
            const int x = uniform_int(rng, 0, canvas.width() - w);
            const int y = uniform_int(rng, 0, canvas.height() - h);
            const BBox box{x, y, x + w, y + h};
            if (is_free(box, blocked_boxes, canvas)) return box;
        }
    }
    throw PlacementFailed("no free spot for a " + std::to_string(w) + "x" + std::to_string(h) +
                          " control");
}

void fill_vacancy(Raster& image, const BBox& box) {
    image.fill(box, ring_mode(image, box, kFillRing));
}

void insert_control(DetectionSet& dets, Control c) {
    const auto it = std::lower_bound(dets.controls.begin(), dets.controls.end(), c.id,
                                     [](const Control& x, ControlId id) { return x.id < id; });
    dets.controls.insert(it, std::move(c));
}

void add_control(PairState& s, Rng& rng) {
    const auto& categories = all_categories();
    const auto category =
        categories[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(categories.size()) - 1))];
    auto sprite = render_control(category, s.theme, rng);
    const BBox spot = random_spot(sprite.pixels.width(), sprite.pixels.height(), blocked(s, {}),
                                  s.changed, rng);
    const ControlId id = next_id(s);
    s.changed.blit(sprite.pixels, spot.x1, spot.y1);
    insert_control(s.changed_dets, {id, spot, category, sprite.text});
    s.gt_changed.push_back(spot);
    s.applied.push_back({ChangeKind::AddControl,
                         {{"control", id}, {"category", std::string(uidiff::to_string(category))},
                          {"bbox", box_json(spot)}}});
}

void change_location(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.empty()) throw PlacementFailed("no control to move");
    const ControlId id = pick(ids, rng);
    const BBox old_box = control_by_id(s.changed_dets, id).bbox;
    const BBox spot = random_spot(old_box.width(), old_box.height(), blocked(s, {}), s.changed, rng);
    const Raster patch = s.changed.crop(old_box);
    fill_vacancy(s.changed, old_box);
    s.changed.blit(patch, spot.x1, spot.y1);
    control_by_id(s.changed_dets, id).bbox = spot;
    s.touched.push_back(id);
    s.gt_original.push_back(old_box);
    s.gt_changed.push_back(spot);
    s.applied.push_back({ChangeKind::ChangeLocation,
                         {{"control", id}, {"from", box_json(old_box)}, {"to", box_json(spot)}}});
}

void change_color(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.empty()) throw PlacementFailed("no control to recolour");
    const ControlId id = pick(ids, rng);
    const BBox box = control_by_id(s.changed_dets, id).bbox;

    // Inverted channels, then a random channel order; every colour changes.
    std::array<int, 3> order = {0, 1, 2};
    for (int i = 2; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(uniform_int(rng, 0, i))]);
    std::map<std::uint32_t, Rgb> remap;
    for (int y = box.y1; y < box.y2; ++y) {
        for (int x = box.x1; x < box.x2; ++x) {
            const Rgb old = s.changed.at(x, y);
            auto it = remap.find(pack(old));
            if (it == remap.end()) {
                const std::array<std::uint8_t, 3> inv = {static_cast<std::uint8_t>(255 - old.r),
                                                         static_cast<std::uint8_t>(255 - old.g),
                                                         static_cast<std::uint8_t>(255 - old.b)};
                Rgb next{inv[static_cast<std::size_t>(order[0])], inv[static_cast<std::size_t>(order[1])],
                         inv[static_cast<std::size_t>(order[2])]};
                if (next == old) next = {inv[0], inv[1], inv[2]};
                it = remap.emplace(pack(old), next).first;
            }
            s.changed.set(x, y, it->second);
        }
    }
    s.touched.push_back(id);
    s.gt_original.push_back(box);
    s.gt_changed.push_back(box);
    s.applied.push_back({ChangeKind::ChangeColor,
                         {{"control", id}, {"bbox", box_json(box)}, {"colors", remap.size()}}});
}

void duplicate(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.empty()) throw PlacementFailed("no control to duplicate");
    const ControlId id = pick(ids, rng);
    const Control source = control_by_id(s.changed_dets, id);
    const BBox spot = random_spot(source.bbox.width(), source.bbox.height(), blocked(s, {}),
                                  s.changed, rng);
    const ControlId copy_id = next_id(s);
    s.changed.blit(s.changed.crop(source.bbox), spot.x1, spot.y1);
    insert_control(s.changed_dets, {copy_id, spot, source.category, source.text});
    s.touched.push_back(id);
    s.gt_changed.push_back(spot);
    s.applied.push_back({ChangeKind::Duplicate,
                         {{"control", id}, {"copy", copy_id}, {"bbox", box_json(spot)}}});
}

void remove_control(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.empty()) throw PlacementFailed("no control to remove");
    const ControlId id = pick(ids, rng);
    const BBox box = control_by_id(s.changed_dets, id).bbox;
    fill_vacancy(s.changed, box);
    s.changed_dets.controls.erase(s.changed_dets.controls.begin() +
                                  static_cast<std::ptrdiff_t>(*s.changed_dets.find(id)));
    s.touched.push_back(id);
    s.gt_original.push_back(box);
    s.applied.push_back({ChangeKind::Remove, {{"control", id}, {"bbox", box_json(box)}}});
}

int scaled(int v, double f) { return std::max(1, static_cast<int>(std::lround(v * f))); }

void resize_smaller(PairState& s, Rng& rng) {
    std::vector<ControlId> ids = eligible(s);
    // Needs room to shrink in both directions.
    std::erase_if(ids, [&](ControlId id) {
        const auto& b = s.changed_dets.controls[*s.changed_dets.find(id)].bbox;
        return b.width() < 4 || b.height() < 4;
    });
    if (ids.empty()) throw PlacementFailed("no control to shrink");
    const ControlId id = pick(ids, rng);
    const BBox box = control_by_id(s.changed_dets, id).bbox;
    const double f = uniform_real(rng, 0.3, 0.8);
    const int w = std::min(box.width() - 1, scaled(box.width(), f));
    const int h = std::min(box.height() - 1, scaled(box.height(), f));
    const Raster small = resize_nearest(s.changed.crop(box), w, h);
    fill_vacancy(s.changed, box);
    s.changed.blit(small, box.x1, box.y1);
    const BBox next{box.x1, box.y1, box.x1 + w, box.y1 + h};
    control_by_id(s.changed_dets, id).bbox = next;
    s.touched.push_back(id);
    s.gt_original.push_back(box);
    s.gt_changed.push_back(box);
    s.applied.push_back({ChangeKind::ResizeSmaller,
                         {{"control", id}, {"factor", f}, {"from", box_json(box)}, {"to", box_json(next)}}});
}

void resize_larger(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.empty()) throw PlacementFailed("no control to enlarge");
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        const ControlId id = pick(ids, rng);
        const BBox box = control_by_id(s.changed_dets, id).bbox;
        const double f = uniform_real(rng, 1.3, 1.8);
        const int w = std::max(box.width() + 1, scaled(box.width(), f));
        const int h = std::max(box.height() + 1, scaled(box.height(), f));
        const BBox next{box.x1, box.y1, box.x1 + w, box.y1 + h};
        if (!is_free(next, blocked(s, {id}), s.changed)) continue;
        s.changed.blit(resize_nearest(s.changed.crop(box), w, h), box.x1, box.y1);
        control_by_id(s.changed_dets, id).bbox = next;
        s.touched.push_back(id);
        s.gt_original.push_back(next);
        s.gt_changed.push_back(next);
        s.applied.push_back({ChangeKind::ResizeLarger,
                             {{"control", id}, {"factor", f}, {"from", box_json(box)}, {"to", box_json(next)}}});
        return;
    }
    throw PlacementFailed("no room to enlarge a control");
}

constexpr double kSwapCoverage = 0.8;

bool similar_size(const BBox& a, const BBox& b) {
    const auto close = [](int x, int y) { return std::min(x, y) >= 0.9 * std::max(x, y); };
    return close(a.width(), b.width()) && close(a.height(), b.height());
}

BBox hull(const BBox& a, const BBox& b) {
    return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2), std::max(a.y2, b.y2)};
}

// The pixels that differ around `place` form one region overlapping each target box
// by at least `min_iou`.
bool coherent_change(const Raster& before, const Raster& after, const BBox& place,
                     const std::vector<BBox>& targets, double min_iou) {
    const auto area = intersection(place.expanded(1), before.bounds());
    if (!area) return false;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(area->area()), 0);
    for (int y = area->y1; y < area->y2; ++y)
        for (int x = area->x1; x < area->x2; ++x)
            mask[static_cast<std::size_t>((y - area->y1) * area->width() + (x - area->x1))] =
                before.at(x, y) != after.at(x, y);
    const auto regions = baselines::mask_regions(mask, area->width(), area->height());
    if (regions.size() != 1) return false;
    const BBox region = regions.front().translated(area->x1, area->y1);
    return std::all_of(targets.begin(), targets.end(),
                       [&](const BBox& t) { return iou(region, t) >= min_iou; });
}

void swap_controls(PairState& s, Rng& rng) {
    const auto ids = eligible(s);
    if (ids.size() < 2) throw PlacementFailed("fewer than two controls to swap");
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        const ControlId ia = pick(ids, rng);
        const ControlId ib = pick(ids, rng);
        if (ia == ib) continue;
        const BBox a = control_by_id(s.changed_dets, ia).bbox;
        const BBox b = control_by_id(s.changed_dets, ib).bbox;
        if (!similar_size(a, b)) continue;
        const BBox new_a{b.x1, b.y1, b.x1 + a.width(), b.y1 + a.height()};
        const BBox new_b{a.x1, a.y1, a.x1 + b.width(), a.y1 + b.height()};
        const auto others = blocked(s, {ia, ib});
        if (!is_free(new_a, others, s.changed) || !is_free(new_b, others, s.changed)) continue;
        if (overlaps(new_a.expanded(kPlacementMargin), new_b)) continue;

        Raster after = s.changed;
        fill_vacancy(after, a);
        fill_vacancy(after, b);
        after.blit(s.changed.crop(a), new_a.x1, new_a.y1);
        after.blit(s.changed.crop(b), new_b.x1, new_b.y1);
        // Look-alike controls would swap without a visible change.
        if (!coherent_change(s.changed, after, hull(a, new_b), {a, new_b}, kSwapCoverage) ||
            !coherent_change(s.changed, after, hull(b, new_a), {b, new_a}, kSwapCoverage))
            continue;
        s.changed = std::move(after);
        control_by_id(s.changed_dets, ia).bbox = new_a;
        control_by_id(s.changed_dets, ib).bbox = new_b;
        s.touched.push_back(ia);
        s.touched.push_back(ib);
        s.gt_original.push_back(a);
        s.gt_original.push_back(b);
        s.gt_changed.push_back(new_a);
        s.gt_changed.push_back(new_b);
        s.applied.push_back({ChangeKind::SwapControls,
                             {{"controls", {ia, ib}}, {"a", box_json(a)}, {"b", box_json(b)}}});
        return;
    }
    throw PlacementFailed("no swappable pair of controls");
}

}  // namespace

std::string_view to_string(ChangeKind kind) noexcept {
    return kKindNames[static_cast<std::size_t>(kind)];
}

ChangeKind parse_change_kind(std::string_view name) {
    const auto it = std::find(kKindNames.begin(), kKindNames.end(), name);
    if (it == kKindNames.end()) throw SchemaError("unknown change kind '" + std::string(name) + "'");
    return static_cast<ChangeKind>(it - kKindNames.begin());
}

std::string_view to_string(CutSide side) noexcept {
    return kSideNames[static_cast<std::size_t>(side)];
}

CutSide parse_cut_side(std::string_view name) {
    const auto it = std::find(kSideNames.begin(), kSideNames.end(), name);
    if (it == kSideNames.end()) throw SchemaError("unknown cut side '" + std::string(name) + "'");
    return static_cast<CutSide>(it - kSideNames.begin());
}

PairState start_pair(const Raster& image, const DetectionSet& dets, const Theme& theme) {
    PairState s;
    s.original = image;
    s.original_dets = dets;
    s.changed = image;
    s.changed_dets = dets;
    s.theme = theme;
    return s;
}

void apply_change(PairState& state, ChangeKind kind, Rng& rng) {
    // Work on a copy so a failed mutation leaves no trace.
    PairState next = state;
    switch (kind) {
        case ChangeKind::AddControl: add_control(next, rng); break;
        case ChangeKind::ChangeLocation: change_location(next, rng); break;
        case ChangeKind::ChangeColor: change_color(next, rng); break;
        case ChangeKind::Duplicate: duplicate(next, rng); break;
        case ChangeKind::Remove: remove_control(next, rng); break;
        case ChangeKind::ResizeSmaller: resize_smaller(next, rng); break;
        case ChangeKind::ResizeLarger: resize_larger(next, rng); break;
        case ChangeKind::SwapControls: swap_controls(next, rng); break;
    }
    state = std::move(next);
}

std::pair<int, int> cut_shift(const CutSpec& spec) noexcept {
    const int half = spec.amount / 2;
    switch (spec.side) {
        case CutSide::Left: return {-half, 0};
        case CutSide::Right: return {spec.amount - half, 0};
        case CutSide::Top: return {0, -half};
        case CutSide::Bottom: return {0, spec.amount - half};
    }
    return {0, 0};
}

namespace {

BBox kept_region(const CutSpec& spec, int width, int height) {
    switch (spec.side) {
        case CutSide::Left: return {spec.amount, 0, width, height};
        case CutSide::Right: return {0, 0, width - spec.amount, height};
        case CutSide::Top: return {0, spec.amount, width, height};
        case CutSide::Bottom: return {0, 0, width, height - spec.amount};
    }
    return {0, 0, width, height};
}

// Clipped and shifted box, or nullopt when less than half of it survives.
std::optional<BBox> carry_box(const BBox& box, const BBox& kept, std::pair<int, int> shift) {
    const auto clip = intersection(box, kept);
    if (!clip || 2 * clip->area() < box.area()) return std::nullopt;
    return clip->translated(shift.first, shift.second);
}

}  // namespace

CutResult cut_and_shift(const Raster& image, const DetectionSet& dets,
                        const std::vector<BBox>& gt, const CutSpec& spec) {
    const bool horizontal = spec.side == CutSide::Left || spec.side == CutSide::Right;
    const int limit = horizontal ? image.width() : image.height();
    if (spec.amount < 0 || spec.amount >= limit) {
        throw Error("cut amount " + std::to_string(spec.amount) + " must be below " +
                    std::to_string(limit));
    }
    CutResult out;
    if (spec.amount == 0) {
        out.image = image;
        out.dets = dets;
        out.gt = gt;
        return out;
    }
    const BBox kept = kept_region(spec, image.width(), image.height());
    const auto shift = cut_shift(spec);
    out.image = Raster(image.width(), image.height(), border_mode(image));
    out.image.blit(image.crop(kept), kept.x1 + shift.first, kept.y1 + shift.second);

    out.dets.image_width = dets.image_width;
    out.dets.image_height = dets.image_height;
    for (const auto& c : dets.controls) {
        const auto moved = carry_box(c.bbox, kept, shift);
        if (!moved) {
            out.dropped.push_back(c.id);
            continue;
        }
        if (moved->width() != c.bbox.width() || moved->height() != c.bbox.height()) {
            out.clipped.push_back(c.id);
        }
        Control copy = c;
        copy.bbox = *moved;
        out.dets.controls.push_back(std::move(copy));
    }
    for (const auto& b : gt) {
        if (const auto moved = carry_box(b, kept, shift)) out.gt.push_back(*moved);
    }
    return out;
}

GeneratedPair generate_pair(const BaseImage& base, std::uint64_t seed, bool cut) {
    Rng rng(seed);
    PairState state = start_pair(base.image, base.dets, base.theme);
    GeneratedPair pair;
    pair.seed = seed;

    const int wanted = uniform_int(rng, 1, kMaxMutations);
    constexpr int kMaxDraws = 64;
    for (int draw = 0; draw < kMaxDraws && static_cast<int>(state.applied.size()) < wanted; ++draw) {
        const auto kind = kAllChangeKinds[static_cast<std::size_t>(uniform_int(rng, 0, 7))];
        try {
            apply_change(state, kind, rng);
        } catch (const PlacementFailed&) {
            pair.skipped.push_back(kind);
        }
    }
    if (state.applied.empty()) throw Error("no mutation could be applied to the base image");

    if (cut) {
        CutSpec spec;
        spec.side = static_cast<CutSide>(uniform_int(rng, 0, 3));
        const bool horizontal = spec.side == CutSide::Left || spec.side == CutSide::Right;
        const int limit = horizontal ? state.changed.width() : state.changed.height();
        std::vector<int> amounts;
        for (const int a : kCutAmounts)
            if (a < limit) amounts.push_back(a);
        if (!amounts.empty()) {
            spec.amount = amounts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(amounts.size()) - 1))];
            auto result = cut_and_shift(state.changed, state.changed_dets, state.gt_changed, spec);
            // Untouched originals that left or lost part of themselves are changes too.
            for (const auto id : result.dropped) {
                if (contains_id(state.touched, id)) continue;
                if (const auto idx = state.original_dets.find(id))
                    state.gt_original.push_back(state.original_dets.controls[*idx].bbox);
            }
            for (const auto id : result.clipped) {
                if (contains_id(state.touched, id)) continue;
                if (const auto idx = state.original_dets.find(id)) {
                    state.gt_original.push_back(state.original_dets.controls[*idx].bbox);
                    result.gt.push_back(result.dets.controls[*result.dets.find(id)].bbox);
                }
            }
            state.changed = std::move(result.image);
            state.changed_dets = std::move(result.dets);
            state.gt_changed = std::move(result.gt);
            pair.cut = spec;
        }
    }

    pair.original = std::move(state.original);
    pair.original_dets = std::move(state.original_dets);
    pair.changed = std::move(state.changed);
    pair.changed_dets = std::move(state.changed_dets);
    pair.applied = std::move(state.applied);
    pair.gt_changes_original = std::move(state.gt_original);
    pair.gt_changes_changed = std::move(state.gt_changed);
    return pair;
}

std::vector<BaseImage> synthetic_bases(int count, std::uint64_t seed, int width, int height) {
    std::vector<BaseImage> out(static_cast<std::size_t>(std::max(0, count)));
    const std::uint64_t base_seed = derive_seed(seed, 0xBA5Eull);
    for (std::size_t i = 0; i < out.size(); ++i) {
        Rng rng(derive_seed(base_seed, i));
        auto layout = synthesize_layout(width, height, rng);
        out[i] = {std::move(layout.image), std::move(layout.detections), layout.theme};
    }
    return out;
}

std::vector<BaseImage> load_bases(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    std::vector<std::filesystem::path> images;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto& p = entry.path();
        if (p.extension() == ".png" && std::filesystem::exists(std::filesystem::path(p).replace_extension(".json")))
            images.push_back(p);
    }
    std::sort(images.begin(), images.end());
    std::vector<BaseImage> out;
    for (std::size_t i = 0; i < images.size(); ++i) {
        BaseImage base;
        base.image = read_png(images[i]);
        base.dets = detection::load_annotations_file(std::filesystem::path(images[i]).replace_extension(".json"));
        if (base.dets.image_width != base.image.width() || base.dets.image_height != base.image.height())
            throw BoundsError("annotation size of '" + images[i].string() + "' does not match the image");
        Rng rng(derive_seed(0x7E3Eull, i));
        base.theme = random_theme(rng);
        base.theme.background = border_mode(base.image);
        out.push_back(std::move(base));
    }
    return out;
}

json to_json(const GroundTruthChanges& gt) {
    return {{"changes_original", boxes_json(gt.original)}, {"changes_changed", boxes_json(gt.changed)}};
}

GroundTruthChanges load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        const json j = json::parse(in);
        return {boxes_from_json(j.at("changes_original")), boxes_from_json(j.at("changes_changed"))};
    } catch (const json::exception& e) {
        throw SchemaError("malformed ground truth '" + path.string() + "': " + e.what());
    }
}

json to_json(const Manifest& manifest) {
    json pairs = json::array();
    for (const auto& e : manifest.pairs) {
        json mutations = json::array();
        for (const auto& a : e.applied) {
            json m = {{"kind", std::string(to_string(a.kind))}};
            for (const auto& [k, v] : a.params.items()) m[k] = v;
            mutations.push_back(std::move(m));
        }
        json skipped = json::array();
        for (const auto k : e.skipped) skipped.push_back(std::string(to_string(k)));
        json cut = nullptr;
        if (e.cut) cut = {{"side", std::string(to_string(e.cut->side))}, {"amount", e.cut->amount}};
        pairs.push_back({{"id", e.id},
                         {"base", e.base},
                         {"original", e.original.generic_string()},
                         {"original_annotations", e.original_annotations.generic_string()},
                         {"changed", e.changed.generic_string()},
                         {"changed_annotations", e.changed_annotations.generic_string()},
                         {"gt", e.gt.generic_string()},
                         {"seed", e.seed},
                         {"mutations", std::move(mutations)},
                         {"skipped", std::move(skipped)},
                         {"cut", std::move(cut)}});
    }
    return {{"seed", manifest.seed},
            {"cut", manifest.cut},
            {"variants_per_image", manifest.variants_per_image},
            {"pairs", std::move(pairs)}};
}

Manifest manifest_from_json(const json& j, const std::filesystem::path& root) {
    Manifest m;
    m.root = root;
    try {
        m.seed = j.at("seed").get<std::uint64_t>();
        m.cut = j.at("cut").get<bool>();
        m.variants_per_image = j.at("variants_per_image").get<int>();
        for (const auto& p : j.at("pairs")) {
            ManifestEntry e;
            e.id = p.at("id").get<std::string>();
            e.base = p.at("base").get<std::size_t>();
            e.original = p.at("original").get<std::string>();
            e.original_annotations = p.at("original_annotations").get<std::string>();
            e.changed = p.at("changed").get<std::string>();
            e.changed_annotations = p.at("changed_annotations").get<std::string>();
            e.gt = p.at("gt").get<std::string>();
            e.seed = p.at("seed").get<std::uint64_t>();
            for (const auto& mut : p.at("mutations")) {
                json params = mut;
                params.erase("kind");
                e.applied.push_back({parse_change_kind(mut.at("kind").get<std::string>()), std::move(params)});
            }
            for (const auto& k : p.at("skipped")) e.skipped.push_back(parse_change_kind(k.get<std::string>()));
            if (!p.at("cut").is_null()) {
                e.cut = CutSpec{parse_cut_side(p["cut"].at("side").get<std::string>()),
                                p["cut"].at("amount").get<int>()};
            }
            m.pairs.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("invalid manifest JSON: " + std::string(e.what()));
    }
    return manifest_from_json(j, path.parent_path());
}

namespace {

std::string numbered(std::string_view prefix, std::size_t n, int digits) {
    std::string s = std::to_string(n);
    if (static_cast<int>(s.size()) < digits) s.insert(0, static_cast<std::size_t>(digits) - s.size(), '0');
    return std::string(prefix) + s;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

void make_dirs(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace

Manifest generate_dataset(const std::vector<BaseImage>& bases, const DatasetOptions& options,
                          const std::filesystem::path& out_dir) {
    if (options.variants_per_image < 1) throw Error("variants per image must be >= 1");
    make_dirs(out_dir / "bases");
    make_dirs(out_dir / "pairs");

    std::vector<std::filesystem::path> base_png(bases.size());
    std::vector<std::filesystem::path> base_json(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        base_png[i] = std::filesystem::path("bases") / (numbered("base_", i, 3) + ".png");
        base_json[i] = std::filesystem::path("bases") / (numbered("base_", i, 3) + ".json");
    }
    parallel_for(bases.size(), options.jobs, [&](std::size_t i) {
        write_png(out_dir / base_png[i], bases[i].image);
        detection::save_annotations_file(out_dir / base_json[i], bases[i].dets);
    });

    const std::size_t variants = static_cast<std::size_t>(options.variants_per_image);
    Manifest manifest;
    manifest.seed = options.seed;
    manifest.cut = options.cut;
    manifest.variants_per_image = options.variants_per_image;
    manifest.root = out_dir;
    manifest.pairs.resize(bases.size() * variants);

    parallel_for(manifest.pairs.size(), options.jobs, [&](std::size_t index) {
        const std::size_t base_index = index / variants;
        const auto pair = generate_pair(bases[base_index], derive_seed(options.seed, index), options.cut);
        const std::string id = numbered("pair_", index, 4);
        const auto rel = std::filesystem::path("pairs") / id;
        make_dirs(out_dir / rel);
        write_png(out_dir / rel / "changed.png", pair.changed);
        detection::save_annotations_file(out_dir / rel / "changed.json", pair.changed_dets);
        write_json(out_dir / rel / "gt.json",
                   to_json(GroundTruthChanges{pair.gt_changes_original, pair.gt_changes_changed}));

        ManifestEntry& e = manifest.pairs[index];
        e.id = id;
        e.base = base_index;
        e.original = base_png[base_index];
        e.original_annotations = base_json[base_index];
        e.changed = rel / "changed.png";
        e.changed_annotations = rel / "changed.json";
        e.gt = rel / "gt.json";
        e.seed = pair.seed;
        e.applied = pair.applied;
        e.skipped = pair.skipped;
        e.cut = pair.cut;
    });

    write_json(out_dir / "manifest.json", to_json(manifest));
    return manifest;
}

}  // namespace uidiff::datagen
