#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidiff/model.hpp"
#include "uidiff/rng.hpp"
#include "uidiff/sprites.hpp"

namespace uidiff::datagen {

enum class ChangeKind {
    AddControl,
    ChangeLocation,
    ChangeColor,
    Duplicate,
    Remove,
    ResizeSmaller,
    ResizeLarger,
    SwapControls,
};

inline constexpr std::array<ChangeKind, 8> kAllChangeKinds = {
    ChangeKind::AddControl,   ChangeKind::ChangeLocation, ChangeKind::ChangeColor,
    ChangeKind::Duplicate,    ChangeKind::Remove,         ChangeKind::ResizeSmaller,
    ChangeKind::ResizeLarger, ChangeKind::SwapControls,
};

std::string_view to_string(ChangeKind kind) noexcept;
ChangeKind parse_change_kind(std::string_view name);

/// No valid spot (or no eligible control) for a mutation.
class PlacementFailed : public Error {
public:
    using Error::Error;
};

inline constexpr int kPlacementAttempts = 100;
inline constexpr int kPlacementMargin = 2;
inline constexpr int kFillRing = 5;

enum class CutSide { Left, Right, Top, Bottom };

std::string_view to_string(CutSide side) noexcept;
CutSide parse_cut_side(std::string_view name);

inline constexpr std::array<int, 5> kCutAmounts = {100, 200, 300, 400, 500};

struct CutSpec {
    CutSide side = CutSide::Left;
    int amount = 0;

    friend bool operator==(const CutSpec&, const CutSpec&) = default;
};

/// One mutation as recorded in the manifest.
struct AppliedChange {
    ChangeKind kind;
    nlohmann::json params;
};

/// A pair being mutated. `changed` starts as a copy of `original`; every mutation
/// works on controls nobody has touched yet and appends its ground truth.
struct PairState {
    Raster original;
    DetectionSet original_dets;
    Raster changed;
    DetectionSet changed_dets;
    Theme theme;
    std::vector<BBox> gt_original;
    std::vector<BBox> gt_changed;
    std::vector<AppliedChange> applied;
    std::vector<ControlId> touched;
};

PairState start_pair(const Raster& image, const DetectionSet& dets, const Theme& theme);

/// Applies one mutation in place. Throws PlacementFailed and leaves the state
/// unchanged when the mutation cannot be realised.
void apply_change(PairState& state, ChangeKind kind, Rng& rng);

/// Result of cutting one side and re-centering the rest on the same canvas.
struct CutResult {
    Raster image;
    DetectionSet dets;
    std::vector<BBox> gt;
    std::vector<ControlId> dropped;  ///< ids that left the image
    std::vector<ControlId> clipped;  ///< ids whose box was clipped
};

/// Shift applied to kept content: -amount/2 for left/top cuts, +amount/2 otherwise.
std::pair<int, int> cut_shift(const CutSpec& spec) noexcept;

CutResult cut_and_shift(const Raster& image, const DetectionSet& dets,
                        const std::vector<BBox>& gt, const CutSpec& spec);

struct GeneratedPair {
    Raster original;
    DetectionSet original_dets;
    Raster changed;
    DetectionSet changed_dets;
    std::vector<AppliedChange> applied;
    std::vector<ChangeKind> skipped;  ///< kinds re-drawn after PlacementFailed
    std::vector<BBox> gt_changes_original;
    std::vector<BBox> gt_changes_changed;
    std::uint64_t seed = 0;
    std::optional<CutSpec> cut;
};

/// Base screenshot with its annotations. The theme supplies sprite colours for
/// added controls.
struct BaseImage {
    Raster image;
    DetectionSet dets;
    Theme theme;
};

inline constexpr int kMaxMutations = 4;

/// 1-4 mutations with kinds drawn uniformly (with replacement, re-drawn on
/// PlacementFailed), then an optional random cut of the changed image.
GeneratedPair generate_pair(const BaseImage& base, std::uint64_t seed, bool cut);

/// Procedural desktop screens, each from its own sub-seed.
std::vector<BaseImage> synthetic_bases(int count, std::uint64_t seed, int width = 1920,
                                       int height = 1080);

/// Loads every `NAME.png` in `dir` that has a `NAME.json` annotation next to it,
/// in file-name order.
std::vector<BaseImage> load_bases(const std::filesystem::path& dir);

struct DatasetOptions {
    int variants_per_image = 7;
    bool cut = false;
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Paths are relative to the manifest's directory once written.
struct ManifestEntry {
    std::string id;
    std::size_t base = 0;
    std::filesystem::path original;
    std::filesystem::path original_annotations;
    std::filesystem::path changed;
    std::filesystem::path changed_annotations;
    std::filesystem::path gt;
    std::uint64_t seed = 0;
    std::vector<AppliedChange> applied;
    std::vector<ChangeKind> skipped;
    std::optional<CutSpec> cut;
};

struct Manifest {
    std::uint64_t seed = 0;
    bool cut = false;
    int variants_per_image = 0;
    std::vector<ManifestEntry> pairs;
    std::filesystem::path root;  ///< directory relative paths resolve against
};

nlohmann::json to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& root);
Manifest load_manifest(const std::filesystem::path& path);

/// Ground-truth file of one pair: {"changes_original": [[x1,y1,x2,y2],...], "changes_changed": [...]}.
struct GroundTruthChanges {
    std::vector<BBox> original;
    std::vector<BBox> changed;
};

nlohmann::json to_json(const GroundTruthChanges& gt);
GroundTruthChanges load_ground_truth(const std::filesystem::path& path);

/// Writes bases, pairs and manifest.json under `out_dir` and returns the manifest.
Manifest generate_dataset(const std::vector<BaseImage>& bases, const DatasetOptions& options,
                          const std::filesystem::path& out_dir);

}  // namespace uidiff::datagen
