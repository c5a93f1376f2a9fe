#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uidiff/changes.hpp"
#include "uidiff/datagen.hpp"
#include "uidiff/detection.hpp"

namespace uidiff::eval {

/// Reporting order used by every table: strict to loose.
inline constexpr std::array<double, 3> kThresholds = {0.75, 0.5, 0.25};

struct Counts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    Counts& operator+=(const Counts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const Counts&, const Counts&) = default;
};

struct ScoreTriple {
    double precision = 1.0;
    double recall = 1.0;
    double fscore = 1.0;
    double iou_threshold = 0.5;
    Counts counts;
};

/// Precision and recall are 1 when their denominator is 0; F is 0 when P + R is 0.
ScoreTriple score_from_counts(const Counts& counts, double iou_threshold);

/// Greedy one-to-one matching of predictions to ground truth by descending IOU
/// (ties by prediction index, then gt index). Entry t holds the counts at
/// kThresholds[t]; matches below a threshold count as one FP and one FN.
std::array<Counts, 3> match_counts(const std::vector<BBox>& predicted,
                                   const std::vector<BBox>& gt);
Counts match_counts(const std::vector<BBox>& predicted, const std::vector<BBox>& gt,
                    double iou_threshold);

/// Scores both image sides jointly.
ScoreTriple score_pair(const std::vector<BBox>& predicted_original,
                       const std::vector<BBox>& predicted_changed,
                       const std::vector<BBox>& gt_original, const std::vector<BBox>& gt_changed,
                       double iou_threshold);

struct EvalOptions {
    changes::Method method = changes::Method::Gvcd;
    changes::EngineParams params;
    detection::NoiseParams noise;  ///< applied to both annotation sets of every pair
    int jobs = 1;
};

struct PairResult {
    std::string id;
    bool dimension_mismatch = false;
    std::size_t predicted_original = 0;
    std::size_t predicted_changed = 0;
    std::size_t gt_original = 0;
    std::size_t gt_changed = 0;
    std::array<Counts, 3> counts;
};

struct EvalResult {
    changes::Method method = changes::Method::Gvcd;
    changes::EngineParams params;
    std::array<ScoreTriple, 3> scores;
    std::vector<PairResult> pairs;
    std::size_t dimension_mismatch_pairs = 0;

    const ScoreTriple& at(double iou_threshold) const;
};

/// Runs the chosen detector on the pairs at `indices` and micro-averages the counts.
EvalResult evaluate_pairs(const datagen::Manifest& manifest, const std::vector<std::size_t>& indices,
                          const EvalOptions& options);
EvalResult evaluate_dataset(const datagen::Manifest& manifest, const EvalOptions& options);

/// Runs one detector on a single pair.
changes::ChangeReport run_method(const Raster& image_a, const DetectionSet& dets_a,
                                 const Raster& image_b, const DetectionSet& dets_b,
                                 changes::Method method, const changes::EngineParams& params,
                                 int jobs = 1);

nlohmann::json to_json(const EvalResult& result);
/// One row per pair with prediction, gt and TP/FP/FN counts per threshold.
std::string breakdown_csv(const EvalResult& result);

struct Split {
    std::vector<std::size_t> tuning;
    std::vector<std::size_t> holdout;
};

/// Seeded shuffle of the pair indices; the first `fraction` (rounded) go to tuning.
/// Both halves are returned in ascending order.
Split split_manifest(const datagen::Manifest& manifest, std::uint64_t seed, double fraction = 0.7);

enum class SweepParam { K, H, TS, NS };

std::string_view to_string(SweepParam param) noexcept;
SweepParam parse_sweep_param(std::string_view name);

/// "1..10" (step 1), "0.5..0.9:0.1" or "1,2,5".
std::vector<double> parse_values(std::string_view text);

/// Copy of `params` with one hyperparameter replaced; validates the result.
changes::EngineParams with_param(changes::EngineParams params, SweepParam param, double value);

struct SweepRow {
    double value = 0.0;
    std::array<ScoreTriple, 3> scores;
};

struct SweepTable {
    SweepParam param = SweepParam::K;
    std::vector<SweepRow> rows;
    std::size_t best = 0;  ///< row with the highest F at IOU 0.5; first one on ties
};

/// Evaluates each value on the tuning split while the other parameters keep the
/// values in `options.params`.
SweepTable sweep(const datagen::Manifest& manifest, SweepParam param,
                 const std::vector<double>& values, const EvalOptions& options,
                 std::uint64_t split_seed);

std::string to_csv(const SweepTable& table);

}  // namespace uidiff::eval
