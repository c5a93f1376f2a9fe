#include "uidiff/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uidiff/baselines.hpp"
#include "uidiff/image_io.hpp"
#include "uidiff/parallel.hpp"

namespace uidiff::eval {

using changes::Method;
using nlohmann::json;

ScoreTriple score_from_counts(const Counts& counts, double iou_threshold) {
    ScoreTriple s;
    s.iou_threshold = iou_threshold;
    s.counts = counts;
    const auto predicted = counts.tp + counts.fp;
    const auto actual = counts.tp + counts.fn;
    s.precision = predicted == 0 ? 1.0 : static_cast<double>(counts.tp) / static_cast<double>(predicted);
    s.recall = actual == 0 ? 1.0 : static_cast<double>(counts.tp) / static_cast<double>(actual);
    const double sum = s.precision + s.recall;
    s.fscore = sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
    return s;
}

namespace {

// IOU values of the greedy one-to-one matching, in matching order.
std::vector<double> greedy_ious(const std::vector<BBox>& predicted, const std::vector<BBox>& gt) {
    struct Candidate {
        double overlap;
        std::size_t p;
        std::size_t g;
    };
    std::vector<Candidate> candidates;
    for (std::size_t p = 0; p < predicted.size(); ++p)
        for (std::size_t g = 0; g < gt.size(); ++g) {
            const double v = iou(predicted[p], gt[g]);
            if (v > 0.0) candidates.push_back({v, p, g});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.p != b.p) return a.p < b.p;
        return a.g < b.g;
    });
    std::vector<bool> used_p(predicted.size(), false);
    std::vector<bool> used_g(gt.size(), false);
    std::vector<double> out;
    for (const auto& c : candidates) {
        if (used_p[c.p] || used_g[c.g]) continue;
        used_p[c.p] = true;
        used_g[c.g] = true;
        out.push_back(c.overlap);
    }
    return out;
}

Counts counts_at(const std::vector<double>& ious, std::size_t predicted, std::size_t gt,
                 double iou_threshold) {
    Counts c;
    c.tp = static_cast<std::size_t>(std::count_if(ious.begin(), ious.end(),
                                                  [&](double v) { return v >= iou_threshold; }));
    c.fp = predicted - c.tp;
    c.fn = gt - c.tp;
    return c;
}

}  // namespace

std::array<Counts, 3> match_counts(const std::vector<BBox>& predicted, const std::vector<BBox>& gt) {
    const auto ious = greedy_ious(predicted, gt);
    std::array<Counts, 3> out;
    for (std::size_t t = 0; t < kThresholds.size(); ++t)
        out[t] = counts_at(ious, predicted.size(), gt.size(), kThresholds[t]);
    return out;
}

Counts match_counts(const std::vector<BBox>& predicted, const std::vector<BBox>& gt,
                    double iou_threshold) {
    return counts_at(greedy_ious(predicted, gt), predicted.size(), gt.size(), iou_threshold);
}

ScoreTriple score_pair(const std::vector<BBox>& predicted_original,
                       const std::vector<BBox>& predicted_changed,
                       const std::vector<BBox>& gt_original, const std::vector<BBox>& gt_changed,
                       double iou_threshold) {
    Counts c = match_counts(predicted_original, gt_original, iou_threshold);
    c += match_counts(predicted_changed, gt_changed, iou_threshold);
    return score_from_counts(c, iou_threshold);
}

const ScoreTriple& EvalResult::at(double iou_threshold) const {
    for (const auto& s : scores)
        if (s.iou_threshold == iou_threshold) return s;
    throw Error("no score at IOU threshold " + std::to_string(iou_threshold));
}

changes::ChangeReport run_method(const Raster& image_a, const DetectionSet& dets_a,
                                 const Raster& image_b, const DetectionSet& dets_b, Method method,
                                 const changes::EngineParams& params, int jobs) {
    switch (method) {
        case Method::Gvcd: return changes::detect_changes(image_a, dets_a, image_b, dets_b, params, jobs);
        case Method::Pwc: return baselines::pixel_wise_detect(image_a, image_b);
        case Method::Rcd: return baselines::region_based_detect(image_a, dets_a, image_b, dets_b);
    }
    throw Error("unknown method");
}

EvalResult evaluate_pairs(const datagen::Manifest& manifest, const std::vector<std::size_t>& indices,
                          const EvalOptions& options) {
    options.params.validate();
    EvalResult result;
    result.method = options.method;
    result.params = options.params;
    result.pairs.resize(indices.size());

    parallel_for(indices.size(), options.jobs, [&](std::size_t slot) {
        const std::size_t index = indices.at(slot);
        const auto& entry = manifest.pairs.at(index);
        const auto& root = manifest.root;
        const Raster image_a = read_png(root / entry.original);
        const Raster image_b = read_png(root / entry.changed);
        DetectionSet dets_a;
        DetectionSet dets_b;
        if (options.method != Method::Pwc) {
            dets_a = detection::load_annotations_file(root / entry.original_annotations);
            dets_b = detection::load_annotations_file(root / entry.changed_annotations);
            if (options.noise.enabled()) {
                auto noise = options.noise;
                noise.seed = derive_seed(options.noise.seed, 2 * index);
                dets_a = detection::apply_noise(dets_a, noise);
                noise.seed = derive_seed(options.noise.seed, 2 * index + 1);
                dets_b = detection::apply_noise(dets_b, noise);
            }
        }
        const auto gt = datagen::load_ground_truth(root / entry.gt);
        const auto report = run_method(image_a, dets_a, image_b, dets_b, options.method, options.params);

        PairResult& pr = result.pairs[slot];
        pr.id = entry.id;
        pr.dimension_mismatch = report.dimension_mismatch;
        pr.predicted_original = report.changes_in_original.size();
        pr.predicted_changed = report.changes_in_changed.size();
        pr.gt_original = gt.original.size();
        pr.gt_changed = gt.changed.size();
        const auto side_a = match_counts(report.boxes_original(), gt.original);
        const auto side_b = match_counts(report.boxes_changed(), gt.changed);
        for (std::size_t t = 0; t < kThresholds.size(); ++t) {
            pr.counts[t] = side_a[t];
            pr.counts[t] += side_b[t];
        }
    });

    std::array<Counts, 3> total{};
    for (const auto& pr : result.pairs) {
        if (pr.dimension_mismatch) ++result.dimension_mismatch_pairs;
        for (std::size_t t = 0; t < kThresholds.size(); ++t) total[t] += pr.counts[t];
    }
    for (std::size_t t = 0; t < kThresholds.size(); ++t)
        result.scores[t] = score_from_counts(total[t], kThresholds[t]);
    return result;
}

EvalResult evaluate_dataset(const datagen::Manifest& manifest, const EvalOptions& options) {
    std::vector<std::size_t> all(manifest.pairs.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return evaluate_pairs(manifest, all, options);
}

json to_json(const EvalResult& result) {
    json scores = json::array();
    for (const auto& s : result.scores) {
        scores.push_back({{"iou_threshold", s.iou_threshold},
                          {"precision", s.precision},
                          {"recall", s.recall},
                          {"fscore", s.fscore},
                          {"tp", s.counts.tp},
                          {"fp", s.counts.fp},
                          {"fn", s.counts.fn}});
    }
    const auto& p = result.params;
    return {{"method", std::string(changes::to_string(result.method))},
            {"params",
             {{"k", p.graph.k},
              {"h", p.similarity.h},
              {"ts", p.similarity.ts},
              {"ns", p.similarity.ns},
              {"size_tolerance", p.similarity.size_tolerance},
              {"layout_tolerance", p.similarity.layout_tolerance},
              {"context_depth", p.similarity.context_depth}}},
            {"pairs", result.pairs.size()},
            {"dimension_mismatch_pairs", result.dimension_mismatch_pairs},
            {"scores", std::move(scores)}};
}

std::string breakdown_csv(const EvalResult& result) {
    std::ostringstream out;
    out << "pair,dimension_mismatch,pred_original,pred_changed,gt_original,gt_changed";
    for (const double t : kThresholds) out << ",tp@" << t << ",fp@" << t << ",fn@" << t;
    out << '\n';
    for (const auto& pr : result.pairs) {
        out << pr.id << ',' << (pr.dimension_mismatch ? 1 : 0) << ',' << pr.predicted_original << ','
            << pr.predicted_changed << ',' << pr.gt_original << ',' << pr.gt_changed;
        for (const auto& c : pr.counts) out << ',' << c.tp << ',' << c.fp << ',' << c.fn;
        out << '\n';
    }
    return out.str();
}

Split split_manifest(const datagen::Manifest& manifest, std::uint64_t seed, double fraction) {
    if (fraction < 0.0 || fraction > 1.0) throw Error("split fraction must lie in [0,1]");
    std::vector<std::size_t> order(manifest.pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 0x5917ull));
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(
            uniform_int(rng, std::int64_t{0}, static_cast<std::int64_t>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }
    const auto cut = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(order.size())));
    Split split;
    split.tuning.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    split.holdout.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
    std::sort(split.tuning.begin(), split.tuning.end());
    std::sort(split.holdout.begin(), split.holdout.end());
    return split;
}

std::string_view to_string(SweepParam param) noexcept {
    switch (param) {
        case SweepParam::K: return "k";
        case SweepParam::H: return "h";
        case SweepParam::TS: return "ts";
        case SweepParam::NS: return "ns";
    }
    return "k";
}

SweepParam parse_sweep_param(std::string_view name) {
    if (name == "k") return SweepParam::K;
    if (name == "h") return SweepParam::H;
    if (name == "ts") return SweepParam::TS;
    if (name == "ns") return SweepParam::NS;
    throw Error("unknown sweep parameter '" + std::string(name) + "' (expected k, h, ts or ns)");
}

namespace {

double parse_number(std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw Error("invalid number '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_values(std::string_view text) {
    std::vector<double> out;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const double lo = parse_number(text.substr(0, dots));
        auto rest = text.substr(dots + 2);
        double step = 1.0;
        if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
            step = parse_number(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const double hi = parse_number(rest);
        if (step <= 0.0) throw Error("range step must be positive");
        if (hi < lo) throw Error("range end is below its start");
        for (int i = 0;; ++i) {
            // Rounded to 1e-9 so decimal steps print cleanly.
            const double v = std::round((lo + i * step) * 1e9) / 1e9;
            if (v > hi + 1e-9) break;
            out.push_back(v);
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            out.push_back(parse_number(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    if (out.empty()) throw Error("no values in '" + std::string(text) + "'");
    return out;
}

changes::EngineParams with_param(changes::EngineParams params, SweepParam param, double value) {
    const auto integral = [&](std::string_view name) {
        if (value != std::floor(value)) {
            throw Error(std::string(name) + " must be an integer, got " + std::to_string(value));
        }
        return static_cast<int>(value);
    };
    switch (param) {
        case SweepParam::K: params.graph.k = integral("k"); break;
        case SweepParam::H: params.similarity.h = integral("h"); break;
        case SweepParam::TS: params.similarity.ts = value; break;
        case SweepParam::NS: params.similarity.ns = value; break;
    }
    params.validate();
    return params;
}

SweepTable sweep(const datagen::Manifest& manifest, SweepParam param,
                 const std::vector<double>& values, const EvalOptions& options,
                 std::uint64_t split_seed) {
    if (values.empty()) throw Error("sweep needs at least one value");
    const auto split = split_manifest(manifest, split_seed);
    SweepTable table;
    table.param = param;
    for (const double v : values) {
        auto opts = options;
        opts.params = with_param(options.params, param, v);
        const auto result = evaluate_pairs(manifest, split.tuning, opts);
        table.rows.push_back({v, result.scores});
    }
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].scores[1].fscore > table.rows[table.best].scores[1].fscore) table.best = i;
    }
    return table;
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << to_string(table.param);
    for (const double t : kThresholds) out << ",P@" << t << ",R@" << t << ",F@" << t;
    out << '\n';
    for (const auto& row : table.rows) {
        out << row.value;
        for (const auto& s : row.scores) {
            out << ',' << std::fixed;
            out.precision(3);
            out << s.precision << ',' << s.recall << ',' << s.fscore;
            out << std::defaultfloat;
            out.precision(6);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace uidiff::eval
