#include "uidiff/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "uidiff/baselines.hpp"
#include "uidiff/changes.hpp"
#include "uidiff/datagen.hpp"
#include "uidiff/detection.hpp"
#include "uidiff/eval.hpp"
#include "uidiff/graph.hpp"
#include "uidiff/image_io.hpp"

#ifndef UIDIFF_VERSION
#define UIDIFF_VERSION "0.0.0"
#endif

namespace uidiff::cli {

namespace {

using changes::EngineParams;
using changes::Method;

const std::map<std::string, int> kProfiles = {{"desktop", 8}, {"cut", 6}, {"mobile", 5}};

struct ParamOptions {
    EngineParams params;
    std::string profile;
    CLI::Option* k = nullptr;
};

void add_param_options(CLI::App& cmd, ParamOptions& p) {
    p.k = cmd.add_option("--k", p.params.graph.k, "Nearest neighbours per control")
              ->check(CLI::PositiveNumber)
              ->capture_default_str();
    cmd.add_option("--h", p.params.similarity.h, "Maximum hash difference")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    cmd.add_option("--ts", p.params.similarity.ts, "Minimum text similarity")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--ns", p.params.similarity.ns, "Minimum neighbour similarity")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--size-tolerance", p.params.similarity.size_tolerance,
                   "Largest relative width/height difference of a match")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--layout-tolerance", p.params.similarity.layout_tolerance,
                   "Allowed neighbour offset disagreement; 1 disables the layout check")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd.add_option("--context-depth", p.params.similarity.context_depth,
                   "Levels of neighbourhood expansion")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--profile", p.profile, "Default K for a modality: desktop=8, cut=6, mobile=5")
        ->check(CLI::IsMember({"desktop", "cut", "mobile"}));
}

// An explicit --k (flag or config) wins over the profile default.
EngineParams resolve(const ParamOptions& p) {
    EngineParams params = p.params;
    if (!p.profile.empty() && p.k->count() == 0) params.graph.k = kProfiles.at(p.profile);
    params.validate();
    return params;
}

Method method_option(const std::string& name) { return changes::parse_method(name); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
}

void print_scores(const eval::EvalResult& r) {
    std::cout << "method " << changes::to_string(r.method) << ", " << r.pairs.size() << " pairs";
    if (r.dimension_mismatch_pairs) std::cout << ", " << r.dimension_mismatch_pairs << " dimension mismatches";
    std::cout << '\n';
    for (const auto& s : r.scores) {
        std::cout << "IOU>=" << s.iou_threshold << "  P=" << s.precision << "  R=" << s.recall
                  << "  F=" << s.fscore << "  (TP " << s.counts.tp << ", FP " << s.counts.fp
                  << ", FN " << s.counts.fn << ")\n";
    }
}

struct DiffArgs {
    std::string image_a, image_b, annots_a, annots_b, out, method = "gvcd", dump_graph;
    ParamOptions params;
    int jobs = 1;
};

int run_diff(const DiffArgs& a) {
    const Method method = method_option(a.method);
    const auto params = resolve(a.params);
    const Raster image_a = read_png(a.image_a);
    const Raster image_b = read_png(a.image_b);
    DetectionSet dets_a;
    DetectionSet dets_b;
    if (method != Method::Pwc) {
        if (a.annots_a.empty() || a.annots_b.empty())
            throw Error("--annots-a and --annots-b are required for method " + a.method);
        dets_a = detection::load_annotations_file(a.annots_a);
        dets_b = detection::load_annotations_file(a.annots_b);
    }
    if (!a.dump_graph.empty()) {
        if (method == Method::Pwc) throw Error("--dump-graph needs annotations (gvcd or rcd)");
        const nlohmann::json dump = {{"a", graph::to_json(graph::build_graph(dets_a, params.graph))},
                                     {"b", graph::to_json(graph::build_graph(dets_b, params.graph))}};
        write_text(a.dump_graph, dump.dump(2) + "\n");
    }
    const auto report = eval::run_method(image_a, dets_a, image_b, dets_b, method, params, a.jobs);
    changes::render_outputs(report, image_a, image_b, a.out);
    std::cout << "changes: " << report.changes_in_original.size() << " in A, "
              << report.changes_in_changed.size() << " in B";
    if (report.dimension_mismatch) std::cout << " (dimension mismatch)";
    std::cout << '\n';
    return kExitOk;
}

struct GenerateArgs {
    std::string bases, out;
    int synthetic = 0;
    int variants = 7;
    bool cut = false;
    std::uint64_t seed = 0;
    int width = 1920;
    int height = 1080;
    int jobs = 1;
};

int run_generate(const GenerateArgs& a) {
    const auto bases = a.bases.empty() ? datagen::synthetic_bases(a.synthetic, a.seed, a.width, a.height)
                                       : datagen::load_bases(a.bases);
    if (bases.empty()) throw Error("no base images");
    datagen::DatasetOptions options;
    options.variants_per_image = a.variants;
    options.cut = a.cut;
    options.seed = a.seed;
    options.jobs = a.jobs;
    const auto manifest = datagen::generate_dataset(bases, options, a.out);
    std::cout << "wrote " << manifest.pairs.size() << " pairs from " << bases.size()
              << " bases to " << a.out << '\n';
    return kExitOk;
}

struct NoiseArgs {
    double drop = 0.0;
    int jitter = 0;
    std::uint64_t seed = 0;
};

void add_noise_options(CLI::App& cmd, NoiseArgs& n) {
    cmd.add_option("--noise-drop", n.drop, "Drop each annotated control with this probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd.add_option("--noise-jitter", n.jitter, "Move box edges by up to this many pixels")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--noise-seed", n.seed, "Seed of the detector noise");
}

detection::NoiseParams noise_params(const NoiseArgs& n) { return {n.drop, n.jitter, n.seed}; }

struct EvalArgs {
    std::string manifest, method = "gvcd", out, csv;
    ParamOptions params;
    NoiseArgs noise;
    int jobs = 1;
};

int run_eval(const EvalArgs& a) {
    eval::EvalOptions options;
    options.method = method_option(a.method);
    options.params = resolve(a.params);
    options.noise = noise_params(a.noise);
    options.jobs = a.jobs;
    const auto manifest = datagen::load_manifest(a.manifest);
    const auto result = eval::evaluate_dataset(manifest, options);
    print_scores(result);
    if (!a.out.empty()) write_text(a.out, eval::to_json(result).dump(2) + "\n");
    if (!a.csv.empty()) write_text(a.csv, eval::breakdown_csv(result));
    return kExitOk;
}

struct SweepArgs {
    std::string manifest, param, values, fixed, out;
    ParamOptions params;
    NoiseArgs noise;
    std::optional<std::uint64_t> split_seed;
    int jobs = 1;
};

// "h=10,ts=0.7" applied on top of the flag values.
EngineParams apply_fixed(EngineParams params, const std::string& fixed) {
    std::size_t start = 0;
    while (start < fixed.size()) {
        auto comma = fixed.find(',', start);
        if (comma == std::string::npos) comma = fixed.size();
        const std::string item = fixed.substr(start, comma - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("--fixed entry '" + item + "' is not name=value");
        const auto values = eval::parse_values(item.substr(eq + 1));
        if (values.size() != 1) throw Error("--fixed entry '" + item + "' needs one value");
        params = eval::with_param(params, eval::parse_sweep_param(item.substr(0, eq)), values[0]);
        start = comma + 1;
    }
    return params;
}

int run_sweep(const SweepArgs& a) {
    eval::EvalOptions options;
    options.method = Method::Gvcd;
    options.params = apply_fixed(resolve(a.params), a.fixed);
    options.noise = noise_params(a.noise);
    options.jobs = a.jobs;
    const auto param = eval::parse_sweep_param(a.param);
    const auto values = eval::parse_values(a.values);
    const auto manifest = datagen::load_manifest(a.manifest);
    const auto table = eval::sweep(manifest, param, values, options, a.split_seed.value_or(manifest.seed));
    const auto csv = eval::to_csv(table);
    if (!a.out.empty()) write_text(a.out, csv);
    std::cout << csv;
    const auto& best = table.rows[table.best];
    std::cout << "best " << eval::to_string(param) << "=" << best.value
              << " F@0.5=" << best.scores[1].fscore << '\n';
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Visual change detection between UI screenshots", "uidiff"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", UIDIFF_VERSION);
    app.set_config("--config", "", "Read options from a TOML/INI file; flags win");
    app.require_subcommand(1);

    DiffArgs diff;
    auto* diff_cmd = app.add_subcommand("diff", "Detect changes between two screenshots");
    diff_cmd->add_option("--image-a", diff.image_a, "Original screenshot (PNG)")->required()->check(CLI::ExistingFile);
    diff_cmd->add_option("--image-b", diff.image_b, "Changed screenshot (PNG)")->required()->check(CLI::ExistingFile);
    diff_cmd->add_option("--annots-a", diff.annots_a, "Controls of the original (JSON)")->check(CLI::ExistingFile);
    diff_cmd->add_option("--annots-b", diff.annots_b, "Controls of the changed image (JSON)")->check(CLI::ExistingFile);
    diff_cmd->add_option("--out", diff.out, "Output directory")->required();
    diff_cmd->add_option("--method", diff.method, "gvcd, pwc or rcd")
        ->check(CLI::IsMember({"gvcd", "pwc", "rcd"}))
        ->capture_default_str();
    diff_cmd->add_option("--dump-graph", diff.dump_graph, "Write both neighbour graphs as JSON");
    diff_cmd->add_option("--jobs", diff.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_param_options(*diff_cmd, diff.params);

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic change dataset");
    auto* bases_opt = gen_cmd->add_option("--bases", gen.bases, "Directory of NAME.png + NAME.json base screenshots")
                          ->check(CLI::ExistingDirectory);
    auto* synth_opt = gen_cmd->add_option("--synthetic", gen.synthetic, "Number of procedural base screens")
                          ->check(CLI::PositiveNumber);
    bases_opt->excludes(synth_opt);
    gen_cmd->add_option("--variants", gen.variants, "Changed versions per base")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    gen_cmd->add_flag("--cut", gen.cut, "Cut one side of each changed image and re-center it");
    gen_cmd->add_option("--seed", gen.seed, "Dataset seed")->capture_default_str();
    gen_cmd->add_option("--width", gen.width, "Procedural screen width")->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--height", gen.height, "Procedural screen height")->check(CLI::PositiveNumber)->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--jobs", gen.jobs, "Worker threads")->check(CLI::PositiveNumber);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Score a detector on a generated dataset");
    eval_cmd->add_option("--manifest", ev.manifest, "Dataset manifest.json")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--method", ev.method, "gvcd, pwc or rcd")
        ->check(CLI::IsMember({"gvcd", "pwc", "rcd"}))
        ->capture_default_str();
    eval_cmd->add_option("--out", ev.out, "Scores JSON");
    eval_cmd->add_option("--csv", ev.csv, "Per-pair breakdown CSV");
    eval_cmd->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_param_options(*eval_cmd, ev.params);
    add_noise_options(*eval_cmd, ev.noise);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one hyperparameter on the tuning split");
    sweep_cmd->add_option("--manifest", sw.manifest, "Dataset manifest.json")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--param", sw.param, "k, h, ts or ns")
        ->required()
        ->check(CLI::IsMember({"k", "h", "ts", "ns"}));
    sweep_cmd->add_option("--values", sw.values, "\"1..10\", \"0.5..0.9:0.1\" or \"1,2,5\"")->required();
    sweep_cmd->add_option("--fixed", sw.fixed, "Other parameters, e.g. h=10,ts=0.7,ns=0.8");
    sweep_cmd->add_option("--split-seed", sw.split_seed, "Seed of the 70/30 split (default: dataset seed)");
    sweep_cmd->add_option("--out", sw.out, "Table CSV");
    sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_param_options(*sweep_cmd, sw.params);
    add_noise_options(*sweep_cmd, sw.noise);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*diff_cmd) return run_diff(diff);
        if (*gen_cmd) {
            if (gen.bases.empty() && gen.synthetic <= 0) throw Error("one of --bases or --synthetic is required");
            return run_generate(gen);
        }
        if (*eval_cmd) return run_eval(ev);
        if (*sweep_cmd) return run_sweep(sw);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("uidiff");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace uidiff::cli
