#include "segscore/cli.hpp"

#include "segscore/confusion.hpp"
#include "segscore/distance.hpp"
#include "segscore/lint.hpp"
#include "segscore/plots.hpp"
#include "segscore/scenario.hpp"
#include "segscore/version.hpp"
#include "segscore/visualize.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace segscore::cli {

namespace fs = std::filesystem;

namespace {

const char* kRed = "\x1b[31m";
const char* kYellow = "\x1b[33m";
const char* kBold = "\x1b[1m";
const char* kReset = "\x1b[0m";

std::string paint(const Streams& io, const char* code, const std::string& s) {
    return io.color ? std::string(code) + s + kReset : s;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("UNWRITABLE_OUTPUT", "cannot write " + path.string());
    out << content;
    if (!out) throw Error("UNWRITABLE_OUTPUT", "cannot write " + path.string());
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("UNWRITABLE_OUTPUT", "cannot create output directory " + dir.string());
}

// File-name token for a class: its name with anything outside [A-Za-z0-9-] replaced.
std::string class_token(const ClassCatalog& catalog, ClassId id) {
    std::string name = catalog.name_of(id);
    for (char& c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) c = '-';
    }
    return name.empty() ? std::to_string(id) : name;
}

std::string cell(const Score& s) {
    if (!s.defined()) return "undef";
    return fmt::format("{:.4f}", s.value());
}

std::string mean_cell(const std::map<std::string, MetricAggregate>& block, const std::string& key) {
    auto it = block.find(key);
    if (it == block.end() || !it->second.distribution) return "-";
    return fmt::format("{:.4f}", it->second.distribution->mean);
}

// Summary column order: DSC first, then the remaining metrics.
const std::vector<std::pair<std::string, std::string>>& summary_columns() {
    static const std::vector<std::pair<std::string, std::string>> cols = {
        {"dsc", "DSC"},       {"iou", "IoU"},     {"sensitivity", "Sens"}, {"specificity", "Spec"},
        {"auc", "AUC"},       {"kappa", "Kappa"}, {"accuracy", "Acc"},     {"ahd", "AHD"},
    };
    return cols;
}

void print_summary(const DatasetReport& report, const Streams& io) {
    const auto& agg = report.aggregates;
    std::string head = fmt::format("{:<20}", "class");
    for (const auto& [key, label] : summary_columns()) head += fmt::format(" {:>8}", label);
    io.out << paint(io, kBold, head) << '\n';
    auto row = [&](const std::string& name, const std::map<std::string, MetricAggregate>& block) {
        std::string line = fmt::format("{:<20}", name);
        for (const auto& [key, label] : summary_columns()) line += fmt::format(" {:>8}", mean_cell(block, key));
        io.out << line << '\n';
    };
    for (const auto& [id, block] : agg.per_class) row(fmt::format("{} ({})", report.catalog.name_of(id), id), block);
    row("macro", agg.macro);
    row("micro", agg.micro);

    std::size_t evaluated = 0;
    for (const auto& s : report.samples) evaluated += s.failed() ? 0 : 1;
    io.out << fmt::format("{} samples, {} evaluated\n", report.samples.size(), evaluated);
    for (const auto& s : report.samples) {
        if (s.failed()) io.out << paint(io, kRed, fmt::format("flagged {}: {}", s.sample_id, s.error)) << '\n';
    }
    for (const auto& f : report.lint) {
        const char* code = f.severity == "error" ? kRed : kYellow;
        io.out << paint(io, code, fmt::format("lint {} {}: {}", f.rule, f.severity, f.message)) << '\n';
    }
}

std::optional<GrayImage> try_base_image(const fs::path& path, const Streams& io) {
    std::error_code ec;
    if (path.empty() || !fs::is_regular_file(path, ec)) return std::nullopt;
    try {
        return load_gray_png(path);
    } catch (const Error& e) {
        io.err << "warning: ignoring base image " << path.string() << ": " << e.what() << '\n';
        return std::nullopt;
    }
}

// Overlays of a 3D volume show its middle slice.
std::size_t display_slice(const LabelMask& m) { return m.ndim() == 3 ? m.shape()[0] / 2 : 0; }

LabelMask binarize(const ProbabilityGrid& grid, ClassId foreground) {
    std::vector<ClassId> labels(grid.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = grid.values()[i] >= 0.5f ? foreground : ClassId{0};
    return LabelMask(grid.shape(), std::move(labels), grid.spacing());
}

void emit_overlays(DatasetReport& report, const RunConfig& config, const fs::path& out_dir, const Streams& io) {
    const fs::path dir = out_dir / "overlays";
    ensure_directory(dir);
    const auto palette = palette_for(report.catalog);
    const auto background = report.catalog.background();
    const auto foreground = report.catalog.foreground_ids();
    for (const auto& s : report.samples) {
        if (s.failed()) continue;
        LabelMask gt = load_mask(s.gt_path);
        Prediction pred_any = load_prediction(s.pred_path);
        LabelMask pred = std::holds_alternative<LabelMask>(pred_any)
                             ? std::get<LabelMask>(std::move(pred_any))
                             : binarize(std::get<ProbabilityGrid>(pred_any), foreground.at(0));
        if (!shape_compatible(gt, pred)) continue;
        const std::size_t slice = display_slice(gt);
        std::optional<GrayImage> base;
        if (!config.images_dir.empty()) base = try_base_image(fs::path(config.images_dir) / (s.sample_id + ".png"), io);

        OverlaySpec spec;
        spec.palette = palette;
        spec.alpha = config.alpha;
        spec.background = background;
        spec.slice = slice;
        auto add = [&](const std::string& name, const RgbImage& img) {
            save_rgb_png(img, dir / name);
            report.artifacts.push_back({"overlay", "overlays/" + name});
        };
        add(s.sample_id + "_all_gt-overlay.png", render_overlay(base, gt, spec));
        add(s.sample_id + "_all_pred-overlay.png", render_overlay(base, pred, spec));
        DisagreementStyle style;
        style.slice = slice;
        for (ClassId id : foreground) {
            add(s.sample_id + "_" + class_token(report.catalog, id) + "_disagreement.png",
                render_disagreement(base, gt, pred, id, style));
        }
    }
}

void emit_plots(DatasetReport& report, const fs::path& out_dir) {
    const fs::path dir = out_dir / "plots";
    ensure_directory(dir);
    const auto& agg = report.aggregates;
    auto add = [&](const std::string& name, const std::string& svg) {
        write_file(dir / name, svg);
        report.artifacts.push_back({"plot", "plots/" + name});
    };
    if (auto it = agg.macro.find("dsc"); it != agg.macro.end()) {
        add("dataset_macro_dsc-histogram.svg",
            render_histogram_svg(it->second.histogram, {"Macro DSC per sample", "DSC", "samples"}));
    }
    std::vector<std::pair<std::string, Distribution>> series;
    for (const auto& [id, block] : agg.per_class) {
        auto it = block.find("dsc");
        if (it == block.end()) continue;
        const std::string name = report.catalog.name_of(id);
        add("dataset_" + class_token(report.catalog, id) + "_dsc-histogram.svg",
            render_histogram_svg(it->second.histogram, {"DSC per sample: " + name, "DSC", "samples"}));
        if (it->second.distribution) series.emplace_back(name, *it->second.distribution);
    }
    if (!series.empty()) add("dataset_all_dsc-boxplot.svg", render_boxplot_svg(series, {"DSC by class", "class", "DSC"}));
}

bool emits(const RunConfig& config, const std::string& what) {
    const auto& e = config.options.emit;
    return std::find(e.begin(), e.end(), what) != e.end();
}

}  // namespace

int cmd_evaluate(const RunConfig& config, const Streams& io) {
    try {
        for (const auto& e : config.options.emit) {
            const auto& known = known_emit_flags();
            if (std::find(known.begin(), known.end(), e) == known.end()) {
                throw Error("INVALID_CONFIG", "unknown emit flag '" + e + "'");
            }
        }
        if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw Error("INVALID_CONFIG", "alpha must lie in (0, 1]");

        EvaluationOptions options = config.options;
        std::vector<SamplePair> pairs;
        if (!config.manifest.empty()) {
            pairs = read_manifest(config.manifest);
            options.pairing = "manifest";
            options.gt_source = config.manifest;
            options.pred_source = config.manifest;
        } else {
            if (config.gt_dir.empty() || config.pred_dir.empty()) {
                throw Error("INVALID_CONFIG", "--gt and --pred (or --manifest) are required");
            }
            pairs = pair_by_filename(config.gt_dir, config.pred_dir);
            options.pairing = "by_filename";
            options.gt_source = config.gt_dir;
            options.pred_source = config.pred_dir;
        }
        if (pairs.empty()) throw Error("NO_PAIRS", "no pairs resolved");

        const ClassCatalog catalog = config.classes_file.empty() ? ClassCatalog{} : load_catalog(config.classes_file);
        DatasetReport report = evaluate_dataset(pairs, catalog, options);

        const fs::path out_dir(config.output_dir);
        ensure_directory(out_dir);
        if (emits(config, "overlays")) emit_overlays(report, config, out_dir, io);
        if (emits(config, "plots")) emit_plots(report, out_dir);
        report.lint = lint_report(report);

        if (emits(config, "json")) write_file(out_dir / "report.json", dump_json(report_to_json(report)));
        if (emits(config, "csv")) write_file(out_dir / "report.csv", report_to_csv(report));

        print_summary(report, io);
        return report.any_failed() ? kExitFlagged : kExitOk;
    } catch (const Error& e) {
        io.err << paint(io, kRed, "error: ") << e.what() << '\n';
        return kExitFatal;
    }
}

int cmd_scenarios(const ScenarioConfig& config, const Streams& io) {
    try {
        const LabelMask gt_raw = load_mask(config.gt_path);
        std::vector<ClassId> bin(gt_raw.size());
        for (std::size_t i = 0; i < bin.size(); ++i) bin[i] = gt_raw[i] == config.foreground ? 1 : 0;
        const LabelMask gt(gt_raw.shape(), std::move(bin), gt_raw.spacing());

        Json rows = Json::array();
        std::string head = fmt::format("{:<20}", "scenario");
        for (const auto& [key, label] : summary_columns()) head += fmt::format(" {:>8}", label);
        io.out << paint(io, kBold, head) << '\n';

        for (ScenarioKind kind :
             {ScenarioKind::NoSegmentation, ScenarioKind::FullSegmentation, ScenarioKind::RandomSegmentation}) {
            Scenario sc;
            sc.kind = kind;
            sc.probability = config.probability;
            if (kind == ScenarioKind::RandomSegmentation) sc.seed = config.seed;
            const LabelMask pred = make_scenario(gt, sc);
            const ConfusionCounts c = confuse_binary(gt, pred, 1);
            const MetricSet ms = metric_set(c, config.empty_policy);
            const Score distance = ahd(gt, pred, 1, config.surface_only);

            std::map<std::string, Score> values;
            for (Metric m : kMetricOrder) values.emplace(std::string(metric_name(m)), ms.get(m));
            values.emplace("ahd", distance);

            std::string line = fmt::format("{:<20}", scenario_name(kind));
            for (const auto& [key, label] : summary_columns()) line += fmt::format(" {:>8}", cell(values.at(key)));
            io.out << line << '\n';

            Json metrics;
            for (const auto& key : report_metric_keys()) metrics[key] = score_to_json(values.at(key));
            rows.push_back(Json{{"scenario", std::string(scenario_name(kind))},
                                {"counts", Json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}}},
                                {"metrics", metrics}});
        }

        Json shape = Json::array();
        for (auto d : gt.shape()) shape.push_back(d);
        Json doc;
        doc["version"] = kVersion;
        doc["config_echo"] = Json{{"software", std::string("segscore ") + kVersion},
                                  {"gt", config.gt_path},
                                  {"shape", shape},
                                  {"foreground_class", config.foreground},
                                  {"seed", config.seed},
                                  {"scenario_rng", std::string(kScenarioRng)},
                                  {"probability", config.probability},
                                  {"empty_policy", std::string(policy_name(config.empty_policy))},
                                  {"surface_only", config.surface_only}};
        doc["scenarios"] = rows;

        const fs::path out_dir(config.output_dir);
        ensure_directory(out_dir);
        write_file(out_dir / "scenarios.json", dump_json(doc));
        return kExitOk;
    } catch (const Error& e) {
        io.err << paint(io, kRed, "error: ") << e.what() << '\n';
        return kExitFatal;
    }
}

int cmd_lint(const std::string& report_path, const Streams& io) {
    std::ifstream in(report_path);
    if (!in) {
        io.err << paint(io, kRed, "error: ") << "cannot read report " << report_path << '\n';
        return kExitFatal;
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        io.err << paint(io, kRed, "error: ") << "malformed report JSON: " << e.what() << '\n';
        return kExitFatal;
    }
    if (!doc.is_object()) {
        io.err << paint(io, kRed, "error: ") << "malformed report JSON: top level is not an object\n";
        return kExitFatal;
    }
    const auto findings = lint_report(doc);
    for (const auto& f : findings) {
        const char* code = f.severity == "error" ? kRed : kYellow;
        io.out << paint(io, code, fmt::format("{} {}: {}", f.rule, f.severity, f.message)) << '\n';
    }
    io.out << findings.size() << (findings.size() == 1 ? " finding" : " findings") << '\n';
    return has_errors(findings) ? kExitLintErrors : kExitOk;
}

int cmd_visualize(const VisualizeConfig& config, const Streams& io) {
    try {
        const LabelMask gt = load_mask(config.gt_path);
        const LabelMask pred = load_mask(config.pred_path);
        if (!shape_compatible(gt, pred)) {
            throw Error("SHAPE_MISMATCH",
                        "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " + shape_string(pred.shape()));
        }
        const ClassCatalog catalog = config.classes_file.empty() ? ClassCatalog::from_ids(labels_present(gt, pred))
                                                                 : load_catalog(config.classes_file);
        std::optional<GrayImage> base;
        if (!config.image_path.empty()) base = load_gray_png(config.image_path);

        const fs::path out_dir(config.output_dir);
        ensure_directory(out_dir);
        const std::string id = fs::path(config.gt_path).stem().string();

        OverlaySpec spec;
        spec.palette = palette_for(catalog);
        spec.alpha = config.alpha;
        spec.background = catalog.background();
        spec.slice = config.slice;
        for (const auto& l : labels_present(gt, pred)) {
            if (l != spec.background && !spec.palette.count(l)) {
                throw Error("MISSING_PALETTE_ENTRY", "label " + std::to_string(l) + " is not in the class catalog");
            }
        }
        std::vector<std::string> written;
        auto save = [&](const std::string& name, const auto& img) {
            if constexpr (std::is_same_v<std::decay_t<decltype(img)>, RgbImage>) save_rgb_png(img, out_dir / name);
            else save_gray_png(img, out_dir / name);
            written.push_back(name);
        };
        save(id + "_all_gt-overlay.png", render_overlay(base, gt, spec));
        save(id + "_all_pred-overlay.png", render_overlay(base, pred, spec));
        DisagreementStyle style;
        style.slice = config.slice;
        for (ClassId c : catalog.foreground_ids()) {
            save(id + "_" + class_token(catalog, c) + "_disagreement.png", render_disagreement(base, gt, pred, c, style));
        }
        for (const auto& [c, img] : render_binary_panels(gt, catalog, config.slice)) {
            save(id + "_" + class_token(catalog, c) + "_gt-panel.png", img);
        }
        for (const auto& [c, img] : render_binary_panels(pred, catalog, config.slice)) {
            save(id + "_" + class_token(catalog, c) + "_pred-panel.png", img);
        }
        for (const auto& w : written) io.out << (out_dir / w).string() << '\n';
        return kExitOk;
    } catch (const Error& e) {
        io.err << paint(io, kRed, "error: ") << e.what() << '\n';
        return kExitFatal;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
    const Streams io{out, err, color};
    CLI::App app{"Segmentation evaluation: metrics, reports, scenarios, lint and overlays", "segscore"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Evaluate prediction masks against ground truth");
    std::string config_file;
    RunConfig flags;
    std::uint64_t seed = 0;
    std::string empty_policy;
    std::string undefined_handling;
    std::size_t thresholds = 0;
    std::size_t workers = 0;
    std::size_t histogram_bins = 0;
    std::size_t worst_k = 0;
    std::size_t best_k = 0;
    std::vector<std::string> emit;
    auto* o_gt = eval->add_option("--gt", flags.gt_dir, "Ground-truth directory");
    auto* o_pred = eval->add_option("--pred", flags.pred_dir, "Prediction directory");
    auto* o_out = eval->add_option("--out", flags.output_dir, "Output directory");
    auto* o_manifest = eval->add_option("--manifest", flags.manifest, "CSV of gt_path,pred_path,sample_id");
    auto* o_classes = eval->add_option("--classes", flags.classes_file, "JSON class catalog");
    auto* o_images = eval->add_option("--images", flags.images_dir, "Grayscale base images for overlays, by stem");
    eval->add_option("--config", config_file, "JSON config file; flags override it");
    auto* o_seed = eval->add_option("--seed", seed, "Seed recorded in the report");
    auto* o_surface = eval->add_flag("--surface-only", "AHD over boundary elements only");
    auto* o_bg = eval->add_flag("--include-background", "Include the background class in averages");
    auto* o_policy = eval->add_option("--empty-policy", empty_policy, "score_one or undefined")
                         ->check(CLI::IsMember({"score_one", "undefined"}));
    auto* o_handling = eval->add_option("--undefined", undefined_handling, "skip or propagate undefined scores")
                           ->check(CLI::IsMember({"skip", "propagate"}));
    auto* o_thresholds = eval->add_option("--thresholds", thresholds, "ROC threshold count")->check(CLI::Range(2, 1000000));
    auto* o_workers = eval->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
    auto* o_bins = eval->add_option("--histogram-bins", histogram_bins, "Histogram bin count")->check(CLI::PositiveNumber);
    auto* o_worst = eval->add_option("--worst-k", worst_k, "Worst samples listed per metric");
    auto* o_best = eval->add_option("--best-k", best_k, "Best samples listed per metric");
    auto* o_alpha = eval->add_option("--alpha", flags.alpha, "Overlay opacity in (0, 1]");
    auto* o_emit = eval->add_option("--emit", emit, "Artifacts: csv,json,overlays,plots")->delimiter(',');

    // scenarios
    auto* scen = app.add_subcommand("scenarios", "Metric panel for no, full and random segmentation of one mask");
    ScenarioConfig sc;
    std::string sc_policy = "score_one";
    scen->add_option("--gt", sc.gt_path, "Ground-truth mask")->required();
    scen->add_option("--out", sc.output_dir, "Output directory");
    scen->add_option("--seed", sc.seed, "Seed for the random scenario");
    scen->add_option("--probability", sc.probability, "Foreground probability of the random scenario")
        ->check(CLI::Range(0.0, 1.0));
    scen->add_option("--foreground", sc.foreground, "Foreground class id");
    scen->add_flag("--surface-only", sc.surface_only, "AHD over boundary elements only");
    scen->add_option("--empty-policy", sc_policy, "score_one or undefined")
        ->check(CLI::IsMember({"score_one", "undefined"}));

    // lint
    auto* lint = app.add_subcommand("lint", "Check a report against the evaluation guideline");
    std::string report_path;
    lint->add_option("report", report_path, "report.json")->required();

    // visualize
    auto* vis = app.add_subcommand("visualize", "Overlays and disagreement maps for one pair");
    VisualizeConfig vc;
    vis->add_option("--gt", vc.gt_path, "Ground-truth mask")->required();
    vis->add_option("--pred", vc.pred_path, "Prediction mask")->required();
    vis->add_option("--out", vc.output_dir, "Output directory");
    vis->add_option("--image", vc.image_path, "Grayscale base image (PNG)");
    vis->add_option("--classes", vc.classes_file, "JSON class catalog");
    vis->add_option("--alpha", vc.alpha, "Overlay opacity in (0, 1]");
    vis->add_option("--slice", vc.slice, "Slice index for 3D masks");

    std::vector<std::string> argv_store = args;
    argv_store.insert(argv_store.begin(), "segscore");
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitFatal;
    }

    if (*eval) {
        RunConfig config;
        config.options.emit = {"csv", "json", "plots"};
        config.options.workers = std::max(1u, std::thread::hardware_concurrency());
        try {
            if (!config_file.empty()) {
                std::ifstream in(config_file);
                if (!in) throw Error("UNREADABLE_FILE", "cannot read config " + config_file);
                Json doc;
                try {
                    doc = Json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw Error("MALFORMED_JSON", "malformed config " + config_file + ": " + e.what());
                }
                apply_config_json(doc, config);
            }
        } catch (const Error& e) {
            err << paint(io, kRed, "error: ") << e.what() << '\n';
            return kExitFatal;
        }
        if (*o_gt) config.gt_dir = flags.gt_dir;
        if (*o_pred) config.pred_dir = flags.pred_dir;
        if (*o_out) config.output_dir = flags.output_dir;
        if (*o_manifest) config.manifest = flags.manifest;
        if (*o_classes) config.classes_file = flags.classes_file;
        if (*o_images) config.images_dir = flags.images_dir;
        if (*o_alpha) config.alpha = flags.alpha;
        auto& o = config.options;
        if (*o_seed) o.seed = seed;
        if (*o_surface) o.surface_only = true;
        if (*o_bg) o.include_background = true;
        if (*o_policy) o.empty_policy = *parse_empty_policy(empty_policy);
        if (*o_handling) o.undefined_handling = *parse_handling(undefined_handling);
        if (*o_thresholds) o.roc_thresholds = thresholds;
        if (*o_workers) o.workers = workers;
        if (*o_bins) o.histogram_bins = histogram_bins;
        if (*o_worst) o.worst_k = worst_k;
        if (*o_best) o.best_k = best_k;
        if (*o_emit) o.emit = emit;
        return cmd_evaluate(config, io);
    }
    if (*scen) {
        sc.empty_policy = *parse_empty_policy(sc_policy);
        return cmd_scenarios(sc, io);
    }
    if (*lint) return cmd_lint(report_path, io);
    if (*vis) return cmd_visualize(vc, io);
    return kExitFatal;
}

}  // namespace segscore::cli
