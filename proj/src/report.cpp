#include "segscore/report.hpp"

#include "segscore/distance.hpp"
#include "segscore/lint.hpp"
#include "segscore/scenario.hpp"
#include "segscore/version.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

namespace segscore {

namespace {

constexpr const char* kAhdKey = "ahd";

// Runs fn(i) for i in [0, n) on up to `workers` threads. Results must be
// written to per-index slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::optional<ClassId> effective_background(const ClassCatalog& catalog) {
    return catalog.empty() ? std::optional<ClassId>(ClassId{0}) : catalog.background();
}

void add_flag(std::vector<std::string>& flags, const std::string& flag) {
    if (std::find(flags.begin(), flags.end(), flag) == flags.end()) flags.push_back(flag);
}

std::string format_real(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_score(const Score& s) {
    return s.defined() ? format_real(s.value()) : "UNDEFINED:" + std::string(reason_name(s.reason()));
}

void dump_value(const Json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + Json(it.key()).dump() + ": ";
                dump_value(it.value(), indent, depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_value(v, indent, depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case Json::value_t::number_float: out += format_real(j.get<double>()); return;
        default: out += j.dump(); return;
    }
}

bool lower_is_better(const std::string& key) { return key == kAhdKey; }

}  // namespace

const std::vector<std::string>& report_metric_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (Metric m : kMetricOrder) k.emplace_back(metric_name(m));
        k.emplace_back(kAhdKey);
        return k;
    }();
    return keys;
}

bool is_failure_flag(const std::string& flag) {
    static const std::set<std::string> failures = {"LOAD_FAILED", "SHAPE_MISMATCH", "NO_GROUND_TRUTH",
                                                   "UNSUPPORTED_PREDICTION"};
    return failures.count(flag) > 0;
}

bool DatasetReport::any_failed() const {
    return std::any_of(samples.begin(), samples.end(), [](const SampleResult& s) { return s.failed(); });
}

// ---------------------------------------------------------------------------
// Evaluation

SampleResult evaluate_sample(const std::string& sample_id, const LabelMask& gt, const Prediction& pred,
                             const ClassCatalog& catalog, const EvaluationOptions& options) {
    SampleResult result;
    result.sample_id = sample_id;
    const auto background = effective_background(catalog);

    auto fail = [&](const std::string& flag, const std::string& message) {
        add_flag(result.flags, flag);
        result.error = message;
        return result;
    };

    std::optional<LabelMask> hard;
    if (const auto* grid = std::get_if<ProbabilityGrid>(&pred)) {
        if (grid->shape() != gt.shape()) {
            return fail("SHAPE_MISMATCH", "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " +
                                              shape_string(grid->shape()));
        }
        std::vector<ClassId> fg = catalog.empty() ? std::vector<ClassId>{} : catalog.foreground_ids();
        if (catalog.empty()) {
            for (ClassId id : labels_present(gt, gt)) {
                if (id != 0) fg.push_back(id);
            }
            if (fg.empty()) fg.push_back(1);
        }
        if (fg.size() != 1) {
            return fail("UNSUPPORTED_PREDICTION", "probability predictions require exactly one foreground class");
        }
        const ClassId positive = fg.front();
        const ClassId negative = background.value_or(0);
        std::vector<ClassId> labels(grid->size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = grid->values()[i] >= 0.5f ? positive : negative;
        hard.emplace(grid->shape(), std::move(labels), grid->spacing());
        add_flag(result.flags, "PROBABILISTIC_PRED");
        try {
            RocSummary roc;
            roc.positive_class = positive;
            roc.points = roc_curve(gt, *grid, positive, uniform_thresholds(options.roc_thresholds));
            roc.auc = auc_trapezoid(roc.points);
            result.roc = std::move(roc);
        } catch (const Error& e) {
            add_flag(result.flags, e.code());
        }
    }
    const LabelMask& prediction = hard ? *hard : std::get<LabelMask>(pred);

    if (!shape_compatible(gt, prediction)) {
        return fail("SHAPE_MISMATCH", "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " +
                                          shape_string(prediction.shape()));
    }
    if (!spacing_equal(gt, prediction)) add_flag(result.flags, "SPACING_MISMATCH");

    ReportOptions ro;
    ro.empty_policy = options.empty_policy;
    ro.surface_only = options.surface_only;
    ro.include_background = options.include_background;
    result.per_class = per_class_report(gt, prediction, catalog, ro);

    for (const auto& [id, r] : result.per_class) {
        if (!r.ahd.defined() && (r.ahd.reason() == Reason::EmptyGt || r.ahd.reason() == Reason::EmptyPred)) {
            add_flag(result.flags, std::string(reason_name(r.ahd.reason())));
        }
    }

    AveragingPolicy macro{AveragingMode::Macro, options.include_background, options.undefined_handling};
    AveragingPolicy micro{AveragingMode::Micro, options.include_background, options.undefined_handling};
    std::map<ClassId, ConfusionCounts> counts;
    for (const auto& [id, r] : result.per_class) counts.emplace(id, r.counts);

    for (Metric m : kMetricOrder) {
        std::map<ClassId, Score> values;
        for (const auto& [id, r] : result.per_class) values.emplace(id, r.metrics.get(m));
        const std::string key(metric_name(m));
        result.macro.emplace(key, macro_average(values, macro, background).value);
        result.micro.emplace(key, micro_average(counts, m, micro, background, options.empty_policy).value);
    }
    std::map<ClassId, Score> distances;
    for (const auto& [id, r] : result.per_class) distances.emplace(id, r.ahd);
    result.macro.emplace(kAhdKey, macro_average(distances, macro, background).value);
    return result;
}

std::pair<double, double> histogram_range(const std::string& metric_key, const std::vector<double>& values) {
    if (metric_key == "kappa") return {-1.0, 1.0};
    if (metric_key == kAhdKey) {
        double hi = 0.0;
        for (double v : values) hi = std::max(hi, v);
        return {0.0, hi > 0.0 ? hi : 1.0};
    }
    return {0.0, 1.0};
}

MetricAggregate aggregate_scores(const std::string& metric_key, const std::vector<Score>& scores, std::size_t bins) {
    MetricAggregate agg;
    std::vector<double> values;
    for (const auto& s : scores) {
        if (s.defined()) values.push_back(s.value());
        else ++agg.undefined;
    }
    if (!values.empty()) agg.distribution = describe(values);
    const auto [lo, hi] = histogram_range(metric_key, values);
    agg.histogram = histogram(values, bins, lo, hi);
    return agg;
}

DatasetAggregates compute_aggregates(const std::vector<SampleResult>& samples, const ClassCatalog& catalog,
                                     const EvaluationOptions& options) {
    DatasetAggregates agg;
    const auto& keys = report_metric_keys();

    std::set<ClassId> classes;
    for (ClassId id : options.include_background ? catalog.ids() : catalog.foreground_ids()) classes.insert(id);
    for (const auto& s : samples) {
        for (const auto& [id, r] : s.per_class) classes.insert(id);
    }

    for (ClassId id : classes) {
        auto& per_metric = agg.per_class[id];
        for (const auto& key : keys) {
            std::vector<Score> scores;
            for (const auto& s : samples) {
                auto it = s.per_class.find(id);
                if (s.failed() || it == s.per_class.end()) continue;
                if (key == kAhdKey) scores.push_back(it->second.ahd);
                else scores.push_back(it->second.metrics.get(*parse_metric(key)));
            }
            per_metric.emplace(key, aggregate_scores(key, scores, options.histogram_bins));
        }
    }

    for (const auto& key : keys) {
        std::vector<Score> macro_scores;
        std::vector<Score> micro_scores;
        std::vector<RankedSample> ranked;
        for (const auto& s : samples) {
            if (s.failed()) continue;
            const Score& m = s.macro.at(key);
            macro_scores.push_back(m);
            if (m.defined()) ranked.push_back({s.sample_id, m.value()});
            if (auto it = s.micro.find(key); it != s.micro.end()) micro_scores.push_back(it->second);
        }
        agg.macro.emplace(key, aggregate_scores(key, macro_scores, options.histogram_bins));
        if (key != kAhdKey) agg.micro.emplace(key, aggregate_scores(key, micro_scores, options.histogram_bins));

        // Worst first: lowest score, or highest distance.
        const bool lower_better = lower_is_better(key);
        std::sort(ranked.begin(), ranked.end(), [&](const RankedSample& a, const RankedSample& b) {
            if (a.score != b.score) return lower_better ? a.score > b.score : a.score < b.score;
            return a.sample_id < b.sample_id;
        });
        agg.worst_k[key] = {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(
                                                                 std::min(options.worst_k, ranked.size()))};
        std::sort(ranked.begin(), ranked.end(), [&](const RankedSample& a, const RankedSample& b) {
            if (a.score != b.score) return lower_better ? a.score < b.score : a.score > b.score;
            return a.sample_id < b.sample_id;
        });
        if (options.best_k > 0) {
            agg.best_k[key] = {ranked.begin(),
                               ranked.begin() + static_cast<std::ptrdiff_t>(std::min(options.best_k, ranked.size()))};
        }
    }
    return agg;
}

DatasetReport evaluate_loaded(std::vector<LoadedPair> pairs, const ClassCatalog& catalog,
                              const EvaluationOptions& options) {
    if (pairs.empty()) throw Error("NO_PAIRS", "no pairs resolved");
    {
        std::set<std::string> ids;
        for (const auto& p : pairs) {
            if (!ids.insert(p.sample_id).second) throw Error("DUPLICATE_SAMPLE", "duplicate sample id " + p.sample_id);
        }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const LoadedPair& a, const LoadedPair& b) { return a.sample_id < b.sample_id; });

    DatasetReport report;
    report.version = kVersion;
    report.options = options;
    if (catalog.empty()) {
        std::vector<bool> seen(65536, false);
        seen[0] = true;
        for (const auto& p : pairs) {
            if (p.gt) {
                for (ClassId v : p.gt->labels()) seen[v] = true;
            }
            if (p.pred) {
                if (const auto* m = std::get_if<LabelMask>(&*p.pred)) {
                    for (ClassId v : m->labels()) seen[v] = true;
                }
            }
        }
        std::vector<ClassId> ids;
        for (std::size_t v = 0; v < seen.size(); ++v) {
            if (seen[v]) ids.push_back(static_cast<ClassId>(v));
        }
        if (ids.size() == 1) ids.push_back(1);  // binary setting with nothing segmented anywhere
        report.catalog = ClassCatalog::from_ids(ids);
    } else {
        report.catalog = catalog;
    }

    report.samples.resize(pairs.size());
    parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
        const LoadedPair& p = pairs[i];
        SampleResult r;
        if (!p.error.empty()) {
            r.sample_id = p.sample_id;
            r.error = p.error;
            r.flags.push_back(p.error_flag.empty() ? "LOAD_FAILED" : p.error_flag);
        } else {
            r = evaluate_sample(p.sample_id, *p.gt, *p.pred, report.catalog, options);
        }
        r.gt_path = p.gt_path;
        r.pred_path = p.pred_path;
        report.samples[i] = std::move(r);
    });

    if (std::all_of(report.samples.begin(), report.samples.end(), [](const SampleResult& s) { return s.failed(); })) {
        throw Error("ALL_PAIRS_FAILED", "every pair failed to evaluate; first error: " + report.samples.front().error);
    }
    report.aggregates = compute_aggregates(report.samples, report.catalog, options);
    report.lint = lint_report(report);
    return report;
}

DatasetReport evaluate_dataset(const std::vector<SamplePair>& pairs, const ClassCatalog& catalog,
                               const EvaluationOptions& options) {
    std::vector<LoadedPair> loaded(pairs.size());
    parallel_for(pairs.size(), options.workers, [&](std::size_t i) {
        const SamplePair& p = pairs[i];
        LoadedPair& l = loaded[i];
        l.sample_id = p.sample_id;
        l.gt_path = p.gt.generic_string();
        l.pred_path = p.pred.generic_string();
        if (p.gt.empty()) {
            l.error = "no ground truth for prediction " + l.pred_path;
            l.error_flag = "NO_GROUND_TRUTH";
            return;
        }
        try {
            l.gt = load_mask(p.gt);
            l.pred = load_prediction(p.pred);
        } catch (const Error& e) {
            l.gt.reset();
            l.pred.reset();
            l.error = e.what();
            l.error_flag = "LOAD_FAILED";
        }
    });
    return evaluate_loaded(std::move(loaded), catalog, options);
}

// ---------------------------------------------------------------------------
// Serialization

Json score_to_json(const Score& s) {
    if (s.defined()) return s.value();
    return Json{{"undefined", std::string(reason_name(s.reason()))}};
}

Score score_from_json(const Json& j) {
    if (j.is_number()) return Score::of(j.get<double>());
    if (j.is_object() && j.contains("undefined")) {
        const auto reason = parse_reason(j.at("undefined").get<std::string>());
        if (reason) return Score::undefined(*reason);
    }
    throw Error("MALFORMED_REPORT", "not a score: " + j.dump());
}

Json aggregate_to_json(const MetricAggregate& a) {
    Json j;
    j["n"] = a.distribution ? a.distribution->n : 0;
    j["undefined"] = a.undefined;
    if (a.distribution) {
        const auto& d = *a.distribution;
        j["mean"] = d.mean;
        j["std"] = d.std;
        j["min"] = d.min;
        j["q1"] = d.q1;
        j["median"] = d.median;
        j["q3"] = d.q3;
        j["max"] = d.max;
    }
    Json bins = Json::array();
    for (const auto& b : a.histogram.bins) bins.push_back(Json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
    j["histogram"] = Json{{"bins", bins}, {"below", a.histogram.below}, {"above", a.histogram.above}};
    return j;
}

Json config_echo(const DatasetReport& report) {
    const auto& o = report.options;
    Json classes = Json::array();
    for (const auto& e : report.catalog.entries()) {
        classes.push_back(Json{{"id", e.id}, {"name", e.name}, {"background", e.is_background}});
    }
    Json metrics = Json::array();
    for (const auto& k : report_metric_keys()) metrics.push_back(k);

    Json j;
    j["software"] = std::string("segscore ") + report.version;
    j["primary_metric"] = "dsc";
    j["metrics"] = metrics;
    j["empty_policy"] = std::string(policy_name(o.empty_policy));
    j["averaging"] = Json{{"modes", Json::array({"macro", "micro"})},
                          {"include_background", o.include_background},
                          {"undefined_handling", std::string(handling_name(o.undefined_handling))},
                          {"micro_note", "specificity, accuracy, auc and kappa are pooled one-vs-rest"}};
    j["distance"] = Json{{"function", "euclidean"},
                         {"point_sets", o.surface_only ? "surface" : "full_region"},
                         {"surface_only", o.surface_only}};
    j["roc_thresholds"] = o.roc_thresholds;
    j["probability_cutoff"] = 0.5;
    j["histogram"] = Json{{"bins", o.histogram_bins}, {"convention", "right-closed bins (a, b], first bin closed"}};
    j["quantiles"] = "linear interpolation";
    j["std"] = "population";
    j["worst_k"] = o.worst_k;
    j["best_k"] = o.best_k;
    j["seed"] = o.seed ? Json(*o.seed) : Json(nullptr);
    j["scenario_rng"] = std::string(kScenarioRng);
    j["pairing"] = o.pairing;
    j["gt_source"] = o.gt_source;
    j["pred_source"] = o.pred_source;
    j["classes"] = classes;
    j["emit"] = o.emit;
    return j;
}

Json report_to_json(const DatasetReport& report) {
    const auto& keys = report_metric_keys();
    Json samples = Json::array();
    for (const auto& s : report.samples) {
        Json js;
        js["sample_id"] = s.sample_id;
        js["gt"] = s.gt_path;
        js["pred"] = s.pred_path;
        js["flags"] = s.flags;
        if (s.failed()) {
            js["error"] = s.error;
            samples.push_back(js);
            continue;
        }
        Json classes = Json::array();
        for (const auto& [id, r] : s.per_class) {
            Json jc;
            jc["class_id"] = id;
            jc["name"] = report.catalog.name_of(id);
            jc["absent_in_gt"] = r.absent_in_gt;
            jc["counts"] = Json{{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}};
            Json jm;
            for (Metric m : kMetricOrder) jm[std::string(metric_name(m))] = score_to_json(r.metrics.get(m));
            jm[kAhdKey] = score_to_json(r.ahd);
            jc["metrics"] = jm;
            classes.push_back(jc);
        }
        js["classes"] = classes;
        Json macro;
        for (const auto& k : keys) macro[k] = score_to_json(s.macro.at(k));
        js["macro"] = macro;
        Json micro;
        for (const auto& k : keys) {
            if (auto it = s.micro.find(k); it != s.micro.end()) micro[k] = score_to_json(it->second);
        }
        js["micro"] = micro;
        if (s.roc) {
            Json pts = Json::array();
            for (const auto& p : s.roc->points) pts.push_back(Json{{"threshold", p.threshold}, {"tpr", p.tpr}, {"fpr", p.fpr}});
            js["roc"] = Json{{"positive_class", s.roc->positive_class}, {"auc", s.roc->auc}, {"points", pts}};
        }
        samples.push_back(js);
    }

    const auto& a = report.aggregates;
    Json per_class = Json::object();
    for (const auto& [id, metrics] : a.per_class) {
        Json jm;
        for (const auto& k : keys) {
            if (auto it = metrics.find(k); it != metrics.end()) jm[k] = aggregate_to_json(it->second);
        }
        per_class[std::to_string(id)] = jm;
    }
    auto policy_block = [&](const std::map<std::string, MetricAggregate>& m) {
        Json j = Json::object();
        for (const auto& k : keys) {
            if (auto it = m.find(k); it != m.end()) j[k] = aggregate_to_json(it->second);
        }
        return j;
    };
    auto ranking_block = [&](const std::map<std::string, std::vector<RankedSample>>& m) {
        Json j = Json::object();
        for (const auto& k : keys) {
            auto it = m.find(k);
            if (it == m.end()) continue;
            Json list = Json::array();
            for (const auto& r : it->second) list.push_back(Json{{"sample_id", r.sample_id}, {"score", r.score}});
            j[k] = list;
        }
        return j;
    };
    Json aggregates;
    aggregates["per_class"] = per_class;
    aggregates["macro"] = policy_block(a.macro);
    aggregates["micro"] = policy_block(a.micro);
    aggregates["worst_k"] = ranking_block(a.worst_k);
    if (!a.best_k.empty()) aggregates["best_k"] = ranking_block(a.best_k);

    Json artifacts = Json::array();
    for (const auto& art : report.artifacts) artifacts.push_back(Json{{"kind", art.kind}, {"path", art.path}});
    Json lint = Json::array();
    for (const auto& f : report.lint) {
        lint.push_back(Json{{"rule", f.rule}, {"severity", f.severity}, {"message", f.message}});
    }

    Json j;
    j["version"] = report.version;
    j["config_echo"] = config_echo(report);
    j["samples"] = samples;
    j["aggregates"] = aggregates;
    j["artifacts"] = artifacts;
    j["lint"] = lint;
    return j;
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_value(j, indent, 0, out);
    out += "\n";
    return out;
}

std::string report_to_csv(const DatasetReport& report) {
    std::ostringstream out;
    out << "sample_id,class_id,class_name,iou,dsc,sensitivity,specificity,accuracy,auc,kappa,ahd,flags\n";
    for (const auto& s : report.samples) {
        std::string flags;
        for (const auto& f : s.flags) flags += (flags.empty() ? "" : ";") + f;
        if (s.failed()) {
            out << csv_field(s.sample_id) << ",,,,,,,,,,," << csv_field(flags) << "\n";
            continue;
        }
        for (const auto& [id, r] : s.per_class) {
            const auto& m = r.metrics;
            out << csv_field(s.sample_id) << ',' << id << ',' << csv_field(report.catalog.name_of(id)) << ','
                << csv_score(m.iou) << ',' << csv_score(m.dsc) << ',' << csv_score(m.sensitivity) << ','
                << csv_score(m.specificity) << ',' << csv_score(m.accuracy) << ',' << csv_score(m.auc) << ','
                << csv_score(m.kappa) << ',' << csv_score(r.ahd) << ',' << csv_field(flags) << "\n";
        }
    }
    return out.str();
}

}  // namespace segscore
