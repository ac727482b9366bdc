#pragma once

#include "segscore/aggregate.hpp"
#include "segscore/mask.hpp"
#include "segscore/mask_io.hpp"
#include "segscore/roc.hpp"
#include "segscore/statistics.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace segscore {

using Json = nlohmann::ordered_json;

/// Metric keys in report order: the overlap metrics, then "ahd".
const std::vector<std::string>& report_metric_keys();

struct EvaluationOptions {
    EmptyPolicy empty_policy = EmptyPolicy::ScoreOne;
    bool surface_only = false;
    bool include_background = false;
    UndefinedHandling undefined_handling = UndefinedHandling::Skip;
    std::size_t roc_thresholds = 101;
    std::size_t histogram_bins = 10;
    std::size_t worst_k = 5;
    std::size_t best_k = 0;
    std::size_t workers = 1;
    std::optional<std::uint64_t> seed;
    std::string pairing = "by_filename";
    std::string gt_source;
    std::string pred_source;
    std::vector<std::string> emit;
};

struct RocSummary {
    ClassId positive_class = 1;
    std::vector<RocPoint> points;
    double auc = 0.0;
};

struct SampleResult {
    std::string sample_id;
    std::string gt_path;
    std::string pred_path;
    std::map<ClassId, ClassResult> per_class;
    std::map<std::string, Score> macro;  // per metric key
    std::map<std::string, Score> micro;  // per overlap metric
    std::vector<std::string> flags;
    std::string error;  // non-empty when the pair could not be evaluated
    std::optional<RocSummary> roc;

    bool failed() const noexcept { return !error.empty(); }
};

/// Flags that mark a sample as not evaluated.
bool is_failure_flag(const std::string& flag);

struct MetricAggregate {
    std::size_t undefined = 0;
    std::optional<Distribution> distribution;  // absent when no value is defined
    Histogram histogram;
};

/// Histogram range used for a metric key: [0,1] for rates, [-1,1] for kappa,
/// and [0, max] (or [0,1] if max is 0) for distances.
std::pair<double, double> histogram_range(const std::string& metric_key, const std::vector<double>& values);

MetricAggregate aggregate_scores(const std::string& metric_key, const std::vector<Score>& scores, std::size_t bins);

struct RankedSample {
    std::string sample_id;
    double score = 0.0;
};

struct DatasetAggregates {
    std::map<ClassId, std::map<std::string, MetricAggregate>> per_class;
    std::map<std::string, MetricAggregate> macro;
    std::map<std::string, MetricAggregate> micro;
    std::map<std::string, std::vector<RankedSample>> worst_k;
    std::map<std::string, std::vector<RankedSample>> best_k;
};

struct Artifact {
    std::string kind;  // "overlay" or "plot"
    std::string path;  // relative to the output directory
};

struct LintFinding {
    std::string rule;
    std::string severity;  // "error", "warning" or "info"
    std::string message;

    friend bool operator==(const LintFinding&, const LintFinding&) = default;
};

struct DatasetReport {
    std::string version;
    ClassCatalog catalog;
    EvaluationOptions options;
    std::vector<SampleResult> samples;
    DatasetAggregates aggregates;
    std::vector<Artifact> artifacts;
    std::vector<LintFinding> lint;

    bool any_failed() const;
};

struct SamplePair {
    std::string sample_id;
    std::filesystem::path gt;
    std::filesystem::path pred;
};

/// A pair already in memory (or the reason it could not be loaded).
struct LoadedPair {
    std::string sample_id;
    std::string gt_path;
    std::string pred_path;
    std::optional<LabelMask> gt;
    std::optional<Prediction> pred;
    std::string error;
    std::string error_flag;  // e.g. LOAD_FAILED, NO_GROUND_TRUTH
};

/// Loads and evaluates every pair. Per-pair failures become flagged samples;
/// an Error is thrown only if no pair could be evaluated. Sample ids must be
/// unique. With an empty catalog, classes are discovered from all loaded
/// masks (0 = background).
DatasetReport evaluate_dataset(const std::vector<SamplePair>& pairs, const ClassCatalog& catalog,
                               const EvaluationOptions& options);

DatasetReport evaluate_loaded(std::vector<LoadedPair> pairs, const ClassCatalog& catalog,
                              const EvaluationOptions& options);

/// Evaluates one pair in memory.
SampleResult evaluate_sample(const std::string& sample_id, const LabelMask& gt, const Prediction& pred,
                             const ClassCatalog& catalog, const EvaluationOptions& options);

DatasetAggregates compute_aggregates(const std::vector<SampleResult>& samples, const ClassCatalog& catalog,
                                     const EvaluationOptions& options);

// Serialization ------------------------------------------------------------

Json score_to_json(const Score& s);
Score score_from_json(const Json& j);
Json aggregate_to_json(const MetricAggregate& a);
Json config_echo(const DatasetReport& report);
Json report_to_json(const DatasetReport& report);

/// Deterministic JSON text. Floating-point numbers are written with 17
/// significant digits; integral JSON numbers are written as integers.
std::string dump_json(const Json& j, int indent = 2);

std::string report_to_csv(const DatasetReport& report);

}  // namespace segscore
