#pragma once

#include "segscore/confusion.hpp"
#include "segscore/mask.hpp"
#include "segscore/overlap.hpp"
#include "segscore/score.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace segscore {

enum class AveragingMode { Micro, Macro };
enum class UndefinedHandling { Skip, Propagate };

struct AveragingPolicy {
    AveragingMode mode = AveragingMode::Macro;
    bool include_background = false;
    UndefinedHandling undefined_handling = UndefinedHandling::Skip;
};

std::string_view mode_name(AveragingMode m) noexcept;
std::string_view handling_name(UndefinedHandling h) noexcept;
std::optional<UndefinedHandling> parse_handling(std::string_view name) noexcept;

/// An averaged value plus the bookkeeping reports need: how many classes
/// contributed and which ones were skipped for being undefined.
struct Average {
    Score value = Score::undefined(Reason::NoEligibleClasses);
    std::size_t used = 0;
    std::map<ClassId, Reason> skipped;
    std::string note;  // e.g. "pooled one-vs-rest" for micro specificity/accuracy
};

/// Arithmetic mean of the per-class values over eligible classes (the
/// background class is dropped unless the policy includes it).
Average macro_average(const std::map<ClassId, Score>& per_class, const AveragingPolicy& policy,
                      std::optional<ClassId> background = ClassId{0});

/// Sums the confusion cells of the eligible classes and evaluates `metric`
/// once on the pooled counts.
Average micro_average(const std::map<ClassId, ConfusionCounts>& per_class_counts, Metric metric,
                      const AveragingPolicy& policy, std::optional<ClassId> background = ClassId{0},
                      EmptyPolicy empty_policy = EmptyPolicy::ScoreOne);

struct ReportOptions {
    EmptyPolicy empty_policy = EmptyPolicy::ScoreOne;
    bool surface_only = false;
    bool include_background = false;  // also report the background class
    bool compute_ahd = true;
};

struct ClassResult {
    ConfusionCounts counts;
    MetricSet metrics;
    Score ahd = Score::undefined(Reason::NotComputed);
    bool absent_in_gt = false;

    friend bool operator==(const ClassResult&, const ClassResult&) = default;
};

/// Classes that a report covers: the catalog (or, if it is empty, every label
/// present in either mask with 0 as background), minus the background unless
/// requested.
std::vector<ClassId> report_classes(const LabelMask& gt, const LabelMask& pred, const ClassCatalog& catalog,
                                    bool include_background);

/// Full metric panel for each class of the pair.
std::map<ClassId, ClassResult> per_class_report(const LabelMask& gt, const LabelMask& pred,
                                                const ClassCatalog& catalog, const ReportOptions& options);

}  // namespace segscore
