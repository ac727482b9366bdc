#include "segscore/aggregate.hpp"

#include "segscore/distance.hpp"

#include <algorithm>

namespace segscore {

namespace {

bool eligible(ClassId id, const AveragingPolicy& policy, std::optional<ClassId> background) {
    return policy.include_background || !background || id != *background;
}

}  // namespace

std::string_view mode_name(AveragingMode m) noexcept { return m == AveragingMode::Micro ? "micro" : "macro"; }

std::string_view handling_name(UndefinedHandling h) noexcept {
    return h == UndefinedHandling::Skip ? "skip" : "propagate";
}

std::optional<UndefinedHandling> parse_handling(std::string_view name) noexcept {
    if (name == "skip") return UndefinedHandling::Skip;
    if (name == "propagate") return UndefinedHandling::Propagate;
    return std::nullopt;
}

Average macro_average(const std::map<ClassId, Score>& per_class, const AveragingPolicy& policy,
                      std::optional<ClassId> background) {
    Average out;
    // Shifted accumulation: the mean of equal values is exactly that value.
    double shift = 0.0;
    double sum = 0.0;
    bool poisoned = false;
    for (const auto& [id, score] : per_class) {
        if (!eligible(id, policy, background)) continue;
        if (!score.defined()) {
            out.skipped.emplace(id, score.reason());
            poisoned = poisoned || policy.undefined_handling == UndefinedHandling::Propagate;
            continue;
        }
        if (out.used == 0) shift = score.value();
        sum += score.value() - shift;
        ++out.used;
    }
    if (poisoned) {
        out.value = Score::undefined(Reason::PropagatedUndefined);
    } else if (out.used == 0) {
        out.value = Score::undefined(Reason::NoEligibleClasses);
    } else {
        out.value = Score::of(shift + sum / static_cast<double>(out.used));
    }
    return out;
}

Average micro_average(const std::map<ClassId, ConfusionCounts>& per_class_counts, Metric metric,
                      const AveragingPolicy& policy, std::optional<ClassId> background, EmptyPolicy empty_policy) {
    Average out;
    ConfusionCounts pooled;
    for (const auto& [id, counts] : per_class_counts) {
        if (!eligible(id, policy, background)) continue;
        pooled += counts;
        ++out.used;
    }
    if (out.used == 0) {
        out.value = Score::undefined(Reason::NoEligibleClasses);
        return out;
    }
    // Each element is a negative for every class it does not belong to, so
    // pooled TN counts elements more than once.
    if (metric == Metric::Specificity || metric == Metric::Accuracy || metric == Metric::Auc ||
        metric == Metric::Kappa) {
        out.note = "pooled one-vs-rest";
    }
    out.value = compute(metric, pooled, empty_policy);
    return out;
}

std::vector<ClassId> report_classes(const LabelMask& gt, const LabelMask& pred, const ClassCatalog& catalog,
                                    bool include_background) {
    const ClassCatalog effective = catalog.empty() ? ClassCatalog::from_ids(labels_present(gt, pred)) : catalog;
    return include_background ? effective.ids() : effective.foreground_ids();
}

std::map<ClassId, ClassResult> per_class_report(const LabelMask& gt, const LabelMask& pred,
                                                const ClassCatalog& catalog, const ReportOptions& options) {
    if (!shape_compatible(gt, pred)) {
        throw Error("SHAPE_MISMATCH",
                    "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " + shape_string(pred.shape()));
    }
    const std::vector<ClassId> classes = report_classes(gt, pred, catalog, options.include_background);
    std::map<ClassId, ClassResult> out;
    if (classes.empty()) return out;

    const ConfusionTable table = confuse(gt, pred, classes);
    for (ClassId id : classes) {
        ClassResult r;
        r.counts = table.per_class.at(id);
        r.metrics = metric_set(r.counts, options.empty_policy);
        r.absent_in_gt = table.absent_in_gt(id);
        if (options.compute_ahd) r.ahd = ahd(gt, pred, id, options.surface_only);
        out.emplace(id, r);
    }
    return out;
}

}  // namespace segscore
