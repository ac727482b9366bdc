#pragma once

#include "segscore/confusion.hpp"
#include "segscore/score.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace segscore {

/// How IoU and DSC treat 0/0 (class absent from both masks).
enum class EmptyPolicy {
    ScoreOne,   // both empty = perfect agreement
    Undefined,  // UNDEFINED(EMPTY_BOTH)
};

std::string_view policy_name(EmptyPolicy p) noexcept;
std::optional<EmptyPolicy> parse_empty_policy(std::string_view name) noexcept;

enum class Metric { Iou, Dsc, Sensitivity, Specificity, Accuracy, Auc, Kappa };

/// Reporting order: DSC first, then its companions, accuracy last among the
/// overlap metrics.
inline constexpr std::array<Metric, 7> kMetricOrder = {Metric::Dsc,      Metric::Iou, Metric::Sensitivity,
                                                       Metric::Specificity, Metric::Auc, Metric::Kappa,
                                                       Metric::Accuracy};

std::string_view metric_name(Metric m) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

Score iou(const ConfusionCounts& c, EmptyPolicy policy = EmptyPolicy::ScoreOne);
Score dsc(const ConfusionCounts& c, EmptyPolicy policy = EmptyPolicy::ScoreOne);
Score sensitivity(const ConfusionCounts& c);
Score specificity(const ConfusionCounts& c);

/// (TP + TN) / N. Throws on an all-zero count record.
double accuracy(const ConfusionCounts& c);

/// Single-point AUC of a hard segmentation: 1 - (FPR + FNR) / 2.
Score auc_single(const ConfusionCounts& c);

/// Cohen's kappa with chance agreement
///   fc = ((TN+FN)(TN+FP) + (FP+TP)(FN+TP)) / N,
///   kappa = (TP + TN - fc) / (N - fc).
/// Both numerator and denominator are scaled by N and evaluated in 128-bit
/// integers, so the degenerate case N == fc is detected exactly.
Score kappa(const ConfusionCounts& c);

Score compute(Metric m, const ConfusionCounts& c, EmptyPolicy policy);

struct MetricSet {
    Score iou = Score::undefined(Reason::NotComputed);
    Score dsc = Score::undefined(Reason::NotComputed);
    Score sensitivity = Score::undefined(Reason::NotComputed);
    Score specificity = Score::undefined(Reason::NotComputed);
    Score accuracy = Score::undefined(Reason::NotComputed);
    Score auc = Score::undefined(Reason::NotComputed);
    Score kappa = Score::undefined(Reason::NotComputed);

    const Score& get(Metric m) const;
    Score& get(Metric m);

    friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

MetricSet metric_set(const ConfusionCounts& c, EmptyPolicy policy = EmptyPolicy::ScoreOne);

}  // namespace segscore
