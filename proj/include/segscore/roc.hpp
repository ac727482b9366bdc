#pragma once

#include "segscore/confusion.hpp"
#include "segscore/mask.hpp"

#include <vector>

namespace segscore {

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;

    friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// `count` evenly spaced thresholds over [0, 1], ascending. count >= 2.
std::vector<double> uniform_thresholds(std::size_t count = 101);

/// Confusion counts of `prob >= threshold` against `gt == positive_class`.
ConfusionCounts threshold_counts(const LabelMask& gt, const ProbabilityGrid& prob, ClassId positive_class,
                                 double threshold);

/// One point per threshold, in descending threshold order. The ground truth
/// must contain both positive and negative elements, otherwise TPR or FPR is
/// undefined and an Error is thrown.
std::vector<RocPoint> roc_curve(const LabelMask& gt, const ProbabilityGrid& prob, ClassId positive_class,
                                std::vector<double> thresholds);

/// Trapezoidal area under the curve through (0,0), the given points sorted by
/// FPR (then TPR), and (1,1).
double auc_trapezoid(const std::vector<RocPoint>& points);

}  // namespace segscore
