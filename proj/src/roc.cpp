#include "segscore/roc.hpp"

#include <algorithm>
#include <functional>

namespace segscore {

namespace {

void check_pair(const LabelMask& gt, const ProbabilityGrid& prob) {
    if (gt.shape() != prob.shape()) {
        throw Error("SHAPE_MISMATCH",
                    "shape mismatch: gt " + shape_string(gt.shape()) + " vs probabilities " + shape_string(prob.shape()));
    }
}

// Number of entries >= t in an ascending array.
std::uint64_t count_at_least(const std::vector<float>& sorted, double t) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), t,
                               [](float v, double thr) { return static_cast<double>(v) < thr; });
    return static_cast<std::uint64_t>(sorted.end() - it);
}

}  // namespace

std::vector<double> uniform_thresholds(std::size_t count) {
    if (count < 2) throw Error("INVALID_THRESHOLDS", "need at least 2 uniform thresholds");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

ConfusionCounts threshold_counts(const LabelMask& gt, const ProbabilityGrid& prob, ClassId positive_class,
                                 double threshold) {
    check_pair(gt, prob);
    ConfusionCounts c;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const bool truth = gt[i] == positive_class;
        const bool predicted = static_cast<double>(prob.values()[i]) >= threshold;
        if (truth && predicted) ++c.tp;
        else if (truth) ++c.fn;
        else if (predicted) ++c.fp;
        else ++c.tn;
    }
    return c;
}

std::vector<RocPoint> roc_curve(const LabelMask& gt, const ProbabilityGrid& prob, ClassId positive_class,
                                std::vector<double> thresholds) {
    check_pair(gt, prob);
    if (thresholds.empty()) throw Error("INVALID_THRESHOLDS", "threshold list must not be empty");
    for (double t : thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) throw Error("INVALID_THRESHOLDS", "thresholds must lie in [0,1]");
    }
    std::sort(thresholds.begin(), thresholds.end(), std::greater<>{});
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<float> positives;
    std::vector<float> negatives;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        (gt[i] == positive_class ? positives : negatives).push_back(prob.values()[i]);
    }
    if (positives.empty()) throw Error("ROC_UNDEFINED", "ROC needs positive ground-truth elements");
    if (negatives.empty()) throw Error("ROC_UNDEFINED", "ROC needs negative ground-truth elements");
    std::sort(positives.begin(), positives.end());
    std::sort(negatives.begin(), negatives.end());

    std::vector<RocPoint> points;
    points.reserve(thresholds.size());
    for (double t : thresholds) {
        const double tpr = static_cast<double>(count_at_least(positives, t)) / static_cast<double>(positives.size());
        const double fpr = static_cast<double>(count_at_least(negatives, t)) / static_cast<double>(negatives.size());
        points.push_back({t, tpr, fpr});
    }
    return points;
}

double auc_trapezoid(const std::vector<RocPoint>& points) {
    std::vector<std::pair<double, double>> curve;  // (fpr, tpr)
    curve.reserve(points.size() + 2);
    curve.emplace_back(0.0, 0.0);
    for (const auto& p : points) curve.emplace_back(p.fpr, p.tpr);
    curve.emplace_back(1.0, 1.0);
    std::sort(curve.begin(), curve.end());

    double area = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto [x0, y0] = curve[i - 1];
        const auto [x1, y1] = curve[i];
        area += (x1 - x0) * (y0 + y1) * 0.5;
    }
    return std::clamp(area, 0.0, 1.0);
}

}  // namespace segscore
