#include "segscore/overlap.hpp"

#include <stdexcept>
#include <utility>

namespace segscore {

namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 7> kMetricNames = {{
    {Metric::Iou, "iou"},
    {Metric::Dsc, "dsc"},
    {Metric::Sensitivity, "sensitivity"},
    {Metric::Specificity, "specificity"},
    {Metric::Accuracy, "accuracy"},
    {Metric::Auc, "auc"},
    {Metric::Kappa, "kappa"},
}};

double as_real(std::uint64_t v) { return static_cast<double>(v); }

Score overlap_ratio(std::uint64_t num, std::uint64_t den, EmptyPolicy policy) {
    if (den == 0) {
        return policy == EmptyPolicy::ScoreOne ? Score::of(1.0) : Score::undefined(Reason::EmptyBoth);
    }
    return Score::of(as_real(num) / as_real(den));
}

}  // namespace

std::string_view policy_name(EmptyPolicy p) noexcept {
    return p == EmptyPolicy::ScoreOne ? "score_one" : "undefined";
}

std::optional<EmptyPolicy> parse_empty_policy(std::string_view name) noexcept {
    if (name == "score_one") return EmptyPolicy::ScoreOne;
    if (name == "undefined") return EmptyPolicy::Undefined;
    return std::nullopt;
}

std::string_view metric_name(Metric m) noexcept {
    for (const auto& [metric, name] : kMetricNames) {
        if (metric == m) return name;
    }
    return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
    for (const auto& [metric, n] : kMetricNames) {
        if (n == name) return metric;
    }
    return std::nullopt;
}

Score iou(const ConfusionCounts& c, EmptyPolicy policy) { return overlap_ratio(c.tp, c.tp + c.fp + c.fn, policy); }

Score dsc(const ConfusionCounts& c, EmptyPolicy policy) {
    return overlap_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, policy);
}

Score sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return Score::undefined(Reason::NoPositivesInGt);
    return Score::of(as_real(c.tp) / as_real(c.tp + c.fn));
}

Score specificity(const ConfusionCounts& c) {
    if (c.tn + c.fp == 0) return Score::undefined(Reason::NoNegativesInGt);
    return Score::of(as_real(c.tn) / as_real(c.tn + c.fp));
}

double accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) throw std::invalid_argument("accuracy of an empty confusion record");
    return as_real(c.tp + c.tn) / as_real(c.total());
}

Score auc_single(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return Score::undefined(Reason::NoPositivesInGt);
    if (c.tn + c.fp == 0) return Score::undefined(Reason::NoNegativesInGt);
    const double fpr = as_real(c.fp) / as_real(c.fp + c.tn);
    const double fnr = as_real(c.fn) / as_real(c.fn + c.tp);
    return Score::of(1.0 - 0.5 * (fpr + fnr));
}

Score kappa(const ConfusionCounts& c) {
    __extension__ typedef __int128 wide;  // exact products of 64-bit counts
    const wide tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
    const wide n = tp + fp + tn + fn;
    // N * fc
    const wide chance = (tn + fn) * (tn + fp) + (fp + tp) * (fn + tp);
    const wide num = (tp + tn) * n - chance;
    const wide den = n * n - chance;
    if (den == 0) return Score::undefined(Reason::DegenerateMarginals);
    return Score::of(static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den)));
}

Score compute(Metric m, const ConfusionCounts& c, EmptyPolicy policy) {
    switch (m) {
        case Metric::Iou: return iou(c, policy);
        case Metric::Dsc: return dsc(c, policy);
        case Metric::Sensitivity: return sensitivity(c);
        case Metric::Specificity: return specificity(c);
        case Metric::Accuracy: return Score::of(accuracy(c));
        case Metric::Auc: return auc_single(c);
        case Metric::Kappa: return kappa(c);
    }
    throw std::invalid_argument("unknown metric");
}

const Score& MetricSet::get(Metric m) const {
    switch (m) {
        case Metric::Iou: return iou;
        case Metric::Dsc: return dsc;
        case Metric::Sensitivity: return sensitivity;
        case Metric::Specificity: return specificity;
        case Metric::Accuracy: return accuracy;
        case Metric::Auc: return auc;
        case Metric::Kappa: return kappa;
    }
    throw std::invalid_argument("unknown metric");
}

Score& MetricSet::get(Metric m) { return const_cast<Score&>(std::as_const(*this).get(m)); }

MetricSet metric_set(const ConfusionCounts& c, EmptyPolicy policy) {
    MetricSet s;
    for (const auto& [m, name] : kMetricNames) s.get(m) = compute(m, c, policy);
    return s;
}

}  // namespace segscore
