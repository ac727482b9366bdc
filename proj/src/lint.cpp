#include "segscore/lint.hpp"

#include <algorithm>

namespace segscore {

namespace {

const Json* child(const Json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::vector<std::string> reported_metrics(const Json& report) {
    std::vector<std::string> out;
    const Json* echo = child(report, "config_echo");
    const Json* metrics = echo ? child(*echo, "metrics") : nullptr;
    if (metrics && metrics->is_array()) {
        for (const auto& m : *metrics) {
            if (m.is_string()) out.push_back(m.get<std::string>());
        }
    }
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::size_t foreground_class_count(const Json& report) {
    const Json* echo = child(report, "config_echo");
    const Json* classes = echo ? child(*echo, "classes") : nullptr;
    if (!classes || !classes->is_array()) return 0;
    std::size_t n = 0;
    for (const auto& c : *classes) {
        const Json* bg = child(c, "background");
        if (!(bg && bg->is_boolean() && bg->get<bool>())) ++n;
    }
    return n;
}

bool has_per_class_results(const Json& report) {
    const Json* agg = child(report, "aggregates");
    const Json* per_class = agg ? child(*agg, "per_class") : nullptr;
    if (!per_class || !per_class->is_object() || per_class->empty()) return false;
    const Json* samples = child(report, "samples");
    if (!samples || !samples->is_array()) return false;
    for (const auto& s : *samples) {
        if (child(s, "error")) continue;
        const Json* classes = child(s, "classes");
        if (!classes || !classes->is_array() || classes->empty()) return false;
    }
    return true;
}

bool is_distribution(const Json& entry) {
    return child(entry, "histogram") && child(entry, "q1") && child(entry, "median") && child(entry, "q3");
}

bool has_distribution_data(const Json& report) {
    const Json* agg = child(report, "aggregates");
    if (!agg) return false;
    auto scan_block = [](const Json* block) {
        if (!block || !block->is_object()) return false;
        for (const auto& entry : *block) {
            if (is_distribution(entry)) return true;
        }
        return false;
    };
    if (scan_block(child(*agg, "macro")) || scan_block(child(*agg, "micro"))) return true;
    if (const Json* per_class = child(*agg, "per_class"); per_class && per_class->is_object()) {
        for (const auto& block : *per_class) {
            if (scan_block(&block)) return true;
        }
    }
    return false;
}

bool has_worst_k(const Json& report) {
    const Json* agg = child(report, "aggregates");
    const Json* worst = agg ? child(*agg, "worst_k") : nullptr;
    if (!worst || !worst->is_object()) return false;
    for (const auto& list : *worst) {
        if (list.is_array() && !list.empty()) return true;
    }
    return false;
}

bool has_visualizations(const Json& report) {
    const Json* artifacts = child(report, "artifacts");
    if (!artifacts || !artifacts->is_array()) return false;
    for (const auto& a : *artifacts) {
        const Json* kind = child(a, "kind");
        if (kind && kind->is_string() && kind->get<std::string>() == "overlay") return true;
    }
    return false;
}

}  // namespace

std::vector<LintFinding> lint_report(const Json& report) {
    std::vector<LintFinding> findings;
    const auto metrics = reported_metrics(report);
    const bool dsc = contains(metrics, "dsc");
    const bool accuracy = contains(metrics, "accuracy");

    std::string primary;
    if (const Json* echo = child(report, "config_echo")) {
        if (const Json* p = child(*echo, "primary_metric"); p && p->is_string()) primary = p->get<std::string>();
    }

    if (!dsc) {
        findings.push_back({"G1", "error", "DSC is missing; use DSC as the main validation metric"});
    }
    if (accuracy && (!dsc || primary == "accuracy")) {
        findings.push_back(
            {"G2", "error", "accuracy is reported without DSC as main metric; avoid interpreting high pixel accuracy"});
    }
    if (dsc) {
        std::vector<std::string> missing;
        for (const char* m : {"iou", "sensitivity", "specificity"}) {
            if (!contains(metrics, m)) missing.emplace_back(m);
        }
        if (!missing.empty()) {
            std::string list;
            for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
            findings.push_back({"G3", "warning", "report IoU, sensitivity and specificity next to DSC (missing: " + list + ")"});
        }
    }
    if (foreground_class_count(report) >= 2 && !has_per_class_results(report)) {
        findings.push_back({"G4", "error", "multi-class evaluation without per-class results"});
    }
    if (const Json* echo = child(report, "config_echo")) {
        const Json* avg = child(*echo, "averaging");
        const Json* bg = avg ? child(*avg, "include_background") : nullptr;
        if (bg && bg->is_boolean() && bg->get<bool>()) {
            findings.push_back({"G5", "warning", "background class is included in the averages, which inflates scores"});
        }
    }
    if (!has_distribution_data(report)) {
        findings.push_back({"G6", "warning", "no histogram or box-plot statistics of the score distribution"});
    }
    if (!has_worst_k(report)) {
        findings.push_back({"G7", "warning", "no worst-scoring samples listed; avoid cherry-picking"});
    }
    if (!has_visualizations(report)) {
        findings.push_back({"G8", "info", "no sample visualizations referenced"});
    }
    return findings;
}

std::vector<LintFinding> lint_report(const DatasetReport& report) {
    return lint_report(report_to_json(report));
}

bool has_errors(const std::vector<LintFinding>& findings) {
    return std::any_of(findings.begin(), findings.end(), [](const LintFinding& f) { return f.severity == "error"; });
}

}  // namespace segscore
