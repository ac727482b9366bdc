// Report fixtures shared by the lint, report and acceptance tests.
#pragma once

#include "oracles.hpp"

#include "segscore/lint.hpp"
#include "segscore/report.hpp"

#include <string>
#include <vector>

namespace fixtures {

using segscore::Json;

// Two samples, two foreground classes, with one overlay artifact: passes
// every lint rule.
inline segscore::DatasetReport compliant_report() {
    using namespace segscore;
    std::vector<LoadedPair> pairs;
    auto add = [&](const std::string& id, LabelMask gt, LabelMask pred) {
        LoadedPair p;
        p.sample_id = id;
        p.gt_path = "gt/" + id + ".png";
        p.pred_path = "pred/" + id + ".png";
        p.gt = std::move(gt);
        p.pred = Prediction(std::move(pred));
        pairs.push_back(std::move(p));
    };
    add("a", oracle::grid({{0, 1, 1, 2}, {0, 1, 2, 2}}), oracle::grid({{0, 1, 2, 2}, {0, 1, 2, 2}}));
    add("b", oracle::grid({{1, 1, 0, 2}, {0, 0, 2, 2}}), oracle::grid({{1, 0, 0, 2}, {0, 1, 2, 0}}));
    EvaluationOptions options;
    options.emit = {"csv", "json", "overlays", "plots"};
    DatasetReport r = evaluate_loaded(std::move(pairs), ClassCatalog::from_ids({0, 1, 2}), options);
    r.artifacts.push_back({"overlay", "overlays/a_all_gt-overlay.png"});
    r.lint = lint_report(r);
    return r;
}

inline Json compliant_json() { return segscore::report_to_json(compliant_report()); }

inline void remove_metric(Json& j, const std::string& name) {
    Json& metrics = j["config_echo"]["metrics"];
    Json kept = Json::array();
    for (const auto& m : metrics) {
        if (m != name) kept.push_back(m);
    }
    metrics = kept;
}

// One constructed report per guideline rule, each violating only that rule.
inline Json violating(const std::string& rule) {
    Json j = compliant_json();
    if (rule == "G1") {
        remove_metric(j, "dsc");
        remove_metric(j, "accuracy");
    } else if (rule == "G2") {
        j["config_echo"]["primary_metric"] = "accuracy";
    } else if (rule == "G3") {
        remove_metric(j, "iou");
    } else if (rule == "G4") {
        j["aggregates"]["per_class"] = Json::object();
    } else if (rule == "G5") {
        j["config_echo"]["averaging"]["include_background"] = true;
    } else if (rule == "G6") {
        auto strip = [](Json& block) {
            for (auto& entry : block) entry.erase("histogram");
        };
        strip(j["aggregates"]["macro"]);
        strip(j["aggregates"]["micro"]);
        for (auto& block : j["aggregates"]["per_class"]) strip(block);
    } else if (rule == "G7") {
        for (auto& list : j["aggregates"]["worst_k"]) list = Json::array();
    } else if (rule == "G8") {
        j["artifacts"] = Json::array();
    }
    return j;
}

inline Json accuracy_only_json() {
    Json j = compliant_json();
    j["config_echo"]["metrics"] = Json::array({"accuracy"});
    j["config_echo"]["primary_metric"] = "accuracy";
    return j;
}

inline std::vector<std::string> rules_of(const std::vector<segscore::LintFinding>& findings) {
    std::vector<std::string> out;
    for (const auto& f : findings) out.push_back(f.rule);
    return out;
}

}  // namespace fixtures
