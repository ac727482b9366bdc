#include "doctest.h"
#include "oracles.hpp"
#include "reports.hpp"

#include "segscore/lint.hpp"
#include "segscore/report.hpp"

using namespace segscore;

namespace {

LoadedPair pair(const std::string& id, LabelMask gt, Prediction pred) {
    LoadedPair p;
    p.sample_id = id;
    p.gt = std::move(gt);
    p.pred = std::move(pred);
    return p;
}

const ClassCatalog kBinary = ClassCatalog::from_ids({0, 1});

}  // namespace

TEST_CASE("identical pair gives mean DSC 1 and zero spread") {
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("x", oracle::fixture_gt(), oracle::fixture_gt()));
    const auto r = evaluate_loaded(std::move(pairs), kBinary, {});
    const auto& d = *r.aggregates.macro.at("dsc").distribution;
    CHECK(d.mean == 1.0);
    CHECK(d.std == 0.0);
}

TEST_CASE("two pairs: statistics by hand") {
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("half", oracle::fixture_gt(), oracle::fixture_pred()));  // DSC 0.5
    pairs.push_back(pair("same", oracle::fixture_gt(), oracle::fixture_gt()));    // DSC 1.0
    const auto r = evaluate_loaded(std::move(pairs), kBinary, {});
    const auto& d = *r.aggregates.macro.at("dsc").distribution;
    CHECK(d.mean == 0.75);
    CHECK(d.median == 0.75);
    CHECK(d.min == 0.5);
    CHECK(d.max == 1.0);
    const auto& worst = r.aggregates.worst_k.at("dsc");
    REQUIRE(worst.size() == 2);
    CHECK(worst[0].sample_id == "half");
    // Distances rank the other way round: the largest AHD is worst.
    CHECK(r.aggregates.worst_k.at("ahd")[0].sample_id == "half");
}

TEST_CASE("shape mismatch is flagged and excluded from aggregates") {
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("ok", oracle::fixture_gt(), oracle::fixture_gt()));
    pairs.push_back(pair("bad", oracle::fixture_gt(), LabelMask::filled({2, 2}, 0)));
    const auto r = evaluate_loaded(std::move(pairs), kBinary, {});
    CHECK(r.any_failed());
    const auto& bad = r.samples[0];
    CHECK(bad.sample_id == "bad");
    CHECK(bad.failed());
    CHECK(bad.flags == std::vector<std::string>{"SHAPE_MISMATCH"});
    CHECK(r.aggregates.macro.at("dsc").distribution->n == 1);
}

TEST_CASE("input errors") {
    CHECK_THROWS_AS(evaluate_loaded({}, kBinary, {}), Error);
    std::vector<LoadedPair> dup;
    dup.push_back(pair("a", oracle::fixture_gt(), oracle::fixture_gt()));
    dup.push_back(pair("a", oracle::fixture_gt(), oracle::fixture_gt()));
    CHECK_THROWS_AS(evaluate_loaded(std::move(dup), kBinary, {}), Error);
    std::vector<LoadedPair> all_bad;
    all_bad.push_back(pair("a", oracle::fixture_gt(), LabelMask::filled({1, 1}, 0)));
    CHECK_THROWS_AS(evaluate_loaded(std::move(all_bad), kBinary, {}), Error);
}

TEST_CASE("informational flags") {
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("e", oracle::fixture_gt(), LabelMask::filled({4, 4}, 0)));
    pairs.push_back(pair("s", oracle::fixture_gt(), oracle::fixture_gt().with_spacing({1.0, 2.0})));
    const auto r = evaluate_loaded(std::move(pairs), kBinary, {});
    CHECK_FALSE(r.any_failed());
    CHECK(r.samples[0].flags == std::vector<std::string>{"EMPTY_PRED"});
    CHECK(r.samples[1].flags == std::vector<std::string>{"SPACING_MISMATCH"});
}

TEST_CASE("probability predictions are binarized and get a curve") {
    const auto gt = oracle::fixture_gt();
    std::vector<float> probs(16, 0.1f);
    for (std::size_t i = 0; i < 16; ++i) {
        if (gt[i] == 1) probs[i] = 0.8f;
    }
    probs[0] = 0.6f;  // one false positive at the 0.5 cut-off
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("p", gt, ProbabilityGrid({4, 4}, probs)));
    const auto r = evaluate_loaded(std::move(pairs), kBinary, {});
    const auto& s = r.samples[0];
    CHECK(s.flags == std::vector<std::string>{"PROBABILISTIC_PRED"});
    CHECK(s.per_class.at(1).counts == ConfusionCounts{4, 1, 11, 0});
    REQUIRE(s.roc);
    CHECK(s.roc->points.size() == 101);
    CHECK(s.roc->auc == 1.0);

    std::vector<LoadedPair> multi;
    multi.push_back(pair("m", gt, ProbabilityGrid({4, 4}, probs)));
    multi.push_back(pair("n", gt, gt));
    const auto r2 = evaluate_loaded(std::move(multi), ClassCatalog::from_ids({0, 1, 2}), {});
    CHECK(r2.samples[0].flags == std::vector<std::string>{"UNSUPPORTED_PREDICTION"});
    CHECK(r2.samples[0].failed());
}

TEST_CASE("class discovery without a catalog") {
    std::vector<LoadedPair> pairs;
    pairs.push_back(pair("a", oracle::grid({{0, 3}}), oracle::grid({{5, 3}})));
    const auto r = evaluate_loaded(std::move(pairs), {}, {});
    CHECK(r.catalog.ids() == std::vector<ClassId>{0, 3, 5});
    std::vector<LoadedPair> empty;
    empty.push_back(pair("z", LabelMask::filled({2, 2}, 0), LabelMask::filled({2, 2}, 0)));
    CHECK(evaluate_loaded(std::move(empty), {}, {}).catalog.ids() == std::vector<ClassId>{0, 1});
}

TEST_CASE("score serialization") {
    CHECK(score_to_json(Score::of(0.25)) == Json(0.25));
    CHECK(score_to_json(Score::undefined(Reason::EmptyGt)) == Json{{"undefined", "EMPTY_GT"}});
    CHECK(score_from_json(score_to_json(Score::undefined(Reason::EmptyGt))) == Score::undefined(Reason::EmptyGt));
    CHECK(score_from_json(Json(0.5)).value() == 0.5);
    CHECK_THROWS_AS(score_from_json(Json("x")), Error);
}

TEST_CASE("json text is deterministic with round-trippable numbers") {
    CHECK(dump_json(Json{{"a", 0.1}, {"b", 1.0}, {"c", 3}}) == "{\n  \"a\": 0.10000000000000001,\n  \"b\": 1.0,\n  \"c\": 3\n}\n");
    const auto text = dump_json(fixtures::compliant_json());
    CHECK(text == dump_json(fixtures::compliant_json()));
    CHECK(Json::parse(text) == fixtures::compliant_json());
}

TEST_CASE("aggregates recompute from serialized per-sample values") {
    const Json j = fixtures::compliant_json();
    for (const auto& key : report_metric_keys()) {
        std::vector<Score> scores;
        for (const auto& s : j["samples"]) scores.push_back(score_from_json(s["macro"][key]));
        const auto again = aggregate_to_json(aggregate_scores(key, scores, 10));
        CHECK(dump_json(again) == dump_json(j["aggregates"]["macro"][key]));
    }
    for (const auto& [cls, block] : j["aggregates"]["per_class"].items()) {
        for (const auto& key : report_metric_keys()) {
            std::vector<Score> scores;
            for (const auto& s : j["samples"]) {
                for (const auto& c : s["classes"]) {
                    if (std::to_string(c["class_id"].get<int>()) == cls) scores.push_back(score_from_json(c["metrics"][key]));
                }
            }
            CHECK(dump_json(aggregate_to_json(aggregate_scores(key, scores, 10))) == dump_json(block[key]));
        }
    }
}

TEST_CASE("report layout") {
    const Json j = fixtures::compliant_json();
    for (const char* key : {"version", "config_echo", "samples", "aggregates", "artifacts", "lint"}) CHECK(j.contains(key));
    CHECK(j["config_echo"]["metrics"][0] == "dsc");
    CHECK(j["config_echo"]["primary_metric"] == "dsc");
    const auto csv = report_to_csv(fixtures::compliant_report());
    CHECK(csv.rfind("sample_id,class_id,class_name,iou,dsc,sensitivity,specificity,accuracy,auc,kappa,ahd,flags\n", 0) == 0);
}

TEST_CASE("histogram ranges") {
    CHECK(histogram_range("kappa", {}) == std::pair{-1.0, 1.0});
    CHECK(histogram_range("dsc", {0.3}) == std::pair{0.0, 1.0});
    CHECK(histogram_range("ahd", {0.5, 4.0}) == std::pair{0.0, 4.0});
    CHECK(histogram_range("ahd", {0.0}) == std::pair{0.0, 1.0});
}
