#include "doctest.h"
#include "oracles.hpp"

#include "segscore/aggregate.hpp"
#include "segscore/distance.hpp"

#include <cmath>

using namespace segscore;

namespace {

AveragingPolicy macro(bool bg = false, UndefinedHandling h = UndefinedHandling::Skip) {
    return {AveragingMode::Macro, bg, h};
}
AveragingPolicy micro() { return {AveragingMode::Micro, false, UndefinedHandling::Skip}; }

}  // namespace

TEST_CASE("macro means") {
    CHECK(macro_average({{1, Score::of(0.5)}, {2, Score::of(1.0)}}, macro()).value.value() == 0.75);
    const std::map<ClassId, Score> with_bg{{0, Score::of(0.99)}, {1, Score::of(0.5)}};
    CHECK(macro_average(with_bg, macro(false)).value.value() == 0.5);
    CHECK(std::abs(macro_average(with_bg, macro(true)).value.value() - 0.745) < 1e-15);
    const auto none = macro_average({{1, Score::undefined(Reason::NoPositivesInGt)}}, macro());
    CHECK(none.value.reason() == Reason::NoEligibleClasses);
    CHECK(none.skipped.at(1) == Reason::NoPositivesInGt);
    const auto prop = macro_average({{1, Score::of(1.0)}, {2, Score::undefined(Reason::EmptyBoth)}},
                                    macro(false, UndefinedHandling::Propagate));
    CHECK(prop.value.reason() == Reason::PropagatedUndefined);
    const auto skip = macro_average({{1, Score::of(1.0)}, {2, Score::undefined(Reason::EmptyBoth)}}, macro());
    CHECK(skip.value.value() == 1.0);
    CHECK(skip.used == 1);
}

TEST_CASE("micro pools counts and diverges from macro under imbalance") {
    const std::map<ClassId, ConfusionCounts> counts{{1, {2, 2, 10, 2}}, {2, {8, 0, 8, 0}}};
    // pooled tp=10, fp=2, fn=2 -> 20/24
    CHECK(std::abs(micro_average(counts, Metric::Dsc, micro()).value.value() - 5.0 / 6.0) < 1e-12);
    std::map<ClassId, Score> per_class;
    for (const auto& [id, c] : counts) per_class.emplace(id, dsc(c));
    CHECK(std::abs(macro_average(per_class, macro()).value.value() - 0.75) < 1e-12);
    CHECK(micro_average(counts, Metric::Specificity, micro()).note == "pooled one-vs-rest");
}

TEST_CASE("single class micro equals the class value") {
    const std::map<ClassId, ConfusionCounts> one{{3, {4, 1, 7, 2}}};
    for (Metric m : kMetricOrder) {
        CHECK(micro_average(one, m, micro()).value == compute(m, one.at(3), EmptyPolicy::ScoreOne));
    }
}

TEST_CASE("per-class report composition") {
    const auto gt = oracle::fixture_gt();
    const auto pred = oracle::fixture_pred();
    const auto r = per_class_report(gt, pred, ClassCatalog::from_ids({0, 1}), {});
    REQUIRE(r.size() == 1);
    const auto& c = r.at(1);
    CHECK(c.counts == ConfusionCounts{2, 2, 10, 2});
    CHECK(c.metrics == metric_set(c.counts));
    CHECK(c.ahd == ahd(gt, pred, 1));
}

TEST_CASE("class absent from the ground truth") {
    const LabelMask gt({1, 4}, {0, 1, 2, 2});
    const LabelMask pred({1, 4}, {0, 2, 2, 3});
    const auto r = per_class_report(gt, pred, ClassCatalog::from_ids({0, 1, 2, 3}), {});
    CHECK(r.at(3).metrics.sensitivity.reason() == Reason::NoPositivesInGt);
    CHECK(r.at(3).absent_in_gt);
    // Chained from the hand counts of the multi-class confusion example.
    const LabelMask pred2({1, 4}, {0, 2, 2, 1});
    const auto r2 = per_class_report(gt, pred2, ClassCatalog::from_ids({0, 1, 2}), {});
    CHECK(r2.at(1).metrics.dsc.value() == 0.0);
    CHECK(r2.at(2).metrics.dsc.value() == 0.5);
    CHECK(r2.at(2).metrics.iou.value() == doctest::Approx(1.0 / 3.0));
    CHECK(r2.at(1).metrics.specificity.value() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("property: balance, background and permutation") {
    oracle::Gen g(11);
    for (int trial = 0; trial < 500; ++trial) {
        const ConfusionCounts c{g.between(1, 50), g.between(0, 50), g.between(0, 50), g.between(0, 50)};
        std::map<ClassId, ConfusionCounts> same;
        const auto k = g.between(1, 6);
        for (ClassId id = 1; id <= k; ++id) same.emplace(id, c);
        std::map<ClassId, Score> per_class;
        for (const auto& [id, cc] : same) per_class.emplace(id, dsc(cc));
        CHECK(micro_average(same, Metric::Dsc, micro()).value == macro_average(per_class, macro()).value);

        std::map<ClassId, Score> scores;
        double top = 0.0;
        for (ClassId id = 1; id <= k; ++id) {
            const double x = g.uniform();
            top = std::max(top, x);
            scores.emplace(id, Score::of(x));
        }
        scores.emplace(0, Score::of(top + 0.01));
        CHECK(macro_average(scores, macro(true)).value.value() >= macro_average(scores, macro(false)).value.value());

        // Relabel classes by reversing ids; averages are unchanged.
        std::map<ClassId, Score> relabeled;
        std::map<ClassId, ConfusionCounts> counts, recounts;
        for (ClassId id = 1; id <= k; ++id) {
            const ConfusionCounts cc{g.between(0, 30), g.between(0, 30), g.between(0, 30), g.between(0, 30)};
            counts.emplace(id, cc);
            recounts.emplace(static_cast<ClassId>(100 - id), cc);
        }
        std::map<ClassId, Score> a, b;
        for (const auto& [id, cc] : counts) a.emplace(id, dsc(cc));
        for (const auto& [id, cc] : recounts) b.emplace(id, dsc(cc));
        const auto ma = macro_average(a, macro()).value;
        const auto mb = macro_average(b, macro()).value;
        REQUIRE(ma.defined() == mb.defined());
        if (ma.defined()) CHECK(std::abs(ma.value() - mb.value()) < 1e-12);
        CHECK(micro_average(counts, Metric::Dsc, micro()).value == micro_average(recounts, Metric::Dsc, micro()).value);
    }
}
