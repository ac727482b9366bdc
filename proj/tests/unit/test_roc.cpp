#include "doctest.h"

#include "segscore/roc.hpp"

#include <cmath>

using namespace segscore;

TEST_CASE("perfect scorer") {
    const LabelMask gt({1, 4}, {0, 1, 1, 0});
    const ProbabilityGrid p({1, 4}, {0.0f, 1.0f, 1.0f, 0.0f});
    const auto pts = roc_curve(gt, p, 1, {0.5});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].tpr == 1.0);
    CHECK(pts[0].fpr == 0.0);
    CHECK(auc_trapezoid(pts) == 1.0);
}

TEST_CASE("constant scorer") {
    const LabelMask gt({1, 4}, {0, 1, 1, 0});
    const ProbabilityGrid p({1, 4}, {0.5f, 0.5f, 0.5f, 0.5f});
    const auto pts = roc_curve(gt, p, 1, {0.4, 0.6});
    REQUIRE(pts.size() == 2);
    // Descending threshold order: 0.6 first.
    CHECK(pts[0].threshold == 0.6);
    CHECK(pts[0].tpr == 0.0);
    CHECK(pts[0].fpr == 0.0);
    CHECK(pts[1].tpr == 1.0);
    CHECK(pts[1].fpr == 1.0);
}

TEST_CASE("hand binarization") {
    const LabelMask gt({1, 4}, {0, 0, 1, 1});
    const ProbabilityGrid p({1, 4}, {0.1f, 0.6f, 0.4f, 0.9f});
    const auto pts = roc_curve(gt, p, 1, {0.5});
    CHECK(pts[0].tpr == 0.5);
    CHECK(pts[0].fpr == 0.5);
}

TEST_CASE("trapezoid areas") {
    CHECK(auc_trapezoid({{0.5, 1.0, 0.0}}) == 1.0);
    // 0.5*0.5*0.5 + 0.5*(0.5+1)*0.5 = 0.5
    CHECK(std::abs(auc_trapezoid({{0.5, 0.5, 0.5}}) - 0.5) < 1e-15);
    CHECK(std::abs(auc_trapezoid({{0.9, 0.2, 0.2}, {0.5, 0.6, 0.6}, {0.1, 0.9, 0.9}}) - 0.5) < 1e-15);
    CHECK(auc_trapezoid({}) == 0.5);
}

TEST_CASE("threshold validation and undefined curves") {
    CHECK(uniform_thresholds(3) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(uniform_thresholds().size() == 101);
    CHECK_THROWS_AS(uniform_thresholds(1), Error);
    const LabelMask gt({1, 2}, {0, 1});
    const ProbabilityGrid p({1, 2}, {0.2f, 0.8f});
    CHECK_THROWS_AS(roc_curve(gt, p, 1, {1.5}), Error);
    const LabelMask all_bg({1, 2}, {0, 0});
    try {
        roc_curve(all_bg, p, 1, {0.5});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == "ROC_UNDEFINED");
    }
}
