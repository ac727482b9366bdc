#include "doctest.h"
#include "oracles.hpp"

#include "segscore/distance.hpp"

#include <cmath>

using namespace segscore;

namespace {

PointSet points_of(std::vector<std::vector<ClassId>> rows) {
    return extract_points(oracle::grid(rows), 1);
}

}  // namespace

TEST_CASE("point extraction") {
    const auto full = LabelMask::filled({3, 3}, 1);
    CHECK(extract_points(full, 1).size() == 9);
    const auto surface = extract_points(full, 1, true);
    CHECK(surface.size() == 8);
    for (const auto& p : surface.points) CHECK_FALSE((p[0] == 1 && p[1] == 1));
    CHECK(extract_points(full, 2).empty());
    // 3D: only the centre of a 3x3x3 block is interior.
    CHECK(extract_points(LabelMask::filled({3, 3, 3}, 1), 1, true).size() == 26);
}

TEST_CASE("distance field on a line") {
    const LabelMask m({1, 5}, {1, 0, 0, 0, 0});
    CHECK(edt(m, 1).values == std::vector<double>{0, 1, 2, 3, 4});
    CHECK(edt(m.with_spacing({1.0, 2.0}), 1).values == std::vector<double>{0, 2, 4, 6, 8});
}

TEST_CASE("distance field around a centre point") {
    const auto m = oracle::grid({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}});
    const auto f = edt(m, 1);
    const double r2 = std::sqrt(2.0);
    const std::vector<double> expected{r2, 1, r2, 1, 0, 1, r2, 1, r2};
    for (std::size_t i = 0; i < 9; ++i) CHECK(f.values[i] == doctest::Approx(expected[i]).epsilon(1e-15));
    const auto brute = oracle::edt(m, 1);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::abs(f.values[i] - brute[i]) < 1e-12);
    CHECK_THROWS_AS(edt(LabelMask::filled({2, 2}, 0), 1), Error);
}

TEST_CASE("directed distances") {
    const auto a = points_of({{1, 0, 0, 0}});
    const auto b = points_of({{0, 0, 0, 1}});
    CHECK(directed_ahd(a, distance_field(b)) == 3.0);
    CHECK(directed_ahd(a, distance_field(a)) == 0.0);
    const auto two = points_of({{1, 1}});
    const auto one = points_of({{1, 0}});
    CHECK(directed_ahd(two, distance_field(one)) == 0.5);
    CHECK(directed_ahd(one, distance_field(two)) == 0.0);
    CHECK(directed_max(two, distance_field(one)) == 1.0);
    CHECK_THROWS_AS(directed_ahd(extract_points(oracle::grid({{0, 0}}), 1), distance_field(one)), Error);
}

TEST_CASE("symmetric distances") {
    const auto two = oracle::grid({{1, 1}});
    const auto one = oracle::grid({{1, 0}});
    CHECK(ahd(two, one, 1).value() == 0.5);
    CHECK(hausdorff_max(two, one, 1).value() == 1.0);
    CHECK(ahd(two, two, 1).value() == 0.0);
    CHECK(hausdorff_max(two, two, 1).value() == 0.0);
}

TEST_CASE("4x4 fixture distance") {
    const auto gt = oracle::fixture_gt();
    const auto pred = oracle::fixture_pred();
    const auto a = extract_points(gt, 1);
    const auto b = extract_points(pred, 1);
    CHECK(directed_ahd(a, distance_field(b)) == 0.5);
    CHECK(directed_ahd(b, distance_field(a)) == 0.5);
    CHECK(ahd(gt, pred, 1).value() == 0.5);
    CHECK(oracle::ahd(gt, pred, 1, false) == 0.5);
}

TEST_CASE("empty sides are undefined") {
    const auto empty = LabelMask::filled({3, 3}, 0);
    const auto some = oracle::grid({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    CHECK(ahd(empty, some, 1).reason() == Reason::EmptyGt);
    CHECK(ahd(some, empty, 1).reason() == Reason::EmptyPred);
    CHECK(ahd(empty, empty, 1).reason() == Reason::EmptyGt);
}

TEST_CASE("property: transform matches brute force, including anisotropic 3D") {
    oracle::Gen g(31);
    for (int trial = 0; trial < 60; ++trial) {
        const bool three_d = trial % 3 == 0;
        const Shape s = three_d ? Shape{g.between(1, 5), g.between(1, 7), g.between(1, 7)}
                                : oracle::random_shape_2d(g, 12);
        std::vector<double> spacing;
        for (std::size_t k = 0; k < s.size(); ++k) spacing.push_back(0.25 + 3.0 * g.uniform());
        auto m = oracle::random_binary(g, s, 0.15, 1, spacing);
        if (extract_points(m, 1).empty()) continue;
        const auto fast = edt(m, 1).values;
        const auto brute = oracle::edt(m, 1);
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(std::abs(fast[i] - brute[i]) <= 1e-9 * std::max(1.0, brute[i]));
        }
    }
}

TEST_CASE("property: symmetry, identity, bound and oracle agreement") {
    oracle::Gen g(47);
    for (int trial = 0; trial < 100; ++trial) {
        const bool surface = trial % 2 == 1;
        const Shape s{16, 16};
        const auto gt = oracle::random_binary(g, s, 0.1 + 0.3 * g.uniform());
        const auto pred = trial % 10 == 0 ? gt : oracle::random_binary(g, s, 0.1 + 0.3 * g.uniform());
        const Score d = ahd(gt, pred, 1, surface);
        if (!d.defined()) continue;
        CHECK(std::abs(d.value() - oracle::ahd(gt, pred, 1, surface)) < 1e-9);
        CHECK(d.value() == ahd(pred, gt, 1, surface).value());
        CHECK(d.value() <= hausdorff_max(gt, pred, 1, surface).value());
        CHECK(std::abs(hausdorff_max(gt, pred, 1, surface).value() - oracle::hausdorff(gt, pred, 1, surface)) < 1e-9);
        const bool same = extract_points(gt, 1, surface).points == extract_points(pred, 1, surface).points;
        CHECK((d.value() == 0.0) == same);
    }
}
