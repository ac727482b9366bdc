#include "doctest.h"
#include "oracles.hpp"

#include "segscore/mask_io.hpp"

using namespace segscore;

TEST_CASE("mask construction validates shape, payload and spacing") {
    CHECK_THROWS_AS(LabelMask({4}, std::vector<ClassId>(4)), Error);
    CHECK_THROWS_AS(LabelMask({2, 0}, {}), Error);
    try {
        LabelMask({2, 2}, std::vector<ClassId>(3));
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == "PAYLOAD_LENGTH");
        CHECK(std::string(e.what()).find("payload length mismatch") != std::string::npos);
    }
    CHECK_THROWS_AS(LabelMask({2, 2}, std::vector<ClassId>(4), {1.0, 0.0}), Error);
    CHECK_THROWS_AS(LabelMask({2, 2}, std::vector<ClassId>(4), {1.0}), Error);
    const LabelMask m({2, 3}, std::vector<ClassId>(6));
    CHECK(m.spacing() == std::vector<double>{1.0, 1.0});
}

TEST_CASE("probability grid rejects values outside [0,1]") {
    CHECK_THROWS_AS(ProbabilityGrid({1, 2}, {0.5f, 1.5f}), Error);
    CHECK_NOTHROW(ProbabilityGrid({1, 2}, {0.0f, 1.0f}));
}

TEST_CASE("class catalog") {
    const auto cat = ClassCatalog::from_ids({0, 2, 1});
    CHECK(cat.ids() == std::vector<ClassId>{0, 1, 2});
    CHECK(cat.background() == ClassId{0});
    CHECK(cat.foreground_ids() == std::vector<ClassId>{1, 2});
    CHECK_THROWS_AS(ClassCatalog({{1, "a", false}, {1, "b", false}}), Error);
    CHECK_THROWS_AS(ClassCatalog({{0, "a", true}, {1, "b", true}}), Error);
}

TEST_CASE("png round trip keeps labels, shape and row-major order") {
    oracle::TempDir dir("maskio");
    // 2 rows x 3 cols: the pixel at (r, c) holds 10*r + c.
    const LabelMask m({2, 3}, {0, 1, 2, 10, 11, 12});
    save_mask(m, dir / "m.png", MaskFormat::Png8);
    const LabelMask back = load_mask(dir / "m.png");
    CHECK(back.shape() == Shape{2, 3});
    CHECK(back.labels() == m.labels());
    CHECK(back[1 * 3 + 2] == 12);
}

TEST_CASE("png 16-bit is selected automatically for large labels") {
    oracle::TempDir dir("maskio16");
    const LabelMask m({1, 3}, {0, 300, 65535});
    save_mask(m, dir / "m.png", MaskFormat::Png);
    CHECK(load_mask(dir / "m.png") == m);
    CHECK_THROWS_AS(save_mask(m, dir / "x.png", MaskFormat::Png8), Error);
}

TEST_CASE("png refuses 3D masks") {
    oracle::TempDir dir("maskio3d");
    try {
        save_mask(LabelMask::filled({2, 2, 2}, 1), dir / "v.png", MaskFormat::Png);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()) == "PNG supports 2D only");
    }
}

TEST_CASE("mgrid round trip for 2D and 3D with spacing") {
    oracle::TempDir dir("mgrid");
    const LabelMask m({2, 2, 3}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 65535}, {2.5, 0.5, 0.75});
    save_mask(m, dir / "v.mgrid", MaskFormat::Mgrid);
    CHECK(load_mask(dir / "v.mgrid") == m);
}

TEST_CASE("mgrid payload mismatch is reported") {
    auto bytes = encode_mgrid(LabelMask::filled({2, 2}, 1));
    bytes.pop_back();
    try {
        decode_mgrid(bytes);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("payload length mismatch") != std::string::npos);
    }
    auto bad = encode_mgrid(LabelMask::filled({2, 2}, 1));
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_mgrid(bad), Error);
}

TEST_CASE("probability grids round trip through mgrid") {
    oracle::TempDir dir("prob");
    const ProbabilityGrid g({2, 2}, {0.0f, 0.25f, 0.5f, 1.0f});
    save_probabilities(g, dir / "p.mgrid");
    CHECK(load_probabilities(dir / "p.mgrid") == g);
    CHECK(std::holds_alternative<ProbabilityGrid>(load_prediction(dir / "p.mgrid")));
    CHECK_THROWS_AS(load_mask(dir / "p.mgrid"), Error);
}

TEST_CASE("property: random masks round trip and load deterministically") {
    oracle::TempDir dir("maskprop");
    oracle::Gen g(2024);
    for (int i = 0; i < 30; ++i) {
        const LabelMask m2 = oracle::random_mask(g, oracle::random_shape_2d(g, 20), i % 2 ? 255 : 2000);
        save_mask(m2, dir / "a.png", MaskFormat::Png);
        CHECK(load_mask(dir / "a.png") == m2);
        CHECK(load_mask(dir / "a.png") == load_mask(dir / "a.png"));
        const Shape s3{g.between(1, 5), g.between(1, 8), g.between(1, 8)};
        const LabelMask m3 = oracle::random_mask(g, s3, 40, {0.5, 1.0, 2.0});
        save_mask(m3, dir / "b.mgrid", MaskFormat::Mgrid);
        CHECK(load_mask(dir / "b.mgrid") == m3);
    }
}

TEST_CASE("unreadable and unsupported files") {
    oracle::TempDir dir("bad");
    CHECK_THROWS_AS(load_mask(dir / "missing.png"), Error);
    CHECK_THROWS_AS(load_mask(dir / "x.tiff"), Error);
    {
        std::ofstream(dir / "junk.png") << "not a png";
    }
    CHECK_THROWS_AS(load_mask(dir / "junk.png"), Error);
}
