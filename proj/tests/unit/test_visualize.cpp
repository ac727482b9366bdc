#include "doctest.h"
#include "oracles.hpp"

#include "segscore/plots.hpp"
#include "segscore/visualize.hpp"

#include <cstdlib>

using namespace segscore;

namespace {

GrayImage ramp(std::size_t w, std::size_t h) {
    GrayImage img{w, h, std::vector<std::uint8_t>(w * h)};
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(10 + 7 * i);
    return img;
}

Rgb pixel(const RgbImage& img, std::size_t i) { return {img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]}; }

std::size_t occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("blend rounding") {
    CHECK(blend_channel(255, 0, 0.5) == 128);
    CHECK(blend_channel(0, 255, 0.5) == 128);
    CHECK(blend_channel(200, 100, 1.0) == 200);
    CHECK(blend_channel(10, 20, 0.25) == 18);  // 2.5 + 15 = 17.5 rounds up
}

TEST_CASE("identical masks give an untouched disagreement map") {
    const auto base = ramp(4, 4);
    const auto m = oracle::fixture_gt();
    const auto img = render_disagreement(base, m, m, 1);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(pixel(img, i) == Rgb{base.pixels[i], base.pixels[i], base.pixels[i]});
    }
}

TEST_CASE("fixture disagreement marks two FP and two FN pixels") {
    const DisagreementStyle style;
    const auto img = render_disagreement(std::nullopt, oracle::fixture_gt(), oracle::fixture_pred(), 1, style);
    std::size_t fp = 0, fn = 0, other = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        const Rgb p = pixel(img, i);
        if (p == style.false_positive) ++fp;
        else if (p == style.false_negative) ++fn;
        else if (p != Rgb{0, 0, 0}) ++other;
    }
    CHECK(fp == 2);
    CHECK(fn == 2);
    CHECK(other == 0);
    // FP at (1,3) and (2,3); FN at (1,1) and (2,1).
    CHECK(pixel(img, 1 * 4 + 3) == style.false_positive);
    CHECK(pixel(img, 2 * 4 + 1) == style.false_negative);
}

TEST_CASE("overlay blend limits") {
    const auto base = ramp(4, 4);
    const auto m = oracle::fixture_gt();
    OverlaySpec spec;
    spec.palette = palette_for(ClassCatalog::from_ids({0, 1}));
    spec.alpha = 1.0;
    const auto full = render_overlay(base, m, spec);
    spec.alpha = 0.001;
    const auto faint = render_overlay(base, m, spec);
    for (std::size_t i = 0; i < 16; ++i) {
        const Rgb b{base.pixels[i], base.pixels[i], base.pixels[i]};
        if (m[i] == 1) {
            CHECK(pixel(full, i) == default_palette()[0]);
            for (std::size_t ch = 0; ch < 3; ++ch) CHECK(std::abs(int(pixel(faint, i)[ch]) - int(b[ch])) <= 1);
        } else {
            CHECK(pixel(full, i) == b);
        }
    }
    spec.alpha = 0.0;
    CHECK_THROWS_AS(render_overlay(base, m, spec), Error);
    spec.alpha = 0.5;
    spec.palette.clear();
    CHECK_THROWS_AS(render_overlay(base, m, spec), Error);
    CHECK_THROWS_AS(render_overlay(ramp(3, 3), m, OverlaySpec{palette_for(ClassCatalog::from_ids({0, 1}))}), Error);
}

TEST_CASE("binary panels partition the foreground") {
    oracle::Gen g(8);
    const auto m = oracle::random_mask(g, {9, 7}, 4);
    const auto panels = render_binary_panels(m, ClassCatalog::from_ids({0, 1, 2, 3, 4}));
    REQUIRE(panels.size() == 4);
    for (std::size_t i = 0; i < m.size(); ++i) {
        int white = 0;
        for (const auto& [id, img] : panels) {
            white += img.pixels[i] == 255;
            CHECK((img.pixels[i] == 255) == (m[i] == id));
        }
        CHECK(white == (m[i] != 0 ? 1 : 0));
    }
}

TEST_CASE("3D masks render one slice") {
    const LabelMask vol({2, 2, 2}, {0, 0, 0, 0, 1, 0, 0, 1});
    const auto panels = render_binary_panels(vol, ClassCatalog::from_ids({0, 1}), 1);
    CHECK(panels[0].second.pixels == std::vector<std::uint8_t>{255, 0, 0, 255});
    CHECK_THROWS_AS(render_binary_panels(vol, ClassCatalog::from_ids({0, 1}), 2), Error);
}

TEST_CASE("rendered files are byte-identical across runs") {
    oracle::TempDir dir("vis");
    OverlaySpec spec;
    spec.palette = palette_for(ClassCatalog::from_ids({0, 1}));
    for (const char* name : {"a.png", "b.png"}) save_rgb_png(render_overlay(ramp(4, 4), oracle::fixture_gt(), spec), dir / name);
    CHECK(oracle::read_bytes(dir / "a.png") == oracle::read_bytes(dir / "b.png"));
}

TEST_CASE("histogram svg") {
    const auto h = histogram({0.1, 0.15, 0.9}, 4, 0.0, 1.0);
    const auto svg = render_histogram_svg(h, {"t", "x", "y"});
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(occurrences(svg, "class=\"bar\"") == 4);
    CHECK(svg.find("data-count=\"2\"") != std::string::npos);
    // The tallest bar spans the whole plot height.
    CHECK(svg.find("height=\"240\" fill=\"#4682b4\" stroke=\"white\" data-count=\"2\"") != std::string::npos);
    CHECK(svg == render_histogram_svg(h, {"t", "x", "y"}));
    CHECK_THROWS_AS(render_histogram_svg({}, {}), Error);
}

TEST_CASE("box plot svg") {
    const auto svg = render_boxplot_svg({{"a", describe({0.2, 0.4, 0.9})}, {"b<c", describe({0.5})}}, {"t", "x", "y"});
    CHECK(occurrences(svg, "class=\"box\"") == 2);
    CHECK(occurrences(svg, "class=\"median\"") == 2);
    CHECK(svg.find("b&lt;c") != std::string::npos);
    CHECK_THROWS_AS(render_boxplot_svg({}, {}), Error);
}
