#include "segscore/visualize.hpp"

#include <algorithm>
#include <cmath>

namespace segscore {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("INVALID_ALPHA", "alpha must lie in (0, 1]");
}

RgbImage base_image(const std::optional<GrayImage>& base, const LabelMask& mask2d) {
    const std::size_t h = mask2d.shape()[0];
    const std::size_t w = mask2d.shape()[1];
    RgbImage img{w, h, std::vector<std::uint8_t>(w * h * 3, 0)};
    if (!base) return img;
    if (base->width != w || base->height != h) {
        throw Error("SHAPE_MISMATCH", "base image " + std::to_string(base->height) + "x" + std::to_string(base->width) +
                                          " does not match mask " + shape_string(mask2d.shape()));
    }
    for (std::size_t i = 0; i < w * h; ++i) {
        img.pixels[3 * i] = img.pixels[3 * i + 1] = img.pixels[3 * i + 2] = base->pixels[i];
    }
    return img;
}

void paint(RgbImage& img, std::size_t i, const Rgb& color, double alpha) {
    for (std::size_t ch = 0; ch < 3; ++ch) {
        img.pixels[3 * i + ch] = blend_channel(color[ch], img.pixels[3 * i + ch], alpha);
    }
}

}  // namespace

const std::array<Rgb, 12>& default_palette() {
    static const std::array<Rgb, 12> palette = {{
        {230, 25, 75},    // red
        {60, 180, 75},    // green
        {0, 130, 200},    // blue
        {255, 225, 25},   // yellow
        {245, 130, 48},   // orange
        {145, 30, 180},   // purple
        {70, 240, 240},   // cyan
        {240, 50, 230},   // magenta
        {210, 245, 60},   // lime
        {250, 190, 212},  // pink
        {0, 128, 128},    // teal
        {170, 110, 40},   // brown
    }};
    return palette;
}

std::map<ClassId, Rgb> palette_for(const ClassCatalog& catalog) {
    std::map<ClassId, Rgb> out;
    std::size_t i = 0;
    for (ClassId id : catalog.foreground_ids()) out.emplace(id, default_palette()[i++ % 12]);
    return out;
}

std::uint8_t blend_channel(std::uint8_t color, std::uint8_t base, double alpha) {
    const double v = alpha * color + (1.0 - alpha) * base;
    return static_cast<std::uint8_t>(std::min(255.0, std::floor(v + 0.5)));
}

LabelMask slice_2d(const LabelMask& mask, std::size_t slice) {
    if (mask.ndim() == 2) return mask;
    const auto& s = mask.shape();
    if (slice >= s[0]) {
        throw Error("INVALID_SLICE", "slice " + std::to_string(slice) + " outside " + shape_string(s));
    }
    const std::size_t plane = s[1] * s[2];
    auto first = mask.labels().begin() + static_cast<std::ptrdiff_t>(slice * plane);
    return LabelMask({s[1], s[2]}, std::vector<ClassId>(first, first + static_cast<std::ptrdiff_t>(plane)),
                     {mask.spacing()[1], mask.spacing()[2]});
}

RgbImage render_overlay(const std::optional<GrayImage>& base, const LabelMask& mask, const OverlaySpec& spec) {
    check_alpha(spec.alpha);
    const LabelMask m = slice_2d(mask, spec.slice);
    RgbImage img = base_image(base, m);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const ClassId id = m[i];
        if (spec.background && id == *spec.background) continue;
        auto it = spec.palette.find(id);
        if (it == spec.palette.end()) {
            throw Error("MISSING_PALETTE_ENTRY", "no palette colour for class " + std::to_string(id));
        }
        paint(img, i, it->second, spec.alpha);
    }
    return img;
}

std::vector<std::pair<ClassId, GrayImage>> render_binary_panels(const LabelMask& mask, const ClassCatalog& catalog,
                                                                std::size_t slice) {
    const LabelMask m = slice_2d(mask, slice);
    const ClassCatalog effective = catalog.empty() ? ClassCatalog::from_ids(labels_present(m, m)) : catalog;
    std::vector<std::pair<ClassId, GrayImage>> panels;
    for (ClassId id : effective.foreground_ids()) {
        GrayImage img{m.shape()[1], m.shape()[0], std::vector<std::uint8_t>(m.size(), 0)};
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == id) img.pixels[i] = 255;
        }
        panels.emplace_back(id, std::move(img));
    }
    return panels;
}

RgbImage render_disagreement(const std::optional<GrayImage>& base, const LabelMask& gt, const LabelMask& pred,
                             ClassId class_id, const DisagreementStyle& style) {
    check_alpha(style.alpha);
    if (!shape_compatible(gt, pred)) {
        throw Error("SHAPE_MISMATCH",
                    "shape mismatch: gt " + shape_string(gt.shape()) + " vs pred " + shape_string(pred.shape()));
    }
    const LabelMask g = slice_2d(gt, style.slice);
    const LabelMask p = slice_2d(pred, style.slice);
    RgbImage img = base_image(base, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const bool truth = g[i] == class_id;
        const bool predicted = p[i] == class_id;
        if (predicted && !truth) paint(img, i, style.false_positive, style.alpha);
        else if (truth && !predicted) paint(img, i, style.false_negative, style.alpha);
    }
    return img;
}

}  // namespace segscore
