#pragma once

#include "segscore/mask.hpp"
#include "segscore/mask_io.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace segscore {

using Rgb = std::array<std::uint8_t, 3>;

/// Twelve fixed, well-separated colours; the i-th foreground class (in
/// ascending id order) gets entry i mod 12.
const std::array<Rgb, 12>& default_palette();

struct OverlaySpec {
    std::map<ClassId, Rgb> palette;
    double alpha = 0.5;                    // in (0, 1]
    std::optional<ClassId> background = 0;  // drawn as the base image
    std::size_t slice = 0;                 // slice index for 3D masks
};

/// Palette from `default_palette()` for the foreground classes of a catalog.
std::map<ClassId, Rgb> palette_for(const ClassCatalog& catalog);

/// One channel of `alpha * color + (1 - alpha) * base`, rounded half up.
std::uint8_t blend_channel(std::uint8_t color, std::uint8_t base, double alpha);

/// Colours every non-background element with its palette entry, alpha
/// blended over `base` (black if absent); background passes `base` through.
RgbImage render_overlay(const std::optional<GrayImage>& base, const LabelMask& mask, const OverlaySpec& spec);

/// Per-class black/white images: 255 where the label equals the class.
std::vector<std::pair<ClassId, GrayImage>> render_binary_panels(const LabelMask& mask, const ClassCatalog& catalog,
                                                                std::size_t slice = 0);

struct DisagreementStyle {
    Rgb false_positive{255, 0, 255};
    Rgb false_negative{0, 255, 255};
    double alpha = 1.0;
    std::size_t slice = 0;
};

/// Marks false positives and false negatives of one class over `base`;
/// agreeing elements pass the base through.
RgbImage render_disagreement(const std::optional<GrayImage>& base, const LabelMask& gt, const LabelMask& pred,
                             ClassId class_id, const DisagreementStyle& style = {});

/// The 2D slice of a mask that visualizations operate on.
LabelMask slice_2d(const LabelMask& mask, std::size_t slice);

}  // namespace segscore
