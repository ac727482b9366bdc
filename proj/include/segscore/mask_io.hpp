#pragma once

#include "segscore/mask.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace segscore {

enum class MaskFormat {
    Png,    // 8-bit when every label fits, 16-bit otherwise
    Png8,
    Png16,
    Mgrid,
};

std::optional<MaskFormat> parse_mask_format(const std::string& tag);

/// Format implied by the file extension (.png / .mgrid / .mgrd).
std::optional<MaskFormat> format_from_path(const std::filesystem::path& path);

/// Loads a hard label mask. PNG input must be 8- or 16-bit single-channel
/// grayscale; MGRID input must carry the u16 label dtype.
LabelMask load_mask(const std::filesystem::path& path, std::optional<MaskFormat> hint = std::nullopt);

void save_mask(const LabelMask& mask, const std::filesystem::path& path, MaskFormat format);

/// MGRID with the f32 probability dtype.
ProbabilityGrid load_probabilities(const std::filesystem::path& path);
void save_probabilities(const ProbabilityGrid& grid, const std::filesystem::path& path);

/// Either kind of prediction, dispatched on the MGRID dtype byte (PNG is always labels).
using Prediction = std::variant<LabelMask, ProbabilityGrid>;
Prediction load_prediction(const std::filesystem::path& path);

// In-memory codecs, used by the file functions above.
std::vector<std::uint8_t> encode_mgrid(const LabelMask& mask);
std::vector<std::uint8_t> encode_mgrid(const ProbabilityGrid& grid);
Prediction decode_mgrid(const std::vector<std::uint8_t>& bytes);

// 8-bit grayscale / RGB images used by the visualization module.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // interleaved RGB, row-major

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

GrayImage load_gray_png(const std::filesystem::path& path);
void save_gray_png(const GrayImage& image, const std::filesystem::path& path);
void save_rgb_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace segscore
