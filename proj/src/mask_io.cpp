#include "segscore/mask_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

namespace segscore {

namespace {

constexpr std::uint8_t kMgridMagic[4] = {'M', 'G', 'R', 'D'};
constexpr std::uint8_t kMgridVersion = 1;
constexpr std::uint8_t kDtypeLabels = 0;
constexpr std::uint8_t kDtypeProbabilities = 1;

// ---------------------------------------------------------------------------
// MGRID little-endian helpers

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }

private:
    void need(std::size_t n) const {
        if (remaining() < n) throw Error("MGRID_HEADER", "MGRID header truncated");
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

void write_mgrid_header(std::vector<std::uint8_t>& out, std::uint8_t dtype, const Shape& shape,
                        const std::vector<double>& spacing) {
    out.insert(out.end(), std::begin(kMgridMagic), std::end(kMgridMagic));
    out.push_back(kMgridVersion);
    out.push_back(dtype);
    out.push_back(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) {
        if (d > 0xFFFFFFFFu) throw Error("MGRID_HEADER", "axis length exceeds u32");
        put_u32(out, static_cast<std::uint32_t>(d));
    }
    for (double s : spacing) put_f32(out, static_cast<float>(s));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("UNREADABLE", "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("UNWRITABLE", "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("UNWRITABLE", "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// PNG via libpng. The setjmp regions below touch only C objects and
// pre-sized buffers, so a longjmp never skips a C++ destructor.

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngHeader {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int color_type = 0;
};

struct PngMessage {
    char text[256] = {};
};

void png_error_to_buffer(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<PngMessage*>(png_get_error_ptr(png));
    if (sink) std::snprintf(sink->text, sizeof sink->text, "%s", msg);
    png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

// Returns false on libpng error; `msg` holds the reason.
bool png_read_header(std::FILE* fp, png_structp png, png_infop info, PngHeader& hdr) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, fp);
    png_read_info(png, info);
    png_get_IHDR(png, info, &hdr.width, &hdr.height, &hdr.bit_depth, &hdr.color_type, nullptr, nullptr, nullptr);
    return true;
}

bool png_read_rows(png_structp png, png_infop info, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, info);
    return true;
}

bool png_write_all(std::FILE* fp, png_structp png, png_infop info, png_uint_32 width, png_uint_32 height,
                   int bit_depth, int color_type, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_init_io(png, fp);
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // rows are host little-endian u16
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

struct RawPng {
    PngHeader header;
    std::vector<std::uint8_t> data;  // row-major, bit_depth/8 bytes per sample, big-endian for 16-bit
};

RawPng read_png_gray(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw Error("UNREADABLE", "cannot open " + path.string());

    std::uint8_t sig[8] = {};
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw Error("UNREADABLE", path.string() + " is not a PNG file");
    }

    PngMessage msg;
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &msg, png_error_to_buffer, png_warning_ignore);
    if (!png) throw Error("UNREADABLE", "libpng initialisation failed");
    png_infop info = png_create_info_struct(png);
    auto destroy = [&] { png_destroy_read_struct(&png, &info, nullptr); };
    png_set_sig_bytes(png, 8);

    RawPng raw;
    if (!png_read_header(fp.get(), png, info, raw.header)) {
        destroy();
        throw Error("UNREADABLE", path.string() + ": " + msg.text);
    }
    const PngHeader& h = raw.header;
    if (h.color_type == PNG_COLOR_TYPE_PALETTE) {
        destroy();
        throw Error("UNSUPPORTED_PNG", path.string() + ": palette PNGs are not accepted as label masks");
    }
    if (h.color_type != PNG_COLOR_TYPE_GRAY) {
        destroy();
        throw Error("UNSUPPORTED_PNG", path.string() + ": label PNG must be single-channel grayscale");
    }
    if (h.bit_depth != 8 && h.bit_depth != 16) {
        destroy();
        throw Error("UNSUPPORTED_BIT_DEPTH",
                    path.string() + ": unsupported bit depth " + std::to_string(h.bit_depth) + " (need 8 or 16)");
    }

    const std::size_t row_bytes = static_cast<std::size_t>(h.width) * static_cast<std::size_t>(h.bit_depth / 8);
    raw.data.assign(row_bytes * h.height, 0);
    std::vector<png_bytep> rows(h.height);
    for (std::size_t r = 0; r < h.height; ++r) rows[r] = raw.data.data() + r * row_bytes;

    if (!png_read_rows(png, info, rows.data())) {
        destroy();
        throw Error("UNREADABLE", path.string() + ": " + msg.text);
    }
    destroy();
    return raw;
}

void write_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height, int bit_depth,
               int color_type, std::vector<std::uint8_t>& data, std::size_t row_bytes) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw Error("UNWRITABLE", "cannot open " + path.string() + " for writing");

    PngMessage msg;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &msg, png_error_to_buffer, png_warning_ignore);
    if (!png) throw Error("UNWRITABLE", "libpng initialisation failed");
    png_infop info = png_create_info_struct(png);

    std::vector<png_bytep> rows(height);
    for (std::size_t r = 0; r < height; ++r) rows[r] = data.data() + r * row_bytes;

    const bool ok = png_write_all(fp.get(), png, info, width, height, bit_depth, color_type, rows.data());
    png_destroy_write_struct(&png, &info);
    if (!ok) throw Error("UNWRITABLE", path.string() + ": " + msg.text);
    if (std::fflush(fp.get()) != 0) throw Error("UNWRITABLE", "write failed for " + path.string());
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0x7FFFFFFFu) throw Error("UNSUPPORTED_PNG", std::string(what) + " too large for PNG");
    return static_cast<std::uint32_t>(v);
}

LabelMask load_png_mask(const std::filesystem::path& path) {
    RawPng raw = read_png_gray(path);
    const std::size_t n = static_cast<std::size_t>(raw.header.width) * raw.header.height;
    std::vector<ClassId> labels(n);
    if (raw.header.bit_depth == 8) {
        std::copy(raw.data.begin(), raw.data.end(), labels.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<ClassId>((raw.data[2 * i] << 8) | raw.data[2 * i + 1]);
        }
    }
    return LabelMask({raw.header.height, raw.header.width}, std::move(labels));
}

void save_png_mask(const LabelMask& mask, const std::filesystem::path& path, MaskFormat format) {
    if (mask.ndim() != 2) throw Error("PNG_2D_ONLY", "PNG supports 2D only");
    const ClassId max_label = mask.max_label();
    int depth = 8;
    if (format == MaskFormat::Png16 || (format == MaskFormat::Png && max_label > 255)) depth = 16;
    if (depth == 8 && max_label > 255) {
        throw Error("LABEL_EXCEEDS_BIT_DEPTH",
                    "label " + std::to_string(max_label) + " exceeds 8-bit PNG range; use 16-bit output");
    }
    const std::uint32_t height = checked_u32(mask.shape()[0], "height");
    const std::uint32_t width = checked_u32(mask.shape()[1], "width");
    std::vector<std::uint8_t> data;
    std::size_t row_bytes = width;
    if (depth == 8) {
        data.assign(mask.labels().begin(), mask.labels().end());
    } else {
        row_bytes = 2 * static_cast<std::size_t>(width);
        data.reserve(mask.size() * 2);
        for (ClassId v : mask.labels()) put_u16(data, v);
    }
    write_png(path, width, height, depth, PNG_COLOR_TYPE_GRAY, data, row_bytes);
}

}  // namespace

std::optional<MaskFormat> parse_mask_format(const std::string& tag) {
    if (tag == "png") return MaskFormat::Png;
    if (tag == "png8") return MaskFormat::Png8;
    if (tag == "png16") return MaskFormat::Png16;
    if (tag == "mgrid" || tag == "mgrd") return MaskFormat::Mgrid;
    return std::nullopt;
}

std::optional<MaskFormat> format_from_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png") return MaskFormat::Png;
    if (ext == ".mgrid" || ext == ".mgrd") return MaskFormat::Mgrid;
    return std::nullopt;
}

std::vector<std::uint8_t> encode_mgrid(const LabelMask& mask) {
    std::vector<std::uint8_t> out;
    out.reserve(7 + 8 * mask.ndim() + 2 * mask.size());
    write_mgrid_header(out, kDtypeLabels, mask.shape(), mask.spacing());
    for (ClassId v : mask.labels()) put_u16(out, v);
    return out;
}

std::vector<std::uint8_t> encode_mgrid(const ProbabilityGrid& grid) {
    std::vector<std::uint8_t> out;
    out.reserve(7 + 8 * grid.shape().size() + 4 * grid.size());
    write_mgrid_header(out, kDtypeProbabilities, grid.shape(), grid.spacing());
    for (float v : grid.values()) put_f32(out, v);
    return out;
}

Prediction decode_mgrid(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4 || !std::equal(std::begin(kMgridMagic), std::end(kMgridMagic), bytes.begin())) {
        throw Error("MGRID_HEADER", "MGRID magic mismatch");
    }
    ByteReader in(bytes);
    for (int i = 0; i < 4; ++i) in.u8();
    if (const std::uint8_t version = in.u8(); version != kMgridVersion) {
        throw Error("MGRID_HEADER", "unsupported MGRID version " + std::to_string(version));
    }
    const std::uint8_t dtype = in.u8();
    if (dtype != kDtypeLabels && dtype != kDtypeProbabilities) {
        throw Error("MGRID_HEADER", "unknown MGRID dtype " + std::to_string(dtype));
    }
    const std::uint8_t ndim = in.u8();
    if (ndim != 2 && ndim != 3) throw Error("MGRID_HEADER", "MGRID ndim must be 2 or 3");
    Shape shape(ndim);
    for (auto& d : shape) d = in.u32();
    std::vector<double> spacing(ndim);
    for (auto& s : spacing) s = static_cast<double>(in.f32());

    const std::size_t n = element_count(shape);
    const std::size_t width = dtype == kDtypeLabels ? 2 : 4;
    if (in.remaining() != n * width) {
        throw Error("PAYLOAD_LENGTH", "payload length mismatch: header declares " + std::to_string(n) +
                                          " elements, payload holds " + std::to_string(in.remaining()) + " bytes");
    }
    if (dtype == kDtypeLabels) {
        std::vector<ClassId> labels(n);
        for (auto& v : labels) v = in.u16();
        return LabelMask(std::move(shape), std::move(labels), std::move(spacing));
    }
    std::vector<float> values(n);
    for (auto& v : values) v = in.f32();
    return ProbabilityGrid(std::move(shape), std::move(values), std::move(spacing));
}

LabelMask load_mask(const std::filesystem::path& path, std::optional<MaskFormat> hint) {
    const auto format = hint ? hint : format_from_path(path);
    if (!format) throw Error("UNSUPPORTED_FORMAT", "cannot infer mask format of " + path.string());
    if (*format == MaskFormat::Mgrid) {
        Prediction p = decode_mgrid(read_file(path));
        if (auto* mask = std::get_if<LabelMask>(&p)) return std::move(*mask);
        throw Error("MGRID_HEADER", path.string() + " holds probabilities, not labels");
    }
    return load_png_mask(path);
}

void save_mask(const LabelMask& mask, const std::filesystem::path& path, MaskFormat format) {
    if (format == MaskFormat::Mgrid) {
        write_file(path, encode_mgrid(mask));
    } else {
        save_png_mask(mask, path, format);
    }
}

ProbabilityGrid load_probabilities(const std::filesystem::path& path) {
    Prediction p = decode_mgrid(read_file(path));
    if (auto* grid = std::get_if<ProbabilityGrid>(&p)) return std::move(*grid);
    throw Error("MGRID_HEADER", path.string() + " holds labels, not probabilities");
}

void save_probabilities(const ProbabilityGrid& grid, const std::filesystem::path& path) {
    write_file(path, encode_mgrid(grid));
}

Prediction load_prediction(const std::filesystem::path& path) {
    const auto format = format_from_path(path);
    if (format == MaskFormat::Mgrid) return decode_mgrid(read_file(path));
    return load_mask(path, format);
}

GrayImage load_gray_png(const std::filesystem::path& path) {
    RawPng raw = read_png_gray(path);
    GrayImage img{raw.header.width, raw.header.height, {}};
    if (raw.header.bit_depth == 8) {
        img.pixels = std::move(raw.data);
    } else {
        img.pixels.resize(img.width * img.height);
        for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = raw.data[2 * i];  // high byte
    }
    return img;
}

void save_gray_png(const GrayImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> data = image.pixels;
    write_png(path, checked_u32(image.width, "width"), checked_u32(image.height, "height"), 8, PNG_COLOR_TYPE_GRAY,
              data, image.width);
}

void save_rgb_png(const RgbImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> data = image.pixels;
    write_png(path, checked_u32(image.width, "width"), checked_u32(image.height, "height"), 8, PNG_COLOR_TYPE_RGB,
              data, image.width * 3);
}

}  // namespace segscore
