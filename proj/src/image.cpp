#include "liqa/image.hpp"

#include "liqa/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>

namespace liqa {

LumaImage::LumaImage(int width, int height)
    : LumaImage(width, height,
                std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(height, 0))))
{
}

LumaImage::LumaImage(int width, int height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples))
{
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("LumaImage: zero or negative dimension");
    }
    if (samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("LumaImage: sample count does not match width*height");
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("LumaImage: non-finite sample");
        }
    }
}

double LumaImage::mean() const noexcept
{
    if (samples_.empty()) {
        return 0.0;
    }
    return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
           static_cast<double>(samples_.size());
}

LumaImage LumaImage::plus(double offset) const
{
    std::vector<double> out(samples_);
    for (double& v : out) {
        v += offset;
    }
    return LumaImage(width_, height_, std::move(out));
}

namespace {

// Interleaved 8/16-bit pixels before luminance conversion.
struct RawRaster {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray) or 3 (RGB)
    double scale = 1.0;  // multiplies raw values onto [0, 255]
    std::vector<std::uint16_t> values;
};

std::vector<unsigned char> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DecodeError("cannot open image file: " + path.string());
    }
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

RawRaster decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DecodeError("PNG decode failed for " + path.string() + ": " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw DecodeError("PNG decode failed for " + path.string() + ": " + msg);
    }
    RawRaster raw;
    raw.width = static_cast<int>(image.width);
    raw.height = static_cast<int>(image.height);
    raw.channels = color ? 3 : 1;
    raw.values.assign(buffer.begin(), buffer.end());
    return raw;
}

std::uint32_t le32(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p)
{
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Uncompressed BMP: 8-bit paletted, 24-bit BGR, 32-bit BGRX.
RawRaster decode_bmp(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
{
    auto fail = [&](const std::string& why) {
        return DecodeError("BMP decode failed for " + path.string() + ": " + why);
    };
    if (bytes.size() < 54) {
        throw fail("truncated header");
    }
    const std::uint32_t data_offset = le32(&bytes[10]);
    const std::uint32_t header_size = le32(&bytes[14]);
    if (header_size < 40) {
        throw fail("unsupported header version");
    }
    const auto width = static_cast<std::int32_t>(le32(&bytes[18]));
    const auto raw_height = static_cast<std::int32_t>(le32(&bytes[22]));
    const std::uint16_t bpp = le16(&bytes[28]);
    const std::uint32_t compression = le32(&bytes[30]);
    std::uint32_t palette_size = le32(&bytes[46]);
    if (compression != 0 && !(compression == 3 && bpp == 32)) {
        throw fail("compressed BMP is not supported");
    }
    if (width <= 0 || raw_height == 0) {
        throw fail("zero-dimension image");
    }
    const bool bottom_up = raw_height > 0;
    const int height = std::abs(raw_height);
    if (bpp != 8 && bpp != 24 && bpp != 32) {
        throw fail("unsupported bit depth " + std::to_string(bpp));
    }

    std::vector<std::array<std::uint8_t, 3>> palette;
    if (bpp == 8) {
        if (palette_size == 0) {
            palette_size = 256;
        }
        const std::size_t pal_start = 14 + header_size;
        if (pal_start + 4ULL * palette_size > bytes.size()) {
            throw fail("truncated palette");
        }
        for (std::uint32_t i = 0; i < palette_size; ++i) {
            const unsigned char* e = &bytes[pal_start + 4 * i];
            palette.push_back({e[2], e[1], e[0]});
        }
    }

    const std::size_t stride = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
    if (data_offset + stride * static_cast<std::size_t>(height) > bytes.size()) {
        throw fail("truncated pixel data");
    }

    RawRaster raw;
    raw.width = width;
    raw.height = height;
    raw.channels = 3;
    raw.values.resize(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y) {
        const int src_row = bottom_up ? height - 1 - y : y;
        const unsigned char* row = &bytes[data_offset + stride * static_cast<std::size_t>(src_row)];
        for (int x = 0; x < width; ++x) {
            std::uint16_t* dst = &raw.values[(static_cast<std::size_t>(y) * width + x) * 3];
            if (bpp == 8) {
                const std::uint8_t idx = row[x];
                if (idx >= palette.size()) {
                    throw fail("palette index out of range");
                }
                dst[0] = palette[idx][0];
                dst[1] = palette[idx][1];
                dst[2] = palette[idx][2];
            } else {
                const unsigned char* px = row + static_cast<std::size_t>(x) * (bpp / 8);
                dst[0] = px[2];
                dst[1] = px[1];
                dst[2] = px[0];
            }
        }
    }
    return raw;
}

// PNM tokens may be separated by whitespace and '#' comments.
class PnmHeaderReader {
public:
    PnmHeaderReader(const std::vector<unsigned char>& bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

    long next_int()
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            return -1;
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) {
                return -1;
            }
            ++pos_;
        }
        return v;
    }

    std::size_t position() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& bytes_;
    std::size_t pos_;
};

RawRaster decode_pnm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
{
    auto fail = [&](const std::string& why) {
        return DecodeError("PNM decode failed for " + path.string() + ": " + why);
    };
    const char kind = static_cast<char>(bytes[1]);
    const bool ascii = kind == '2' || kind == '3';
    const int channels = (kind == '3' || kind == '6') ? 3 : 1;

    PnmHeaderReader reader(bytes, 2);
    const long width = reader.next_int();
    const long height = reader.next_int();
    const long maxval = reader.next_int();
    if (width < 0 || height < 0 || maxval < 0) {
        throw fail("malformed header");
    }
    if (width == 0 || height == 0) {
        throw fail("zero-dimension image");
    }
    if (maxval == 0 || maxval > 65535) {
        throw fail("invalid maxval");
    }

    RawRaster raw;
    raw.width = static_cast<int>(width);
    raw.height = static_cast<int>(height);
    raw.channels = channels;
    raw.scale = 255.0 / static_cast<double>(maxval);
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
    raw.values.resize(count);

    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            const long v = reader.next_int();
            if (v < 0 || v > maxval) {
                throw fail("truncated or invalid sample data");
            }
            raw.values[i] = static_cast<std::uint16_t>(v);
        }
        return raw;
    }

    // Exactly one whitespace byte separates the header from binary data.
    reader.advance(1);
    const std::size_t start = reader.position();
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    if (start + count * bytes_per_sample > bytes.size()) {
        throw fail("truncated pixel data");
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (bytes_per_sample == 1) {
            raw.values[i] = bytes[start + i];
        } else {
            raw.values[i] = static_cast<std::uint16_t>((bytes[start + 2 * i] << 8) | bytes[start + 2 * i + 1]);
        }
    }
    return raw;
}

}  // namespace

LumaImage load_luma(const std::filesystem::path& path, const LumaWeights& weights)
{
    const double sum = weights[0] + weights[1] + weights[2];
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("luminance weights must sum to 1");
    }

    const std::vector<unsigned char> bytes = read_file(path);
    if (bytes.size() < 8) {
        throw DecodeError("file too short to be an image: " + path.string());
    }

    RawRaster raw;
    static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    if (std::equal(std::begin(kPngSig), std::end(kPngSig), bytes.begin())) {
        raw = decode_png(bytes, path);
    } else if (bytes[0] == 'B' && bytes[1] == 'M') {
        raw = decode_bmp(bytes, path);
    } else if (bytes[0] == 'P' && bytes[1] >= '2' && bytes[1] <= '6' && bytes[1] != '4') {
        raw = decode_pnm(bytes, path);
    } else {
        throw DecodeError("unsupported image format: " + path.string());
    }
    if (raw.width <= 0 || raw.height <= 0) {
        throw DecodeError("zero-dimension image: " + path.string());
    }

    const std::size_t n = static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height);
    std::vector<double> luma(n);
    if (raw.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            luma[i] = raw.values[i] * raw.scale;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint16_t* px = &raw.values[3 * i];
            luma[i] = (weights[0] * px[0] + weights[1] * px[1] + weights[2] * px[2]) * raw.scale;
        }
    }
    return LumaImage(raw.width, raw.height, std::move(luma));
}

void save_pgm(const LumaImage& image, const std::filesystem::path& path, bool sixteen_bit)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    const int maxval = sixteen_bit ? 65535 : 255;
    out << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
    const double scale = maxval / 255.0;
    for (double v : image.samples()) {
        const long q = std::lround(std::clamp(v * scale, 0.0, static_cast<double>(maxval)));
        if (sixteen_bit) {
            out.put(static_cast<char>((q >> 8) & 0xFF));
            out.put(static_cast<char>(q & 0xFF));
        } else {
            out.put(static_cast<char>(q));
        }
    }
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

}  // namespace liqa
