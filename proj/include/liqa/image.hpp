#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace liqa {

/// Row-major luminance raster. Samples are real valued with a nominal
/// range of [0, 255]; every sample is finite. Immutable once built.
class LumaImage {
public:
    LumaImage() = default;

    /// Zero-filled image. Throws std::invalid_argument on a zero dimension.
    LumaImage(int width, int height);

    /// Takes ownership of `samples`, which must hold width*height finite values.
    LumaImage(int width, int height, std::vector<double> samples);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    double at(int x, int y) const noexcept {
        return samples_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                        static_cast<std::size_t>(x)];
    }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<const double> row(int y) const noexcept {
        return std::span<const double>(samples_).subspan(
            static_cast<std::size_t>(y) * static_cast<std::size_t>(width_),
            static_cast<std::size_t>(width_));
    }

    double mean() const noexcept;

    /// Copy with `offset` added to every sample.
    LumaImage plus(double offset) const;

    friend bool operator==(const LumaImage&, const LumaImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

using LumaWeights = std::array<double, 3>;

inline constexpr LumaWeights kRec601Weights{0.299, 0.587, 0.114};

/// Decodes a PNG, BMP or PGM/PPM file into luminance Y = wr*R + wg*G + wb*B.
/// Grayscale inputs pass through. 16-bit inputs are rescaled to [0, 255].
/// Throws DecodeError for unreadable, truncated or unsupported files and
/// std::invalid_argument when the weights do not sum to 1.
LumaImage load_luma(const std::filesystem::path& path,
                    const LumaWeights& weights = kRec601Weights);

/// Writes a binary PGM. With `sixteen_bit` the [0, 255] range is stored on
/// a 0..65535 scale so that fractional samples survive a round trip to
/// within 255/65535/2.
void save_pgm(const LumaImage& image, const std::filesystem::path& path,
              bool sixteen_bit = false);

}  // namespace liqa
