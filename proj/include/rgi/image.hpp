#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace rgi {

/// Axis-aligned rectangle inside a frame.
struct Roi {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t area() const noexcept { return height * width; }
  bool contains(std::size_t row, std::size_t col) const noexcept {
    return row >= top && row < top + height && col >= left && col < left + width;
  }
  bool fits_in(std::size_t frame_h, std::size_t frame_w) const noexcept {
    return height >= 1 && width >= 1 && top + height <= frame_h && left + width <= frame_w;
  }
  bool operator==(const Roi&) const = default;
};

/// Throws ArgumentError unless the roi is non-empty and inside the frame.
void validate_roi(const Roi& roi, std::size_t frame_h, std::size_t frame_w);

/// Centered rectangle of the given size.
Roi centered_roi(std::size_t frame_h, std::size_t frame_w, std::size_t roi_h, std::size_t roi_w);

/// Grayscale image with row-major values in [0, 1].
class Image {
 public:
  Image(std::size_t height, std::size_t width);
  Image(std::size_t height, std::size_t width, std::vector<double> values);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }

  /// Pixels inside the roi, row-major.
  std::vector<double> crop(const Roi& roi) const;

  bool operator==(const Image&) const = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
};

/// Maps values affinely onto [0, 1]. A constant input maps to all zeros.
std::vector<double> minmax_normalize(std::span<const double> values);

/// 8-bit raster as stored on disk, channel-interleaved.
struct Raster8 {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<unsigned char> bytes;
};

/// Reads binary PGM (P5) or PPM (P6) with maxval 255.
Raster8 read_netpbm(const std::filesystem::path& path);

/// Writes values in [0, 1] as PGM P5, rounding value*255 half-up.
void write_pgm(const Image& image, const std::filesystem::path& path);

/// Decodes an image file, averages RGB channels with equal weight, resizes
/// bilinearly (half-pixel centers, clamped edges) and scales by 1/255.
Image load_image(const std::filesystem::path& path, std::size_t target_h, std::size_t target_w);

/// Bilinear resize of a single-channel plane on the same sampling convention.
std::vector<double> resize_bilinear(std::span<const double> src, std::size_t src_h,
                                    std::size_t src_w, std::size_t dst_h, std::size_t dst_w);

}  // namespace rgi
