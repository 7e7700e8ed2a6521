#include "rgi/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <tuple>

#include "rgi/error.hpp"

namespace rgi {

void validate_roi(const Roi& roi, std::size_t frame_h, std::size_t frame_w) {
  require(roi.height >= 1 && roi.width >= 1, "roi must be non-empty");
  require(roi.fits_in(frame_h, frame_w),
          "roi (" + std::to_string(roi.top) + "," + std::to_string(roi.left) + " " +
              std::to_string(roi.height) + "x" + std::to_string(roi.width) +
              ") does not fit in a " + std::to_string(frame_h) + "x" + std::to_string(frame_w) +
              " frame");
}

Roi centered_roi(std::size_t frame_h, std::size_t frame_w, std::size_t roi_h, std::size_t roi_w) {
  require(roi_h <= frame_h && roi_w <= frame_w, "centered roi larger than frame");
  return Roi{(frame_h - roi_h) / 2, (frame_w - roi_w) / 2, roi_h, roi_w};
}

Image::Image(std::size_t height, std::size_t width)
    : Image(height, width, std::vector<double>(height * width, 0.0)) {}

Image::Image(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  require(height >= 1 && width >= 1, "image dimensions must be positive");
  require(values_.size() == height * width, "image value count does not match dimensions");
  for (double v : values_) {
    require(v >= 0.0 && v <= 1.0, "image values must lie in [0, 1]");
  }
}

std::vector<double> Image::crop(const Roi& roi) const {
  validate_roi(roi, height_, width_);
  std::vector<double> out;
  out.reserve(roi.area());
  for (std::size_t r = roi.top; r < roi.top + roi.height; ++r) {
    const auto row = values_.begin() + static_cast<std::ptrdiff_t>(r * width_ + roi.left);
    out.insert(out.end(), row, row + static_cast<std::ptrdiff_t>(roi.width));
  }
  return out;
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

namespace {

class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& data, const std::string& name)
      : data_(data), name_(name) {}

  std::size_t next_number() {
    skip_space_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(data_[pos_] - '0');
      ++pos_;
      if (++digits > 9) fail(ErrorKind::Decode, name_ + ": header number too large");
    }
    if (digits == 0) fail(ErrorKind::Decode, name_ + ": malformed header");
    return value;
  }

  /// Consumes the single whitespace byte that ends the header.
  std::size_t payload_offset() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) {
      fail(ErrorKind::Decode, name_ + ": malformed header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& data_;
  const std::string& name_;
  std::size_t pos_ = 2;
};

}  // namespace

Raster8 read_netpbm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Decode, "cannot open image " + path.string());
  const std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const std::string name = path.string();
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6')) {
    fail(ErrorKind::Decode, name + ": not a binary PGM/PPM file");
  }
  Raster8 raster;
  raster.channels = data[1] == '5' ? 1 : 3;
  HeaderReader header(data, name);
  raster.width = header.next_number();
  raster.height = header.next_number();
  const std::size_t maxval = header.next_number();
  if (raster.width == 0 || raster.height == 0) fail(ErrorKind::Decode, name + ": empty image");
  if (maxval != 255) fail(ErrorKind::Decode, name + ": only maxval 255 is supported");
  const std::size_t offset = header.payload_offset();
  const std::size_t expected = raster.width * raster.height * raster.channels;
  if (data.size() < offset + expected) fail(ErrorKind::Decode, name + ": truncated pixel data");
  raster.bytes.assign(data.begin() + static_cast<std::ptrdiff_t>(offset),
                      data.begin() + static_cast<std::ptrdiff_t>(offset + expected));
  return raster;
}

void write_pgm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> bytes(image.size());
  const auto values = image.values();
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<char>(static_cast<unsigned char>(std::floor(values[i] * 255.0 + 0.5)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

std::vector<double> resize_bilinear(std::span<const double> src, std::size_t src_h,
                                    std::size_t src_w, std::size_t dst_h, std::size_t dst_w) {
  require(dst_h >= 1 && dst_w >= 1, "target dimensions must be positive");
  require(src.size() == src_h * src_w && src_h >= 1 && src_w >= 1, "bad source plane");
  if (src_h == dst_h && src_w == dst_w) return {src.begin(), src.end()};

  // Source coordinate of a destination pixel center, clamped to the valid
  // sample range; returns the lower tap and the weight of the upper tap.
  auto taps = [](std::size_t dst, std::size_t src_n, std::size_t dst_n) {
    const double scale = static_cast<double>(src_n) / static_cast<double>(dst_n);
    double s = (static_cast<double>(dst) + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src_n - 1));
    const auto lo = static_cast<std::size_t>(std::floor(s));
    const std::size_t hi = std::min(lo + 1, src_n - 1);
    return std::tuple{lo, hi, s - static_cast<double>(lo)};
  };

  std::vector<double> out(dst_h * dst_w);
  for (std::size_t y = 0; y < dst_h; ++y) {
    const auto [y0, y1, fy] = taps(y, src_h, dst_h);
    for (std::size_t x = 0; x < dst_w; ++x) {
      const auto [x0, x1, fx] = taps(x, src_w, dst_w);
      const double top = src[y0 * src_w + x0] * (1.0 - fx) + src[y0 * src_w + x1] * fx;
      const double bottom = src[y1 * src_w + x0] * (1.0 - fx) + src[y1 * src_w + x1] * fx;
      out[y * dst_w + x] = top * (1.0 - fy) + bottom * fy;
    }
  }
  return out;
}

Image load_image(const std::filesystem::path& path, std::size_t target_h, std::size_t target_w) {
  require(target_h >= 1 && target_w >= 1, "target dimensions must be positive");
  const Raster8 raster = read_netpbm(path);
  std::vector<double> gray(raster.height * raster.width);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < raster.channels; ++c) sum += raster.bytes[i * raster.channels + c];
    gray[i] = sum / static_cast<double>(raster.channels);
  }
  auto resized = resize_bilinear(gray, raster.height, raster.width, target_h, target_w);
  for (double& v : resized) v = std::clamp(v / 255.0, 0.0, 1.0);
  return Image(target_h, target_w, std::move(resized));
}

}  // namespace rgi
