#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rgi/rng.hpp"

namespace rgi {

/// T binary patterns of identical height x width, stored one byte per bit
/// (values 0 or 1), pattern-major then row-major.
class PatternStack {
 public:
  PatternStack() = default;
  PatternStack(std::size_t count, std::size_t height, std::size_t width);
  PatternStack(std::size_t count, std::size_t height, std::size_t width,
               std::vector<std::uint8_t> bits);

  std::size_t count() const noexcept { return count_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixels() const noexcept { return height_ * width_; }

  std::span<const std::uint8_t> pattern(std::size_t t) const;
  std::span<std::uint8_t> pattern(std::size_t t);
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  bool operator==(const PatternStack&) const = default;

 private:
  std::size_t count_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Independent fair bits; pattern t draws from rng.substream(t).
PatternStack gen_random_stack(std::size_t count, std::size_t height, std::size_t width,
                              const RngSpec& rng);

/// Binary container: "RGIP", version byte 1, u32le T/H/W, then each pattern
/// packed MSB-first and padded to a byte boundary.
std::vector<std::uint8_t> encode_pattern_stack(const PatternStack& stack);
PatternStack decode_pattern_stack(std::span<const std::uint8_t> bytes);

void save_pattern_stack(const PatternStack& stack, const std::filesystem::path& path);
PatternStack load_pattern_stack(const std::filesystem::path& path);

}  // namespace rgi
