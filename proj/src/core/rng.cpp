#include "rgi/rng.hpp"

#include <cmath>
#include <numbers>

namespace rgi {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngSpec RngSpec::substream(std::uint64_t index) const noexcept {
  return RngSpec{splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851F42D4C957F2DULL))};
}

RngSpec RngSpec::substream(std::string_view tag) const noexcept {
  // FNV-1a over the tag bytes.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return substream(h);
}

RandomStream::RandomStream(const RngSpec& spec) : engine_(splitmix64(spec.seed)) {}

bool RandomStream::next_bit() {
  if (bits_left_ == 0) {
    bit_buffer_ = engine_();
    bits_left_ = 64;
  }
  const bool bit = (bit_buffer_ >> 63) != 0;
  bit_buffer_ <<= 1;
  --bits_left_;
  return bit;
}

double RandomStream::next_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = next_unit();
  while (u1 <= 0.0) u1 = next_unit();
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace rgi
