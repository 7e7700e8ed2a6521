#include "rgi/pattern_stack.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "rgi/error.hpp"

namespace rgi {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'R', 'G', 'I', 'P'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 3 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::size_t value) {
  require(value <= std::numeric_limits<std::uint32_t>::max(), "dimension exceeds 32 bits");
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>((value >> shift) & 0xFF));
  }
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t value = 0;
  for (std::size_t i = 0; i < 4; ++i) value |= std::uint32_t{bytes[offset + i]} << (8 * i);
  return value;
}

}  // namespace

PatternStack::PatternStack(std::size_t count, std::size_t height, std::size_t width)
    : PatternStack(count, height, width, std::vector<std::uint8_t>(count * height * width, 0)) {}

PatternStack::PatternStack(std::size_t count, std::size_t height, std::size_t width,
                           std::vector<std::uint8_t> bits)
    : count_(count), height_(height), width_(width), bits_(std::move(bits)) {
  require(height >= 1 && width >= 1, "pattern dimensions must be positive");
  require(bits_.size() == count * height * width, "pattern bit count does not match dimensions");
  for (std::uint8_t b : bits_) require(b <= 1, "pattern entries must be 0 or 1");
}

std::span<const std::uint8_t> PatternStack::pattern(std::size_t t) const {
  require(t < count_, "pattern index out of range");
  return std::span<const std::uint8_t>(bits_).subspan(t * pixels(), pixels());
}

std::span<std::uint8_t> PatternStack::pattern(std::size_t t) {
  require(t < count_, "pattern index out of range");
  return std::span<std::uint8_t>(bits_).subspan(t * pixels(), pixels());
}

PatternStack gen_random_stack(std::size_t count, std::size_t height, std::size_t width,
                              const RngSpec& rng) {
  PatternStack stack(count, height, width);
  for (std::size_t t = 0; t < count; ++t) {
    RandomStream stream(rng.substream(t));
    for (auto& bit : stack.pattern(t)) bit = stream.next_bit() ? 1 : 0;
  }
  return stack;
}

std::vector<std::uint8_t> encode_pattern_stack(const PatternStack& stack) {
  const std::size_t bytes_per_pattern = (stack.pixels() + 7) / 8;
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kHeaderSize + stack.count() * bytes_per_pattern);
  out.push_back(kVersion);
  put_u32(out, stack.count());
  put_u32(out, stack.height());
  put_u32(out, stack.width());
  for (std::size_t t = 0; t < stack.count(); ++t) {
    const auto bits = stack.pattern(t);
    for (std::size_t byte = 0; byte < bytes_per_pattern; ++byte) {
      std::uint8_t packed = 0;
      for (std::size_t k = 0; k < 8; ++k) {
        const std::size_t i = byte * 8 + k;
        if (i < bits.size() && bits[i]) packed |= static_cast<std::uint8_t>(0x80u >> k);
      }
      out.push_back(packed);
    }
  }
  return out;
}

PatternStack decode_pattern_stack(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) fail(ErrorKind::Format, "pattern stack: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    fail(ErrorKind::Format, "pattern stack: bad magic");
  }
  if (bytes[4] != kVersion) {
    fail(ErrorKind::Format, "pattern stack: unsupported version " + std::to_string(bytes[4]));
  }
  const std::size_t count = get_u32(bytes, 5);
  const std::size_t height = get_u32(bytes, 9);
  const std::size_t width = get_u32(bytes, 13);
  if (height == 0 || width == 0) fail(ErrorKind::Format, "pattern stack: zero dimension");
  const std::size_t pixels = height * width;
  const std::size_t bytes_per_pattern = (pixels + 7) / 8;
  if (bytes.size() != kHeaderSize + count * bytes_per_pattern) {
    fail(ErrorKind::Format, "pattern stack: payload size mismatch");
  }
  std::vector<std::uint8_t> bits(count * pixels);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t base = kHeaderSize + t * bytes_per_pattern;
    for (std::size_t i = 0; i < pixels; ++i) {
      bits[t * pixels + i] = (bytes[base + i / 8] >> (7 - i % 8)) & 1u;
    }
  }
  return PatternStack(count, height, width, std::move(bits));
}

void save_pattern_stack(const PatternStack& stack, const std::filesystem::path& path) {
  const auto bytes = encode_pattern_stack(stack);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

PatternStack load_pattern_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_pattern_stack(bytes);
}

}  // namespace rgi
