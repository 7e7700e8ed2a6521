#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rgi {

/// Seed plus generator identity. Every random draw in the library is derived
/// from one of these, so equal specs reproduce equal streams.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distribution sampling is done by hand below rather than through
/// <random> distributions, whose algorithms are implementation-defined.
struct RngSpec {
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  std::uint64_t seed = 0;

  /// Derives an independent child spec. Used for per-pattern and per-stage
  /// substreams so serial and parallel execution draw identical values.
  RngSpec substream(std::uint64_t index) const noexcept;
  RngSpec substream(std::string_view tag) const noexcept;

  bool operator==(const RngSpec&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream of samples drawn from an RngSpec.
class RandomStream {
 public:
  explicit RandomStream(const RngSpec& spec);

  std::uint64_t next_u64() { return engine_(); }

  /// Fair coin. Consumes one bit of a buffered 64-bit word at a time.
  bool next_bit();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double next_unit();

  /// Standard normal via the Box-Muller transform.
  double next_normal();

 private:
  std::mt19937_64 engine_;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rgi
