#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "rgi/image.hpp"
#include "rgi/pattern_stack.hpp"
#include "rgi/rng.hpp"

namespace rgi {

/// Bucket-detector readings, one per pattern, plus noise provenance.
struct MeasurementRecord {
  std::vector<double> intensities;
  std::optional<double> noise_power_dbw;
  std::optional<std::uint64_t> rng_seed;

  std::size_t count() const noexcept { return intensities.size(); }
  bool operator==(const MeasurementRecord&) const = default;
};

/// Additive white Gaussian noise with variance 10^(power_dbw / 10), the
/// unit-load convention of MATLAB's wgn().
struct NoiseSpec {
  double power_dbw = 0.0;
  RngSpec rng;

  double variance() const;
};

/// intensities[t] = sum over pixels of pattern_t * object.
MeasurementRecord measure(const PatternStack& stack, const Image& object);

/// Adds one Normal(0, variance) draw per measurement; draw t comes from
/// rng.substream(t). Throws StateError if the record is already noisy.
MeasurementRecord add_wgn(const MeasurementRecord& record, const NoiseSpec& noise);

/// CSV "t,intensity" plus a JSON sidecar (<path>.json) holding noise metadata.
void save_measurements(const MeasurementRecord& record, const std::filesystem::path& csv_path);
MeasurementRecord load_measurements(const std::filesystem::path& csv_path);

}  // namespace rgi
