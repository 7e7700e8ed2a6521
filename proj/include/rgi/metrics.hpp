#pragma once

#include <optional>

#include "rgi/image.hpp"

namespace rgi {

struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

/// PSNR and SSIM over the whole frame or one region. psnr_db is +infinity
/// when the images agree exactly on the region.
struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
  std::optional<Roi> region;
};

/// Both images scaled to 0..255 (8-bit peak); MSE averaged over region pixels.
QualityReport psnr(const Image& truth, const Image& test, const std::optional<Roi>& region = {});

/// Single global SSIM over the region (no sliding window) with sample
/// variances and covariance, on the unit intensity scale.
double ssim(const Image& truth, const Image& test, const std::optional<Roi>& region = {},
            const SsimParams& params = {});

/// psnr() and ssim() together.
QualityReport evaluate(const Image& truth, const Image& test, const std::optional<Roi>& region = {},
                       const SsimParams& params = {});

struct QualityDelta {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

/// a - b. Infinite PSNR minus finite is +infinity; infinity minus infinity is 0.
QualityDelta roi_increment(const QualityReport& a, const QualityReport& b);

}  // namespace rgi
