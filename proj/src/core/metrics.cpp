#include "rgi/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rgi/error.hpp"

namespace rgi {

namespace {

constexpr double kPeak = 255.0;

std::pair<std::vector<double>, std::vector<double>> region_pixels(const Image& truth,
                                                                  const Image& test,
                                                                  const std::optional<Roi>& region) {
  require(truth.height() == test.height() && truth.width() == test.width(),
          "image dimensions differ");
  if (!region) {
    return {{truth.values().begin(), truth.values().end()},
            {test.values().begin(), test.values().end()}};
  }
  return {truth.crop(*region), test.crop(*region)};
}

}  // namespace

QualityReport psnr(const Image& truth, const Image& test, const std::optional<Roi>& region) {
  const auto [x, y] = region_pixels(truth, test, region);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = (y[i] - x[i]) * kPeak;
    sum += d * d;
  }
  QualityReport report;
  report.region = region;
  report.mse = sum / static_cast<double>(x.size());
  report.psnr_db = report.mse > 0.0 ? 10.0 * std::log10(kPeak * kPeak / report.mse)
                                    : std::numeric_limits<double>::infinity();
  return report;
}

double ssim(const Image& truth, const Image& test, const std::optional<Roi>& region,
            const SsimParams& params) {
  const auto [x, y] = region_pixels(truth, test, region);
  require(x.size() >= 2, "ssim needs at least two pixels");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double vx = 0.0;
  double vy = 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cov += dx * dy;
  }
  vx /= n - 1.0;
  vy /= n - 1.0;
  cov /= n - 1.0;
  const double c1 = params.c1();
  const double c2 = params.c2();
  return ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
         ((mx * mx + my * my + c1) * (vx + vy + c2));
}

QualityReport evaluate(const Image& truth, const Image& test, const std::optional<Roi>& region,
                       const SsimParams& params) {
  QualityReport report = psnr(truth, test, region);
  report.ssim = ssim(truth, test, region, params);
  return report;
}

QualityDelta roi_increment(const QualityReport& a, const QualityReport& b) {
  require(a.region == b.region, "quality reports cover different regions");
  QualityDelta delta;
  if (std::isinf(a.psnr_db) && std::isinf(b.psnr_db)) {
    delta.psnr_db = 0.0;
  } else {
    delta.psnr_db = a.psnr_db - b.psnr_db;
  }
  delta.ssim = a.ssim - b.ssim;
  return delta;
}

}  // namespace rgi
