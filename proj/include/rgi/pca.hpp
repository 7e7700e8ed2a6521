#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rgi/pattern_stack.hpp"
#include "rgi/rng.hpp"

namespace rgi {

/// M vectorized training images, one per row (M >= 2).
struct TrainingMatrix {
  Eigen::MatrixXd rows;
  std::size_t height = 0;
  std::size_t width = 0;
};

/// Loads every decodable image in `dir` (lexicographic order, at most `limit`)
/// at h x w and stacks them row-wise. Throws DatasetError when fewer than two
/// images are usable.
TrainingMatrix load_dataset(const std::filesystem::path& dir, std::size_t height,
                            std::size_t width, std::optional<std::size_t> limit = std::nullopt);

struct Standardized {
  Eigen::MatrixXd data;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

/// Column z-scores with the sample standard deviation (divisor M-1). Columns
/// whose deviation is below 1e-12 keep scale 1 and become all zeros.
Standardized standardize(const Eigen::MatrixXd& x);

/// (1/(M-1)) X^T X, accumulated over fixed 256-row blocks and summed as a
/// pairwise tree in row order. The result is exactly symmetric.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& standardized);

struct EigenSystem {
  Eigen::VectorXd eigenvalues;  ///< nonincreasing
  Eigen::MatrixXd components;   ///< row k is the eigenvector of eigenvalues[k]
};

/// Symmetric eigendecomposition, sorted by descending eigenvalue. Each
/// eigenvector is signed so its largest-magnitude entry (lowest index on
/// ties) is positive.
EigenSystem eigendecompose_sorted(const Eigen::MatrixXd& sigma);

struct PcaModel {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t samples = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd components;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

PcaModel train_pca(const TrainingMatrix& training);

std::vector<double> extract_positive(std::span<const double> pattern);

/// Min-max normalizes to [0,1] (constant input -> zeros), quantizes to 0..255
/// rounding half up, and returns bit-plane `bit` of the result.
std::vector<std::uint8_t> quantize_bitplane(std::span<const double> pattern, unsigned bit);

/// Pattern t < N is the binarized positive part of component t; the rest are
/// fair random bits from rng.substream(t).
PatternStack gen_pca_stack(const PcaModel& model, std::size_t count, unsigned bit,
                           const RngSpec& rng);

/// JSON header at `path` plus a little-endian float64 sidecar holding mean,
/// scale, eigenvalues and components in that order.
void save_pca_model(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_pca_model(const std::filesystem::path& path);

}  // namespace rgi
