#include "rgi/recon.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "rgi/error.hpp"

namespace rgi {

std::string_view to_string(Boundary boundary) noexcept {
  switch (boundary) {
    case Boundary::Replicate:
      return "replicate";
    case Boundary::Periodic:
      return "periodic";
  }
  return "unknown";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "replicate" || name == "neumann") return Boundary::Replicate;
  if (name == "periodic") return Boundary::Periodic;
  fail(ErrorKind::Argument, "unknown boundary rule '" + std::string(name) + "'");
}

void TvConfig::validate() const {
  require(tv_weight > 0.0 && std::isfinite(tv_weight), "tv_weight must be positive");
  require(penalty > 0.0 && std::isfinite(penalty), "penalty must be positive");
  require(max_iters >= 1, "max_iters must be at least 1");
  require(rel_tol > 0.0, "rel_tol must be positive");
}

std::vector<double> gradient(std::span<const double> image, std::size_t height,
                             std::size_t width, Boundary boundary) {
  const std::size_t n = height * width;
  require(image.size() == n, "gradient input size mismatch");
  const bool wrap = boundary == Boundary::Periodic;
  std::vector<double> out(2 * n, 0.0);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t i = r * width + c;
      if (c + 1 < width) {
        out[i] = image[i + 1] - image[i];
      } else if (wrap) {
        out[i] = image[r * width] - image[i];
      }
      if (r + 1 < height) {
        out[n + i] = image[i + width] - image[i];
      } else if (wrap) {
        out[n + i] = image[c] - image[i];
      }
    }
  }
  return out;
}

std::vector<double> gradient_adjoint(std::span<const double> coefficients, std::size_t height,
                                     std::size_t width, Boundary boundary) {
  const std::size_t n = height * width;
  require(coefficients.size() == 2 * n, "gradient adjoint input size mismatch");
  const bool wrap = boundary == Boundary::Periodic;
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t i = r * width + c;
      const double h = coefficients[i];
      const double v = coefficients[n + i];
      if (c + 1 < width) {
        out[i + 1] += h;
        out[i] -= h;
      } else if (wrap) {
        out[r * width] += h;
        out[i] -= h;
      }
      if (r + 1 < height) {
        out[i + width] += v;
        out[i] -= v;
      } else if (wrap) {
        out[c] += v;
        out[i] -= v;
      }
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd pattern_matrix(const PatternStack& stack) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(stack.count()),
                    static_cast<Eigen::Index>(stack.pixels()));
  for (std::size_t t = 0; t < stack.count(); ++t) {
    const auto pattern = stack.pattern(t);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      a(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = pattern[i];
    }
  }
  return a;
}

double relative_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double misfit = (a * x - b).norm();
  const double scale = b.norm();
  return scale > 0.0 ? misfit / scale : misfit;
}

// Dense G^T G for the configured boundary, built column by column.
Eigen::MatrixXd gradient_gram(std::size_t height, std::size_t width, Boundary boundary) {
  const std::size_t n = height * width;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
  std::vector<double> unit(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    const auto column = gradient_adjoint(gradient(unit, height, width, boundary), height, width,
                                         boundary);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = column[i];
    }
  }
  return gram;
}

ReconResult finish(const PatternStack& stack, std::vector<double> raw, std::size_t iterations,
                   double final_residual, double initial_residual) {
  auto normalized = minmax_normalize(raw);
  return ReconResult{Image(stack.height(), stack.width(), std::move(normalized)), std::move(raw),
                     iterations, final_residual, initial_residual};
}

void check_inputs(const PatternStack& stack, const MeasurementRecord& record) {
  require(stack.count() == record.count(), "pattern count and measurement count differ");
  for (double v : record.intensities) require(std::isfinite(v), "measurements must be finite");
}

}  // namespace

ReconResult reconstruct_correlation(const PatternStack& stack, const MeasurementRecord& record) {
  check_inputs(stack, record);
  require(stack.count() >= 2, "correlation reconstruction needs at least two measurements");

  const std::size_t count = stack.count();
  const std::size_t n = stack.pixels();
  const double inv_t = 1.0 / static_cast<double>(count);
  double mean_intensity = 0.0;
  for (double v : record.intensities) mean_intensity += v;
  mean_intensity *= inv_t;

  // Sum of (I_t - <I>) S_t equals T (<I S> - <I><S>) and avoids cancellation.
  std::vector<double> raw(n, 0.0);
  for (std::size_t t = 0; t < count; ++t) {
    const double weight = record.intensities[t] - mean_intensity;
    const auto pattern = stack.pattern(t);
    for (std::size_t i = 0; i < n; ++i) {
      if (pattern[i]) raw[i] += weight;
    }
  }
  for (double& v : raw) v *= inv_t;

  const Eigen::MatrixXd a = pattern_matrix(stack);
  const Eigen::Map<const Eigen::VectorXd> b(record.intensities.data(),
                                            static_cast<Eigen::Index>(count));
  const Eigen::Map<const Eigen::VectorXd> x(raw.data(), static_cast<Eigen::Index>(n));
  const double residual = relative_residual(a, x, b);
  return finish(stack, std::move(raw), 1, residual, residual);
}

ReconResult reconstruct_tv(const PatternStack& stack, const MeasurementRecord& record,
                           const TvConfig& config) {
  config.validate();
  check_inputs(stack, record);
  require(stack.count() >= 1, "TV reconstruction needs at least one measurement");

  const std::size_t height = stack.height();
  const std::size_t width = stack.width();
  const auto n = static_cast<Eigen::Index>(stack.pixels());
  const auto count = static_cast<Eigen::Index>(stack.count());

  const Eigen::MatrixXd a = pattern_matrix(stack);
  const Eigen::Map<const Eigen::VectorXd> b(record.intensities.data(), count);

  const Eigen::RowVectorXd mean_row = a.colwise().mean();
  const double mean_b = b.mean();
  const Eigen::MatrixXd centered = a.rowwise() - mean_row;
  Eigen::VectorXd centered_b = b.array() - mean_b;

  double scale = centered_b.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) scale = std::abs(mean_b);
  if (!(scale > 0.0)) scale = 1.0;
  centered_b /= scale;
  const double scaled_mean_b = mean_b / scale;

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  normal.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  normal.selfadjointView<Eigen::Lower>().rankUpdate(mean_row.transpose());
  normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose();
  const Eigen::VectorXd data_rhs =
      centered.transpose() * centered_b + mean_row.transpose() * scaled_mean_b;

  const double rho = config.penalty;
  Eigen::MatrixXd system = normal + rho * gradient_gram(height, width, config.boundary);
  const double ridge = 1e-12 * std::max(1.0, system.diagonal().mean());
  system.diagonal().array() += ridge;
  const Eigen::LLT<Eigen::MatrixXd> factor(system);
  if (factor.info() != Eigen::Success) fail(ErrorKind::State, "TV normal matrix is not positive definite");

  const double threshold = config.tv_weight / rho;
  std::vector<double> split(2 * static_cast<std::size_t>(n), 0.0);
  std::vector<double> dual(split.size(), 0.0);
  std::vector<double> target(split.size(), 0.0);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd previous = x;
  double initial_residual = 0.0;
  std::size_t iteration = 0;

  while (iteration < config.max_iters) {
    ++iteration;
    for (std::size_t k = 0; k < split.size(); ++k) target[k] = split[k] - dual[k];
    const auto pull = gradient_adjoint(target, height, width, config.boundary);
    const Eigen::Map<const Eigen::VectorXd> pull_vec(pull.data(), n);
    previous = x;
    x = factor.solve(data_rhs + rho * pull_vec);

    const auto grad = gradient(std::span<const double>(x.data(), static_cast<std::size_t>(n)),
                               height, width, config.boundary);
    for (std::size_t k = 0; k < split.size(); ++k) {
      const double v = grad[k] + dual[k];
      split[k] = std::copysign(std::max(std::abs(v) - threshold, 0.0), v);
      dual[k] += grad[k] - split[k];
    }

    if (iteration == 1) initial_residual = relative_residual(a, x * scale, b);
    const double change = (x - previous).norm();
    const double magnitude = x.norm();
    if (iteration > 1 && change <= config.rel_tol * std::max(magnitude, 1e-300)) break;
    if (magnitude == 0.0 && change == 0.0) break;
  }

  const Eigen::VectorXd solution = x * scale;
  const double final_residual = relative_residual(a, solution, b);
  return finish(stack, std::vector<double>(solution.data(), solution.data() + n), iteration,
                final_residual, initial_residual);
}

}  // namespace rgi
