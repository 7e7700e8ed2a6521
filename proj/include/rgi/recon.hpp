#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgi/forward.hpp"
#include "rgi/image.hpp"
#include "rgi/pattern_stack.hpp"

namespace rgi {

/// Edge rule of the forward-difference gradient.
enum class Boundary {
  Replicate,  ///< last row/column difference is zero (Neumann)
  Periodic,   ///< wraps around
};

std::string_view to_string(Boundary boundary) noexcept;
Boundary boundary_from_string(std::string_view name);

struct TvConfig {
  double tv_weight = 3e-3;
  double penalty = 1.0;
  std::size_t max_iters = 300;
  double rel_tol = 1e-6;
  Boundary boundary = Boundary::Replicate;

  void validate() const;
};

struct ReconResult {
  Image image;              ///< raw min-max normalized to [0, 1]
  std::vector<double> raw;  ///< unnormalized solution, row-major
  std::size_t iterations_used = 0;
  double final_residual = 0.0;    ///< ||S O - I|| / ||I|| at the returned iterate
  double initial_residual = 0.0;  ///< same quantity after the first iteration
};

/// Anisotropic forward differences. Output holds the N horizontal
/// coefficients followed by the N vertical ones.
std::vector<double> gradient(std::span<const double> image, std::size_t height,
                             std::size_t width, Boundary boundary);

/// Transpose of gradient().
std::vector<double> gradient_adjoint(std::span<const double> coefficients, std::size_t height,
                                     std::size_t width, Boundary boundary);

/// Second-order correlation <I S> - <I><S> over the pattern index.
ReconResult reconstruct_correlation(const PatternStack& stack, const MeasurementRecord& record);

/// Minimizes tv_weight * ||G O||_1 + 1/2 ||S O - I||^2 by variable splitting
/// (c = G O) with an augmented Lagrangian, soft-thresholding c each sweep.
///
/// Patterns and measurements are centered over the pattern index and the
/// measurements scaled so max |I - <I>| = 1; the discarded mean equation is
/// kept at unit weight so the image offset remains determined. The O-update
/// is a direct Cholesky solve of the fixed normal matrix.
ReconResult reconstruct_tv(const PatternStack& stack, const MeasurementRecord& record,
                           const TvConfig& config = {});

}  // namespace rgi
