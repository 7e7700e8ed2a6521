#include "rgi/pca.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "rgi/error.hpp"
#include "rgi/image.hpp"

namespace rgi {

namespace {

constexpr double kConstantColumnStd = 1e-12;
constexpr Eigen::Index kCovarianceBlockRows = 256;
constexpr double kSymmetryTolerance = 1e-10;

Eigen::MatrixXd tree_sum(std::vector<Eigen::MatrixXd>& parts) {
  while (parts.size() > 1) {
    std::vector<Eigen::MatrixXd> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      next.push_back(parts[i] + parts[i + 1]);
    }
    if (parts.size() % 2 == 1) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

}  // namespace

TrainingMatrix load_dataset(const std::filesystem::path& dir, std::size_t height,
                            std::size_t width, std::optional<std::size_t> limit) {
  require(height >= 1 && width >= 1, "dataset image size must be positive");
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    fail(ErrorKind::Dataset, "dataset directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  const std::size_t max_rows = limit.value_or(files.size());
  std::vector<std::vector<double>> images;
  for (const auto& file : files) {
    if (images.size() >= max_rows) break;
    try {
      const Image image = load_image(file, height, width);
      images.emplace_back(image.values().begin(), image.values().end());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Decode) throw;
    }
  }
  if (images.size() < 2) {
    fail(ErrorKind::Dataset, "dataset " + dir.string() + " has fewer than 2 usable images");
  }

  TrainingMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(images.size()),
                                     static_cast<Eigen::Index>(height * width)),
                     height, width};
  for (std::size_t m = 0; m < images.size(); ++m) {
    out.rows.row(static_cast<Eigen::Index>(m)) =
        Eigen::Map<const Eigen::RowVectorXd>(images[m].data(), out.rows.cols());
  }
  return out;
}

Standardized standardize(const Eigen::MatrixXd& x) {
  require(x.rows() >= 2, "standardize needs at least two rows");
  const double m = static_cast<double>(x.rows());
  Standardized out;
  out.mean = x.colwise().mean().transpose();
  out.data = x.rowwise() - out.mean.transpose();
  out.scale = (out.data.colwise().squaredNorm() / (m - 1.0)).cwiseSqrt().transpose();
  for (Eigen::Index n = 0; n < x.cols(); ++n) {
    if (out.scale(n) < kConstantColumnStd) {
      out.scale(n) = 1.0;
      out.data.col(n).setZero();
    } else {
      out.data.col(n) /= out.scale(n);
    }
  }
  return out;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& standardized) {
  require(standardized.rows() >= 2, "covariance needs at least two rows");
  std::vector<Eigen::MatrixXd> partials;
  for (Eigen::Index start = 0; start < standardized.rows(); start += kCovarianceBlockRows) {
    const Eigen::Index rows = std::min(kCovarianceBlockRows, standardized.rows() - start);
    const auto block = standardized.middleRows(start, rows);
    partials.push_back(block.transpose() * block);
  }
  Eigen::MatrixXd sigma = tree_sum(partials) / static_cast<double>(standardized.rows() - 1);
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  return sigma;
}

EigenSystem eigendecompose_sorted(const Eigen::MatrixXd& sigma) {
  require(sigma.rows() == sigma.cols() && sigma.rows() >= 1, "matrix must be square");
  require((sigma - sigma.transpose()).cwiseAbs().maxCoeff() < kSymmetryTolerance,
          "matrix is not symmetric");

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  if (solver.info() != Eigen::Success) fail(ErrorKind::State, "eigendecomposition did not converge");

  // Eigen returns ascending eigenvalues with eigenvectors as columns.
  const Eigen::Index n = sigma.rows();
  EigenSystem out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;
    out.eigenvalues(k) = solver.eigenvalues()(src);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
    }
    if (v(pivot) < 0.0) v = -v;
    out.components.row(k) = v.transpose();
  }
  return out;
}

PcaModel train_pca(const TrainingMatrix& training) {
  require(training.rows.cols() == static_cast<Eigen::Index>(training.height * training.width),
          "training matrix width does not match image size");
  const Standardized standardized = standardize(training.rows);
  EigenSystem system = eigendecompose_sorted(covariance(standardized.data));
  return PcaModel{training.height,
                  training.width,
                  static_cast<std::size_t>(training.rows.rows()),
                  standardized.mean,
                  standardized.scale,
                  std::move(system.eigenvalues),
                  std::move(system.components)};
}

std::vector<double> extract_positive(std::span<const double> pattern) {
  std::vector<double> out(pattern.size());
  std::transform(pattern.begin(), pattern.end(), out.begin(),
                 [](double v) { return std::max(v, 0.0); });
  return out;
}

std::vector<std::uint8_t> quantize_bitplane(std::span<const double> pattern, unsigned bit) {
  require(bit <= 7, "bit-plane index must be in [0, 7]");
  const auto unit = minmax_normalize(pattern);
  std::vector<std::uint8_t> out(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const auto level = static_cast<unsigned>(std::floor(unit[i] * 255.0 + 0.5));
    out[i] = static_cast<std::uint8_t>((level >> bit) & 1u);
  }
  return out;
}

PatternStack gen_pca_stack(const PcaModel& model, std::size_t count, unsigned bit,
                           const RngSpec& rng) {
  const std::size_t n = model.dimension();
  require(model.height * model.width == n && n >= 1,
          "model pattern size does not match its dimension");
  require(static_cast<std::size_t>(model.components.rows()) == n &&
              static_cast<std::size_t>(model.components.cols()) == n,
          "model components have the wrong shape");
  require(bit <= 7, "bit-plane index must be in [0, 7]");

  PatternStack stack(count, model.height, model.width);
  std::vector<double> component(n);
  for (std::size_t t = 0; t < count; ++t) {
    auto pattern = stack.pattern(t);
    if (t < n) {
      for (std::size_t i = 0; i < n; ++i) {
        component[i] = model.components(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
      }
      const auto binary = quantize_bitplane(extract_positive(component), bit);
      std::copy(binary.begin(), binary.end(), pattern.begin());
    } else {
      RandomStream stream(rng.substream(t));
      for (auto& b : pattern) b = stream.next_bit() ? 1 : 0;
    }
  }
  return stack;
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& header) {
  auto path = header;
  path.replace_extension(".bin");
  return path;
}

void append_le(std::vector<char>& out, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    auto bits = std::bit_cast<std::uint64_t>(data[i]);
    for (int b = 0; b < 8; ++b) {
      out.push_back(static_cast<char>(bits & 0xFF));
      bits >>= 8;
    }
  }
}

void read_le(const std::vector<char>& in, std::size_t& offset, double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= std::uint64_t{static_cast<unsigned char>(in[offset + b])} << (8 * b);
    }
    data[i] = std::bit_cast<double>(bits);
    offset += 8;
  }
}

}  // namespace

void save_pca_model(const PcaModel& model, const std::filesystem::path& path) {
  const std::size_t n = model.dimension();
  const auto sidecar = sidecar_path(path);
  const nlohmann::json header = {
      {"format", "rgi-pca"},
      {"version", 1},
      {"N", n},
      {"height", model.height},
      {"width", model.width},
      {"samples", model.samples},
      {"scaling", "zscore-sample-std"},
      {"layout", {"mean", "scale", "eigenvalues", "components"}},
      {"dtype", "float64-le"},
      {"data_file", sidecar.filename().string()},
  };
  std::ofstream json_out(path);
  if (!json_out) fail(ErrorKind::Io, "cannot write " + path.string());
  json_out << header.dump(2) << '\n';

  std::vector<char> bytes;
  bytes.reserve((3 * n + n * n) * 8);
  append_le(bytes, model.mean.data(), n);
  append_le(bytes, model.scale.data(), n);
  append_le(bytes, model.eigenvalues.data(), n);
  // Components stored row-major: row k is principal component k.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows =
      model.components;
  append_le(bytes, rows.data(), n * n);
  std::ofstream bin_out(sidecar, std::ios::binary);
  if (!bin_out) fail(ErrorKind::Io, "cannot write " + sidecar.string());
  bin_out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!bin_out) fail(ErrorKind::Io, "failed writing " + sidecar.string());
}

PcaModel load_pca_model(const std::filesystem::path& path) {
  std::ifstream json_in(path);
  if (!json_in) fail(ErrorKind::Io, "cannot open " + path.string());
  nlohmann::json header;
  PcaModel model;
  std::filesystem::path sidecar;
  try {
    header = nlohmann::json::parse(json_in);
    if (header.at("format") != "rgi-pca" || header.at("version") != 1) {
      fail(ErrorKind::Format, path.string() + ": not an rgi-pca v1 header");
    }
    model.height = header.at("height").get<std::size_t>();
    model.width = header.at("width").get<std::size_t>();
    model.samples = header.at("samples").get<std::size_t>();
    sidecar = path.parent_path() / header.at("data_file").get<std::string>();
    if (header.at("N").get<std::size_t>() != model.height * model.width) {
      fail(ErrorKind::Format, path.string() + ": N does not match height x width");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, path.string() + ": " + e.what());
  }

  const std::size_t n = model.height * model.width;
  std::ifstream bin_in(sidecar, std::ios::binary);
  if (!bin_in) fail(ErrorKind::Io, "cannot open " + sidecar.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(bin_in)),
                                std::istreambuf_iterator<char>());
  if (bytes.size() != (3 * n + n * n) * 8) {
    fail(ErrorKind::Format, sidecar.string() + ": unexpected payload size");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  model.mean.resize(dim);
  model.scale.resize(dim);
  model.eigenvalues.resize(dim);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(dim, dim);
  std::size_t offset = 0;
  read_le(bytes, offset, model.mean.data(), n);
  read_le(bytes, offset, model.scale.data(), n);
  read_le(bytes, offset, model.eigenvalues.data(), n);
  read_le(bytes, offset, rows.data(), n * n);
  model.components = rows;
  return model;
}

}  // namespace rgi
