#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rgi/image.hpp"
#include "rgi/metrics.hpp"
#include "rgi/recon.hpp"

namespace rgi {

enum class Method { RandomGi, RandomRgi, PcaGi, PcaRgi };

std::string_view to_string(Method method) noexcept;
Method method_from_string(std::string_view name);

struct ExperimentConfig {
  std::filesystem::path object;
  std::size_t frame_height = 32;
  std::size_t frame_width = 32;
  std::optional<Roi> roi;  ///< defaults to a centered half-size rectangle
  std::size_t rings = 6;
  std::size_t sectors = 16;
  std::filesystem::path dataset;
  std::optional<std::size_t> dataset_limit;
  std::vector<std::size_t> counts = {102, 205, 307, 410, 512, 1024};
  std::vector<double> noise_dbw;  ///< empty means noiseless
  std::vector<Method> methods = {Method::RandomGi, Method::RandomRgi, Method::PcaGi,
                                 Method::PcaRgi};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  TvConfig tv;
  unsigned bit = 0;
  bool baseline_correlation = false;
  std::filesystem::path out = "out";
  std::size_t workers = 0;  ///< 0 picks the hardware concurrency

  Roi effective_roi() const;
  bool needs_dataset() const;
  void validate() const;
};

/// Parses the JSON config document. Relative paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config echo written into reports. Omits the output directory and worker
/// count, which do not affect results.
nlohmann::json config_to_json(const ExperimentConfig& config);

struct CellResult {
  Method method = Method::RandomGi;
  std::size_t count = 0;
  std::optional<double> noise_dbw;
  std::uint64_t seed = 0;
  QualityReport overall;
  QualityReport fovea;
  std::size_t iterations_used = 0;
  double final_residual = 0.0;
  std::optional<QualityReport> correlation_overall;
  std::optional<QualityReport> correlation_fovea;
  std::string image_file;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;  ///< method, count, noise, seed order
};

/// Runs every (method, count, noise, seed) cell and writes report.json,
/// table.csv and one recon_<method>_<count>_<power>_<seed>.pgm per cell
/// into config.out. On failure a FAILED marker holding the error is left
/// in config.out and the error is rethrown with its stage name.
ExperimentReport run_pipeline(const ExperimentConfig& config);

/// run_pipeline over a non-empty noise list, additionally writing curves.csv.
ExperimentReport run_sweep(const ExperimentConfig& config);

nlohmann::json report_to_json(const ExperimentReport& report);
std::string table_csv(const ExperimentReport& report);
std::string curves_csv(const ExperimentReport& report);

/// File-name token of a noise power: "none", "-30", "-12.5", ...
std::string power_token(const std::optional<double>& noise_dbw);

}  // namespace rgi
