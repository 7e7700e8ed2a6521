#include "rgi/forward.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rgi/error.hpp"

namespace rgi {

double NoiseSpec::variance() const {
  require(std::isfinite(power_dbw), "noise power must be finite");
  return std::pow(10.0, power_dbw / 10.0);
}

MeasurementRecord measure(const PatternStack& stack, const Image& object) {
  require(stack.height() == object.height() && stack.width() == object.width(),
          "pattern and object dimensions differ");
  const auto pixels = object.values();
  MeasurementRecord record;
  record.intensities.resize(stack.count());
  for (std::size_t t = 0; t < stack.count(); ++t) {
    const auto pattern = stack.pattern(t);
    double sum = 0.0;
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      if (pattern[i]) sum += pixels[i];
    }
    record.intensities[t] = sum;
  }
  return record;
}

MeasurementRecord add_wgn(const MeasurementRecord& record, const NoiseSpec& noise) {
  if (record.noise_power_dbw) fail(ErrorKind::State, "measurements already carry noise");
  const double sigma = std::sqrt(noise.variance());
  MeasurementRecord out = record;
  for (std::size_t t = 0; t < out.count(); ++t) {
    RandomStream stream(noise.rng.substream(t));
    out.intensities[t] += sigma * stream.next_normal();
  }
  out.noise_power_dbw = noise.power_dbw;
  out.rng_seed = noise.rng.seed;
  return out;
}

namespace {

std::filesystem::path sidecar_for(const std::filesystem::path& csv_path) {
  auto path = csv_path;
  path += ".json";
  return path;
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

}  // namespace

void save_measurements(const MeasurementRecord& record, const std::filesystem::path& csv_path) {
  std::ofstream csv(csv_path);
  if (!csv) fail(ErrorKind::Io, "cannot write " + csv_path.string());
  csv << "t,intensity\n";
  for (std::size_t t = 0; t < record.count(); ++t) {
    csv << t << ',' << format_double(record.intensities[t]) << '\n';
  }
  if (!csv) fail(ErrorKind::Io, "failed writing " + csv_path.string());

  nlohmann::json meta = {{"count", record.count()}, {"noise_power_dbw", nullptr}, {"rng_seed", nullptr}};
  if (record.noise_power_dbw) meta["noise_power_dbw"] = *record.noise_power_dbw;
  if (record.rng_seed) meta["rng_seed"] = *record.rng_seed;
  std::ofstream sidecar(sidecar_for(csv_path));
  if (!sidecar) fail(ErrorKind::Io, "cannot write " + sidecar_for(csv_path).string());
  sidecar << meta.dump(2) << '\n';
}

MeasurementRecord load_measurements(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) fail(ErrorKind::Io, "cannot open " + csv_path.string());
  std::string line;
  if (!std::getline(csv, line) || line != "t,intensity") {
    fail(ErrorKind::Format, csv_path.string() + ": expected header 't,intensity'");
  }
  MeasurementRecord record;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Format, csv_path.string() + ": bad row");
    std::size_t index = 0;
    double value = 0.0;
    const char* begin = line.data();
    const char* end = line.data() + line.size();
    const auto idx = std::from_chars(begin, begin + comma, index);
    const auto val = std::from_chars(begin + comma + 1, end, value);
    if (idx.ec != std::errc() || val.ec != std::errc() || val.ptr != end ||
        index != record.intensities.size()) {
      fail(ErrorKind::Format, csv_path.string() + ": bad row '" + line + "'");
    }
    record.intensities.push_back(value);
  }

  const auto meta_path = sidecar_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream in(meta_path);
    try {
      const auto meta = nlohmann::json::parse(in);
      if (!meta.at("noise_power_dbw").is_null()) {
        record.noise_power_dbw = meta.at("noise_power_dbw").get<double>();
      }
      if (!meta.at("rng_seed").is_null()) record.rng_seed = meta.at("rng_seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, meta_path.string() + ": " + e.what());
    }
  }
  return record;
}

}  // namespace rgi
