#include "rgi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "rgi/error.hpp"
#include "rgi/forward.hpp"
#include "rgi/pca.hpp"
#include "rgi/retina.hpp"

namespace rgi {

using nlohmann::json;

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::RandomGi: return "random-gi";
    case Method::RandomRgi: return "random-rgi";
    case Method::PcaGi: return "pca-gi";
    case Method::PcaRgi: return "pca-rgi";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::RandomGi, Method::RandomRgi, Method::PcaGi, Method::PcaRgi}) {
    if (to_string(m) == name) return m;
  }
  fail(ErrorKind::Argument, "unknown method '" + std::string(name) + "'");
}

Roi ExperimentConfig::effective_roi() const {
  if (roi) return *roi;
  return centered_roi(frame_height, frame_width, std::max<std::size_t>(1, frame_height / 2),
                      std::max<std::size_t>(1, frame_width / 2));
}

bool ExperimentConfig::needs_dataset() const {
  return std::any_of(methods.begin(), methods.end(),
                     [](Method m) { return m == Method::PcaGi || m == Method::PcaRgi; });
}

void ExperimentConfig::validate() const {
  require(frame_height >= 1 && frame_width >= 1, "frame dimensions must be positive");
  validate_roi(effective_roi(), frame_height, frame_width);
  require(rings >= 1 && sectors >= 1, "rings and sectors must be positive");
  require(!methods.empty(), "methods list must not be empty");
  require(!counts.empty(), "measurement counts must not be empty");
  require(!seeds.empty(), "seeds list must not be empty");
  const std::size_t bound = 2 * frame_height * frame_width;
  for (std::size_t t : counts) {
    require(t >= 1 && t <= bound, "measurement count " + std::to_string(t) +
                                      " outside [1, " + std::to_string(bound) + "]");
  }
  for (double p : noise_dbw) require(std::isfinite(p), "noise power must be finite");
  require(bit <= 7, "bit index must be in 0..7");
  require(!object.empty(), "object image path is required");
  if (needs_dataset()) require(!dataset.empty(), "PCA methods require a dataset directory");
  if (dataset_limit) require(*dataset_limit >= 2, "dataset limit must be at least 2");
  tv.validate();
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) fail(ErrorKind::Format, "config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (doc.contains("object")) cfg.object = resolve(base_dir, doc.at("object").get<std::string>());
    if (auto it = doc.find("frame"); it != doc.end()) {
      cfg.frame_height = it->at("height").get<std::size_t>();
      cfg.frame_width = it->at("width").get<std::size_t>();
    }
    if (auto it = doc.find("roi"); it != doc.end() && !it->is_null()) {
      cfg.roi = Roi{it->at("top").get<std::size_t>(), it->at("left").get<std::size_t>(),
                    it->at("height").get<std::size_t>(), it->at("width").get<std::size_t>()};
    }
    cfg.rings = get_or(doc, "rings", cfg.rings);
    cfg.sectors = get_or(doc, "sectors", cfg.sectors);
    if (auto it = doc.find("dataset"); it != doc.end() && !it->is_null()) {
      if (it->is_string()) {
        cfg.dataset = resolve(base_dir, it->get<std::string>());
      } else {
        cfg.dataset = resolve(base_dir, it->at("dir").get<std::string>());
        if (auto lim = it->find("limit"); lim != it->end() && !lim->is_null()) {
          cfg.dataset_limit = lim->get<std::size_t>();
        }
      }
    }
    cfg.counts = get_or(doc, "counts", cfg.counts);
    cfg.noise_dbw = get_or(doc, "noise_dbw", cfg.noise_dbw);
    if (auto it = doc.find("methods"); it != doc.end()) {
      cfg.methods.clear();
      for (const auto& m : *it) cfg.methods.push_back(method_from_string(m.get<std::string>()));
    }
    cfg.seeds = get_or(doc, "seeds", cfg.seeds);
    if (auto it = doc.find("tv"); it != doc.end()) {
      cfg.tv.tv_weight = get_or(*it, "tv_weight", cfg.tv.tv_weight);
      cfg.tv.penalty = get_or(*it, "penalty", cfg.tv.penalty);
      cfg.tv.max_iters = get_or(*it, "max_iters", cfg.tv.max_iters);
      cfg.tv.rel_tol = get_or(*it, "rel_tol", cfg.tv.rel_tol);
      if (it->contains("boundary")) {
        cfg.tv.boundary = boundary_from_string(it->at("boundary").get<std::string>());
      }
    }
    cfg.bit = get_or(doc, "bit", cfg.bit);
    cfg.baseline_correlation = get_or(doc, "baseline_correlation", cfg.baseline_correlation);
    if (doc.contains("out")) cfg.out = resolve(base_dir, doc.at("out").get<std::string>());
    cfg.workers = get_or(doc, "workers", cfg.workers);
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, std::string("bad config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::Format, "config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json config_to_json(const ExperimentConfig& cfg) {
  const Roi roi = cfg.effective_roi();
  json methods = json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  json doc = {
      {"object", cfg.object.generic_string()},
      {"frame", {{"height", cfg.frame_height}, {"width", cfg.frame_width}}},
      {"roi", {{"top", roi.top}, {"left", roi.left}, {"height", roi.height}, {"width", roi.width}}},
      {"rings", cfg.rings},
      {"sectors", cfg.sectors},
      {"counts", cfg.counts},
      {"noise_dbw", cfg.noise_dbw.empty() ? json(nullptr) : json(cfg.noise_dbw)},
      {"methods", methods},
      {"seeds", cfg.seeds},
      {"tv",
       {{"tv_weight", cfg.tv.tv_weight},
        {"penalty", cfg.tv.penalty},
        {"max_iters", cfg.tv.max_iters},
        {"rel_tol", cfg.tv.rel_tol},
        {"boundary", std::string(to_string(cfg.tv.boundary))}}},
      {"bit", cfg.bit},
      {"baseline_correlation", cfg.baseline_correlation},
      {"rng", std::string(RngSpec::kAlgorithm)},
  };
  if (cfg.dataset.empty()) {
    doc["dataset"] = nullptr;
  } else {
    doc["dataset"] = {{"dir", cfg.dataset.generic_string()},
                      {"limit", cfg.dataset_limit ? json(*cfg.dataset_limit) : json(nullptr)}};
  }
  return doc;
}

std::string power_token(const std::optional<double>& noise_dbw) {
  if (!noise_dbw) return "none";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, *noise_dbw);
  return std::string(buf, res.ptr);
}

namespace {

// Attaches the stage name to any library error raised inside `body`.
template <typename F>
auto in_stage(std::string_view stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    fail(e.kind(), "stage " + std::string(stage) + ": " + e.what());
  }
}

struct CellKey {
  Method method;
  std::size_t count;
  std::optional<double> noise;
  std::uint64_t seed;
};

std::vector<CellKey> enumerate_cells(const ExperimentConfig& cfg) {
  std::vector<std::optional<double>> powers;
  if (cfg.noise_dbw.empty()) {
    powers.emplace_back();
  } else {
    powers.assign(cfg.noise_dbw.begin(), cfg.noise_dbw.end());
  }
  std::vector<CellKey> keys;
  for (Method m : cfg.methods)
    for (std::size_t t : cfg.counts)
      for (const auto& p : powers)
        for (std::uint64_t s : cfg.seeds) keys.push_back({m, t, p, s});
  return keys;
}

std::string cell_stem(const CellKey& key) {
  return std::string(to_string(key.method)) + "_" + std::to_string(key.count) + "_" +
         power_token(key.noise) + "_" + std::to_string(key.seed);
}

struct Shared {
  const ExperimentConfig& cfg;
  Roi roi;
  Image object;
  std::optional<RetinaGeometry> geometry;
  std::optional<PcaModel> frame_model;
  std::optional<PcaModel> roi_model;
};

PatternStack build_stack(const Shared& sh, Method method, std::size_t count, const RngSpec& rng) {
  const ExperimentConfig& cfg = sh.cfg;
  switch (method) {
    case Method::RandomGi:
      return gen_random_stack(count, cfg.frame_height, cfg.frame_width,
                              rng.substream("random-gi"));
    case Method::PcaGi:
      return gen_pca_stack(*sh.frame_model, count, cfg.bit, rng.substream("pca-gi"));
    case Method::RandomRgi:
      return compose_retina_stack(
          *sh.geometry,
          gen_random_stack(count, sh.roi.height, sh.roi.width, rng.substream("roi")),
          rng.substream("periphery"));
    case Method::PcaRgi:
      return compose_retina_stack(
          *sh.geometry, gen_pca_stack(*sh.roi_model, count, cfg.bit, rng.substream("pca-roi")),
          rng.substream("periphery"));
  }
  fail(ErrorKind::Argument, "unhandled method");
}

CellResult run_cell(const Shared& sh, const CellKey& key) {
  const ExperimentConfig& cfg = sh.cfg;
  const RngSpec rng{key.seed};
  CellResult cell;
  cell.method = key.method;
  cell.count = key.count;
  cell.noise_dbw = key.noise;
  cell.seed = key.seed;

  const PatternStack stack =
      in_stage("patterns", [&] { return build_stack(sh, key.method, key.count, rng); });
  const MeasurementRecord record = in_stage("measure", [&] {
    MeasurementRecord rec = measure(stack, sh.object);
    if (key.noise) rec = add_wgn(rec, NoiseSpec{*key.noise, rng.substream("noise")});
    return rec;
  });
  const ReconResult recon =
      in_stage("reconstruct", [&] { return reconstruct_tv(stack, record, cfg.tv); });
  cell.iterations_used = recon.iterations_used;
  cell.final_residual = recon.final_residual;
  in_stage("evaluate", [&] {
    cell.overall = evaluate(sh.object, recon.image);
    cell.fovea = evaluate(sh.object, recon.image, sh.roi);
  });
  const std::string stem = cell_stem(key);
  cell.image_file = "recon_" + stem + ".pgm";
  in_stage("write", [&] { write_pgm(recon.image, cfg.out / cell.image_file); });

  if (cfg.baseline_correlation) {
    const ReconResult corr =
        in_stage("reconstruct", [&] { return reconstruct_correlation(stack, record); });
    in_stage("evaluate", [&] {
      cell.correlation_overall = evaluate(sh.object, corr.image);
      cell.correlation_fovea = evaluate(sh.object, corr.image, sh.roi);
    });
    in_stage("write", [&] { write_pgm(corr.image, cfg.out / ("corr_" + stem + ".pgm")); });
  }
  return cell;
}

// Runs cells on a bounded pool. Results land in their configured slot, so
// the output order never depends on scheduling.
std::vector<CellResult> run_cells(const Shared& sh, const std::vector<CellKey>& keys) {
  std::vector<CellResult> results(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      try {
        results[i] = run_cell(sh, keys[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = sh.cfg.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, keys.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return results;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
}

json quality_json(const QualityReport& q) {
  json psnr_value = std::isinf(q.psnr_db) ? json("inf") : json(q.psnr_db);
  return {{"psnr_db", psnr_value}, {"ssim", q.ssim}, {"mse", q.mse}};
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

ExperimentReport execute(const ExperimentConfig& cfg, bool sweep) {
  cfg.validate();
  if (sweep) require(!cfg.noise_dbw.empty(), "sweep requires a non-empty noise power list");
  std::filesystem::create_directories(cfg.out);
  const auto marker = cfg.out / "FAILED";
  std::filesystem::remove(marker);

  try {
    const Roi roi = cfg.effective_roi();
    Shared sh{cfg, roi,
              in_stage("object",
                       [&] { return load_image(cfg.object, cfg.frame_height, cfg.frame_width); }),
              {}, {}, {}};
    const bool any_rgi = std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) {
      return m == Method::RandomRgi || m == Method::PcaRgi;
    });
    if (any_rgi) {
      sh.geometry = in_stage("geometry", [&] {
        return build_retina_geometry(cfg.frame_height, cfg.frame_width, roi, cfg.rings,
                                     cfg.sectors);
      });
    }
    for (Method m : cfg.methods) {
      if (m == Method::PcaGi && !sh.frame_model) {
        sh.frame_model = in_stage("pca-train", [&] {
          return train_pca(
              load_dataset(cfg.dataset, cfg.frame_height, cfg.frame_width, cfg.dataset_limit));
        });
      }
      if (m == Method::PcaRgi && !sh.roi_model) {
        sh.roi_model = in_stage("pca-train", [&] {
          return train_pca(load_dataset(cfg.dataset, roi.height, roi.width, cfg.dataset_limit));
        });
      }
    }

    ExperimentReport report{cfg, run_cells(sh, enumerate_cells(cfg))};
    in_stage("report", [&] {
      write_text(cfg.out / "report.json", report_to_json(report).dump(2) + "\n");
      write_text(cfg.out / "table.csv", table_csv(report));
      if (sweep) write_text(cfg.out / "curves.csv", curves_csv(report));
    });
    return report;
  } catch (const std::exception& e) {
    std::ofstream(marker, std::ios::trunc) << e.what() << "\n";
    throw;
  }
}

}  // namespace

json report_to_json(const ExperimentReport& report) {
  json cells = json::array();
  for (const CellResult& c : report.cells) {
    json cell = {
        {"method", std::string(to_string(c.method))},
        {"count", c.count},
        {"noise_dbw", c.noise_dbw ? json(*c.noise_dbw) : json(nullptr)},
        {"seed", c.seed},
        {"overall", quality_json(c.overall)},
        {"fovea", quality_json(c.fovea)},
        {"iterations_used", c.iterations_used},
        {"final_residual", c.final_residual},
        {"image", c.image_file},
    };
    if (c.correlation_overall && c.correlation_fovea) {
      cell["correlation"] = {{"overall", quality_json(*c.correlation_overall)},
                             {"fovea", quality_json(*c.correlation_fovea)}};
    }
    cells.push_back(std::move(cell));
  }
  return {{"config", config_to_json(report.config)}, {"cells", cells}};
}

std::string table_csv(const ExperimentReport& report) {
  const ExperimentConfig& cfg = report.config;
  std::ostringstream out;
  out << "method,region,metric,noise_dbw";
  for (std::size_t t : cfg.counts) out << ',' << t;
  out << '\n';

  std::vector<std::optional<double>> powers;
  if (cfg.noise_dbw.empty()) {
    powers.emplace_back();
  } else {
    powers.assign(cfg.noise_dbw.begin(), cfg.noise_dbw.end());
  }

  for (Method m : cfg.methods) {
    for (const char* region : {"overall", "fovea"}) {
      for (const char* metric : {"psnr", "ssim"}) {
        for (const auto& p : powers) {
          out << to_string(m) << ',' << region << ',' << metric << ',' << power_token(p);
          for (std::size_t t : cfg.counts) {
            double sum = 0.0;
            std::size_t n = 0;
            for (const CellResult& c : report.cells) {
              if (c.method != m || c.count != t || c.noise_dbw != p) continue;
              const QualityReport& q = region[0] == 'o' ? c.overall : c.fovea;
              sum += metric[0] == 'p' ? q.psnr_db : q.ssim;
              ++n;
            }
            out << ',' << format_value(n ? sum / static_cast<double>(n) : 0.0);
          }
          out << '\n';
        }
      }
    }
  }
  return out.str();
}

std::string curves_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,count,noise_dbw,seed,fovea_psnr_db,fovea_ssim\n";
  for (const CellResult& c : report.cells) {
    out << to_string(c.method) << ',' << c.count << ',' << power_token(c.noise_dbw) << ','
        << c.seed << ',' << format_value(c.fovea.psnr_db) << ',' << format_value(c.fovea.ssim)
        << '\n';
  }
  return out.str();
}

ExperimentReport run_pipeline(const ExperimentConfig& config) { return execute(config, false); }

ExperimentReport run_sweep(const ExperimentConfig& config) { return execute(config, true); }

}  // namespace rgi
