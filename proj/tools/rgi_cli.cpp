// Command-line driver over the C interface. Each stage reads and writes
// artifacts on disk so it can be run on its own.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rgi.h"

namespace {

struct Failure {
  rgi_status status;
};

void check(rgi_status status) {
  if (status != RGI_OK) throw Failure{status};
}

// Owns one C handle and frees it with the matching deleter.
template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Image = Handle<rgi_image, rgi_image_free>;
using Stack = Handle<rgi_stack, rgi_stack_free>;
using Geometry = Handle<rgi_geometry, rgi_geometry_free>;
using Model = Handle<rgi_pca_model, rgi_pca_free>;
using Records = Handle<rgi_measurements, rgi_measurements_free>;

std::optional<rgi_roi> parse_roi(const std::vector<std::size_t>& values) {
  if (values.empty()) return std::nullopt;
  if (values.size() != 4) throw CLI::ValidationError("--roi", "expects top,left,height,width");
  return rgi_roi{values[0], values[1], values[2], values[3]};
}

rgi_roi roi_or_centered(const std::vector<std::size_t>& values, std::size_t h, std::size_t w) {
  if (auto roi = parse_roi(values)) return *roi;
  const std::size_t rh = std::max<std::size_t>(1, h / 2);
  const std::size_t rw = std::max<std::size_t>(1, w / 2);
  return rgi_roi{(h - rh) / 2, (w - rw) / 2, rh, rw};
}

std::string quality_json(const rgi_quality& q) {
  nlohmann::json doc = {{"psnr_db", std::isinf(q.psnr_db) ? nlohmann::json("inf")
                                                           : nlohmann::json(q.psnr_db)},
                        {"ssim", q.ssim},
                        {"mse", q.mse}};
  return doc.dump();
}

struct PatternArgs {
  std::string method = "random-gi";
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::size_t height = 32;
  std::size_t width = 32;
  std::vector<std::size_t> roi;
  std::size_t rings = 6;
  std::size_t sectors = 16;
  unsigned bit = 0;
  std::string model;
  std::string out;
  std::string geometry_out;
};

// Builds the stack the pipeline would use for (method, count, seed).
void gen_patterns(const PatternArgs& a) {
  const rgi_roi roi = roi_or_centered(a.roi, a.height, a.width);
  Stack stack;
  if (a.method == "random-gi") {
    check(rgi_stack_random(a.count, a.height, a.width, a.seed, "random-gi", stack.out()));
  } else if (a.method == "pca-gi") {
    if (a.model.empty()) throw CLI::ValidationError("--model", "required for pca-gi");
    Model model;
    check(rgi_pca_load(a.model.c_str(), model.out()));
    check(rgi_pca_stack(model.get(), a.count, a.bit, a.seed, "pca-gi", stack.out()));
  } else if (a.method == "random-rgi" || a.method == "pca-rgi") {
    Geometry geometry;
    check(rgi_geometry_build(a.height, a.width, roi, a.rings, a.sectors, geometry.out()));
    if (!a.geometry_out.empty()) check(rgi_geometry_save(geometry.get(), a.geometry_out.c_str()));
    Stack fill;
    if (a.method == "random-rgi") {
      check(rgi_stack_random(a.count, roi.height, roi.width, a.seed, "roi", fill.out()));
    } else {
      if (a.model.empty()) throw CLI::ValidationError("--model", "required for pca-rgi");
      Model model;
      check(rgi_pca_load(a.model.c_str(), model.out()));
      check(rgi_pca_stack(model.get(), a.count, a.bit, a.seed, "pca-roi", fill.out()));
    }
    check(rgi_retina_compose(geometry.get(), fill.get(), a.seed, "periphery", stack.out()));
  } else {
    throw CLI::ValidationError("--method", "unknown method '" + a.method + "'");
  }
  check(rgi_stack_save(stack.get(), a.out.c_str()));
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::vector<std::size_t> counts;
  std::vector<double> noise_dbw;
  std::optional<unsigned> bit;
  bool baseline_correlation = false;
};

int run_experiment(const ExperimentArgs& a, bool sweep) {
  nlohmann::json doc = nlohmann::json::object();
  std::string base_dir;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) {
      std::cerr << "error: cannot open config " << a.config << "\n";
      return 2;
    }
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: config " << a.config << ": " << e.what() << "\n";
      return 2;
    }
    base_dir = std::filesystem::path(a.config).parent_path().string();
  }
  if (a.seed) doc["seeds"] = {*a.seed};
  if (!a.methods.empty()) doc["methods"] = a.methods;
  if (!a.counts.empty()) doc["counts"] = a.counts;
  if (!a.noise_dbw.empty()) doc["noise_dbw"] = a.noise_dbw;
  if (a.bit) doc["bit"] = *a.bit;
  if (a.baseline_correlation) doc["baseline_correlation"] = true;

  const std::string text = doc.dump();
  const char* out = a.out.empty() ? nullptr : a.out.c_str();
  const char* base = base_dir.empty() ? nullptr : base_dir.c_str();
  check(sweep ? rgi_run_sweep(text.c_str(), base, out) : rgi_run_pipeline(text.c_str(), base, out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retina-like ghost imaging simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rgi_version());

  // gen-dataset
  std::string ds_dir, ds_family = "blobs";
  std::size_t ds_count = 2000, ds_h = 64, ds_w = 64;
  std::uint64_t ds_seed = 1;
  auto* gen_dataset = app.add_subcommand("gen-dataset", "Write a procedural scene corpus as PGM");
  gen_dataset->add_option("--dir", ds_dir, "Output directory")->required();
  gen_dataset->add_option("--family", ds_family, "blobs or blocks")->capture_default_str();
  gen_dataset->add_option("--count", ds_count, "Number of images")->capture_default_str();
  gen_dataset->add_option("--height", ds_h)->capture_default_str();
  gen_dataset->add_option("--width", ds_w)->capture_default_str();
  gen_dataset->add_option("--seed", ds_seed)->capture_default_str();

  // train-pca
  std::string tp_dataset, tp_out;
  std::size_t tp_h = 16, tp_w = 16, tp_limit = 0;
  auto* train = app.add_subcommand("train-pca", "Train a PCA model on an image directory");
  train->add_option("--dataset", tp_dataset, "Image directory")->required();
  train->add_option("--height", tp_h)->capture_default_str();
  train->add_option("--width", tp_w)->capture_default_str();
  train->add_option("--limit", tp_limit, "Maximum images, 0 for all")->capture_default_str();
  train->add_option("--out", tp_out, "Model header path (.json)")->required();

  // gen-patterns
  PatternArgs pa;
  auto* patterns = app.add_subcommand("gen-patterns", "Generate the pattern stack of one method");
  patterns->add_option("--method", pa.method, "random-gi, random-rgi, pca-gi or pca-rgi")
      ->capture_default_str();
  patterns->add_option("--count", pa.count, "Number of patterns")->required();
  patterns->add_option("--seed", pa.seed)->capture_default_str();
  patterns->add_option("--height", pa.height, "Frame height")->capture_default_str();
  patterns->add_option("--width", pa.width, "Frame width")->capture_default_str();
  patterns->add_option("--roi", pa.roi, "top,left,height,width")->delimiter(',');
  patterns->add_option("--rings", pa.rings)->capture_default_str();
  patterns->add_option("--sectors", pa.sectors)->capture_default_str();
  patterns->add_option("--bit", pa.bit)->check(CLI::Range(0, 7))->capture_default_str();
  patterns->add_option("--model", pa.model, "PCA model for pca-* methods");
  patterns->add_option("--geometry-out", pa.geometry_out, "Also write the retina geometry JSON");
  patterns->add_option("--out", pa.out, "Output stack (.rgip)")->required();

  // simulate
  std::string sim_patterns, sim_object, sim_out;
  std::optional<double> sim_noise;
  std::uint64_t sim_seed = 1;
  auto* simulate = app.add_subcommand("simulate", "Compute bucket measurements");
  simulate->add_option("--patterns", sim_patterns, "Pattern stack")->required();
  simulate->add_option("--object", sim_object, "Object image")->required();
  simulate->add_option("--noise-dbw", sim_noise, "White Gaussian noise power");
  simulate->add_option("--seed", sim_seed)->capture_default_str();
  simulate->add_option("--out", sim_out, "Output CSV")->required();

  // reconstruct
  std::string rc_patterns, rc_meas, rc_out, rc_boundary = "replicate";
  rgi_tv_config tv = rgi_tv_config_default();
  bool rc_corr = false;
  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct an image");
  reconstruct->add_option("--patterns", rc_patterns)->required();
  reconstruct->add_option("--measurements", rc_meas)->required();
  reconstruct->add_option("--out", rc_out, "Output PGM")->required();
  reconstruct->add_option("--tv-weight", tv.tv_weight)->capture_default_str();
  reconstruct->add_option("--penalty", tv.penalty)->capture_default_str();
  reconstruct->add_option("--max-iters", tv.max_iters)->capture_default_str();
  reconstruct->add_option("--rel-tol", tv.rel_tol)->capture_default_str();
  reconstruct->add_option("--boundary", rc_boundary, "replicate or periodic")
      ->check(CLI::IsMember({"replicate", "periodic"}))
      ->capture_default_str();
  reconstruct->add_flag("--correlation", rc_corr, "Use the correlation estimator instead of TV");

  // evaluate
  std::string ev_truth, ev_test;
  std::vector<std::size_t> ev_roi;
  auto* evaluate = app.add_subcommand("evaluate", "PSNR and SSIM of a reconstruction");
  evaluate->add_option("--truth", ev_truth)->required();
  evaluate->add_option("--test", ev_test)->required();
  evaluate->add_option("--roi", ev_roi, "top,left,height,width")->delimiter(',');

  // pipeline / sweep
  ExperimentArgs ea;
  auto add_experiment_flags = [&ea](CLI::App* sub) {
    sub->add_option("--config", ea.config, "Experiment config JSON");
    sub->add_option("--out", ea.out, "Output directory");
    sub->add_option("--seed", ea.seed, "Run a single seed");
    sub->add_option("--methods", ea.methods, "Comma-separated methods")->delimiter(',');
    sub->add_option("--counts", ea.counts, "Comma-separated measurement counts")->delimiter(',');
    sub->add_option("--noise-dbw", ea.noise_dbw, "Comma-separated noise powers")->delimiter(',');
    sub->add_option("--bit", ea.bit, "Bit plane")->check(CLI::Range(0, 7));
    sub->add_flag("--baseline-correlation", ea.baseline_correlation,
                  "Also score the correlation estimator");
  };
  auto* pipeline = app.add_subcommand("pipeline", "Run the full experiment");
  add_experiment_flags(pipeline);
  auto* sweep = app.add_subcommand("sweep", "Run the noise-power sweep");
  add_experiment_flags(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_dataset) {
      check(rgi_generate_dataset(ds_dir.c_str(), ds_family.c_str(), ds_count, ds_h, ds_w, ds_seed));
    } else if (*train) {
      Model model;
      check(rgi_pca_train(tp_dataset.c_str(), tp_h, tp_w, tp_limit, model.out()));
      check(rgi_pca_save(model.get(), tp_out.c_str()));
      std::cout << "trained " << rgi_pca_height(model.get()) << "x" << rgi_pca_width(model.get())
                << " model, leading eigenvalue " << rgi_pca_eigenvalues(model.get())[0] << "\n";
    } else if (*patterns) {
      gen_patterns(pa);
    } else if (*simulate) {
      Stack stack;
      check(rgi_stack_load(sim_patterns.c_str(), stack.out()));
      Image object;
      check(rgi_image_load(sim_object.c_str(), rgi_stack_height(stack.get()),
                           rgi_stack_width(stack.get()), object.out()));
      Records clean;
      check(rgi_measure(stack.get(), object.get(), clean.out()));
      if (sim_noise) {
        Records noisy;
        check(rgi_add_wgn(clean.get(), *sim_noise, sim_seed, "noise", noisy.out()));
        check(rgi_measurements_save(noisy.get(), sim_out.c_str()));
      } else {
        check(rgi_measurements_save(clean.get(), sim_out.c_str()));
      }
    } else if (*reconstruct) {
      Stack stack;
      check(rgi_stack_load(rc_patterns.c_str(), stack.out()));
      Records record;
      check(rgi_measurements_load(rc_meas.c_str(), record.out()));
      tv.boundary = rc_boundary == "periodic" ? RGI_BOUNDARY_PERIODIC : RGI_BOUNDARY_REPLICATE;
      Image image;
      rgi_recon_info info{};
      check(rc_corr ? rgi_reconstruct_correlation(stack.get(), record.get(), image.out(), &info)
                    : rgi_reconstruct_tv(stack.get(), record.get(), &tv, image.out(), &info));
      check(rgi_image_save_pgm(image.get(), rc_out.c_str()));
      std::cout << "iterations " << info.iterations_used << ", residual " << info.final_residual
                << "\n";
    } else if (*evaluate) {
      Image test;
      check(rgi_image_load(ev_test.c_str(), 0, 0, test.out()));
      Image truth;
      check(rgi_image_load(ev_truth.c_str(), rgi_image_height(test.get()),
                           rgi_image_width(test.get()), truth.out()));
      const auto roi = parse_roi(ev_roi);
      rgi_quality q{};
      check(rgi_evaluate(truth.get(), test.get(), roi ? &*roi : nullptr, &q));
      std::cout << quality_json(q) << "\n";
    } else if (pipeline->parsed() || sweep->parsed()) {
      return run_experiment(ea, sweep->parsed());
    }
  } catch (const Failure& f) {
    std::cerr << "error (" << rgi_status_string(f.status) << "): " << rgi_last_error() << "\n";
    return 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
