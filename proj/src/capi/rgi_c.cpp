#include "rgi.h"

#include <exception>
#include <filesystem>
#include <new>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "rgi/error.hpp"
#include "rgi/experiment.hpp"
#include "rgi/forward.hpp"
#include "rgi/image.hpp"
#include "rgi/metrics.hpp"
#include "rgi/pattern_stack.hpp"
#include "rgi/pca.hpp"
#include "rgi/recon.hpp"
#include "rgi/retina.hpp"
#include "rgi/synthetic.hpp"

struct rgi_image {
  rgi::Image value;
};
struct rgi_stack {
  rgi::PatternStack value;
};
struct rgi_geometry {
  rgi::RetinaGeometry value;
};
struct rgi_pca_model {
  rgi::PcaModel value;
};
struct rgi_measurements {
  rgi::MeasurementRecord value;
};

namespace {

thread_local std::string last_error;

rgi_status status_of(rgi::ErrorKind kind) {
  switch (kind) {
    case rgi::ErrorKind::Argument: return RGI_ERR_ARGUMENT;
    case rgi::ErrorKind::Decode: return RGI_ERR_DECODE;
    case rgi::ErrorKind::Format: return RGI_ERR_FORMAT;
    case rgi::ErrorKind::Dataset: return RGI_ERR_DATASET;
    case rgi::ErrorKind::State: return RGI_ERR_STATE;
    case rgi::ErrorKind::Io: return RGI_ERR_IO;
  }
  return RGI_ERR_INTERNAL;
}

template <typename F>
rgi_status guard(F&& body) {
  last_error.clear();
  try {
    body();
    return RGI_OK;
  } catch (const rgi::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return RGI_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RGI_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RGI_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return RGI_ERR_INTERNAL;
  }
}

template <typename T>
void need(const T* p, const char* what) {
  if (p == nullptr) rgi::fail(rgi::ErrorKind::Argument, std::string(what) + " is null");
}

rgi::RngSpec spec_for(uint64_t seed, const char* stream) {
  rgi::RngSpec spec{seed};
  return stream ? spec.substream(std::string_view(stream)) : spec;
}

template <typename Handle, typename Value>
void emit(Handle** out, Value&& value) {
  *out = new Handle{std::forward<Value>(value)};
}

rgi::TvConfig to_tv(const rgi_tv_config& c) {
  if (c.boundary != RGI_BOUNDARY_REPLICATE && c.boundary != RGI_BOUNDARY_PERIODIC) {
    rgi::fail(rgi::ErrorKind::Argument, "unknown boundary rule");
  }
  rgi::TvConfig tv;
  tv.tv_weight = c.tv_weight;
  tv.penalty = c.penalty;
  tv.max_iters = c.max_iters;
  tv.rel_tol = c.rel_tol;
  tv.boundary =
      c.boundary == RGI_BOUNDARY_PERIODIC ? rgi::Boundary::Periodic : rgi::Boundary::Replicate;
  return tv;
}

rgi::Roi to_roi(const rgi_roi& r) { return rgi::Roi{r.top, r.left, r.height, r.width}; }

rgi_status run_experiment(const char* config_json, const char* base_dir, const char* out_dir,
                          bool sweep) {
  return guard([&] {
    need(config_json, "config_json");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::exception& e) {
      rgi::fail(rgi::ErrorKind::Format, std::string("config: ") + e.what());
    }
    rgi::ExperimentConfig cfg =
        rgi::config_from_json(doc, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path());
    if (out_dir) cfg.out = out_dir;
    if (sweep) {
      rgi::run_sweep(cfg);
    } else {
      rgi::run_pipeline(cfg);
    }
  });
}

}  // namespace

extern "C" {

const char* rgi_version(void) { return "1.0.0"; }

const char* rgi_status_string(rgi_status status) {
  switch (status) {
    case RGI_OK: return "ok";
    case RGI_ERR_ARGUMENT: return "argument error";
    case RGI_ERR_DECODE: return "decode error";
    case RGI_ERR_FORMAT: return "format error";
    case RGI_ERR_DATASET: return "dataset error";
    case RGI_ERR_STATE: return "state error";
    case RGI_ERR_IO: return "io error";
    case RGI_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rgi_last_error(void) { return last_error.c_str(); }

rgi_status rgi_image_create(size_t height, size_t width, const double* values, rgi_image** out) {
  return guard([&] {
    need(out, "out");
    if (values == nullptr) {
      emit(out, rgi::Image(height, width));
    } else {
      emit(out, rgi::Image(height, width, std::vector<double>(values, values + height * width)));
    }
  });
}

rgi_status rgi_image_load(const char* path, size_t height, size_t width, rgi_image** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    if (height == 0 && width == 0) {
      const rgi::Raster8 raster = rgi::read_netpbm(path);
      height = raster.height;
      width = raster.width;
    }
    emit(out, rgi::load_image(path, height, width));
  });
}

rgi_status rgi_image_save_pgm(const rgi_image* image, const char* path) {
  return guard([&] {
    need(image, "image");
    need(path, "path");
    rgi::write_pgm(image->value, path);
  });
}

size_t rgi_image_height(const rgi_image* image) { return image ? image->value.height() : 0; }
size_t rgi_image_width(const rgi_image* image) { return image ? image->value.width() : 0; }
const double* rgi_image_data(const rgi_image* image) {
  return image ? image->value.values().data() : nullptr;
}
void rgi_image_free(rgi_image* image) { delete image; }

rgi_status rgi_stack_random(size_t count, size_t height, size_t width, uint64_t seed,
                            const char* stream, rgi_stack** out) {
  return guard([&] {
    need(out, "out");
    emit(out, rgi::gen_random_stack(count, height, width, spec_for(seed, stream)));
  });
}

rgi_status rgi_stack_load(const char* path, rgi_stack** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    emit(out, rgi::load_pattern_stack(path));
  });
}

rgi_status rgi_stack_save(const rgi_stack* stack, const char* path) {
  return guard([&] {
    need(stack, "stack");
    need(path, "path");
    rgi::save_pattern_stack(stack->value, path);
  });
}

size_t rgi_stack_count(const rgi_stack* stack) { return stack ? stack->value.count() : 0; }
size_t rgi_stack_height(const rgi_stack* stack) { return stack ? stack->value.height() : 0; }
size_t rgi_stack_width(const rgi_stack* stack) { return stack ? stack->value.width() : 0; }
const uint8_t* rgi_stack_bits(const rgi_stack* stack) {
  return stack ? stack->value.bits().data() : nullptr;
}
void rgi_stack_free(rgi_stack* stack) { delete stack; }

rgi_status rgi_geometry_build(size_t frame_h, size_t frame_w, rgi_roi roi, size_t rings,
                              size_t sectors, rgi_geometry** out) {
  return guard([&] {
    need(out, "out");
    emit(out, rgi::build_retina_geometry(frame_h, frame_w, to_roi(roi), rings, sectors));
  });
}

rgi_status rgi_geometry_save(const rgi_geometry* geometry, const char* path) {
  return guard([&] {
    need(geometry, "geometry");
    need(path, "path");
    rgi::save_geometry(geometry->value, path);
  });
}

size_t rgi_geometry_label_count(const rgi_geometry* geometry) {
  return geometry ? geometry->value.label_count() : 0;
}
void rgi_geometry_free(rgi_geometry* geometry) { delete geometry; }

rgi_status rgi_retina_compose(const rgi_geometry* geometry, const rgi_stack* roi_fill,
                              uint64_t seed, const char* stream, rgi_stack** out) {
  return guard([&] {
    need(geometry, "geometry");
    need(roi_fill, "roi_fill");
    need(out, "out");
    emit(out, rgi::compose_retina_stack(geometry->value, roi_fill->value, spec_for(seed, stream)));
  });
}

rgi_status rgi_pca_train(const char* dataset_dir, size_t height, size_t width, size_t limit,
                         rgi_pca_model** out) {
  return guard([&] {
    need(dataset_dir, "dataset_dir");
    need(out, "out");
    std::optional<size_t> lim;
    if (limit > 0) lim = limit;
    emit(out, rgi::train_pca(rgi::load_dataset(dataset_dir, height, width, lim)));
  });
}

rgi_status rgi_pca_save(const rgi_pca_model* model, const char* path) {
  return guard([&] {
    need(model, "model");
    need(path, "path");
    rgi::save_pca_model(model->value, path);
  });
}

rgi_status rgi_pca_load(const char* path, rgi_pca_model** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    emit(out, rgi::load_pca_model(path));
  });
}

size_t rgi_pca_dimension(const rgi_pca_model* model) {
  return model ? model->value.dimension() : 0;
}
size_t rgi_pca_height(const rgi_pca_model* model) { return model ? model->value.height : 0; }
size_t rgi_pca_width(const rgi_pca_model* model) { return model ? model->value.width : 0; }
const double* rgi_pca_eigenvalues(const rgi_pca_model* model) {
  return model ? model->value.eigenvalues.data() : nullptr;
}

rgi_status rgi_pca_stack(const rgi_pca_model* model, size_t count, unsigned bit, uint64_t seed,
                         const char* stream, rgi_stack** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    emit(out, rgi::gen_pca_stack(model->value, count, bit, spec_for(seed, stream)));
  });
}

void rgi_pca_free(rgi_pca_model* model) { delete model; }

rgi_status rgi_measure(const rgi_stack* stack, const rgi_image* object, rgi_measurements** out) {
  return guard([&] {
    need(stack, "stack");
    need(object, "object");
    need(out, "out");
    emit(out, rgi::measure(stack->value, object->value));
  });
}

rgi_status rgi_add_wgn(const rgi_measurements* record, double power_dbw, uint64_t seed,
                       const char* stream, rgi_measurements** out) {
  return guard([&] {
    need(record, "record");
    need(out, "out");
    emit(out, rgi::add_wgn(record->value, rgi::NoiseSpec{power_dbw, spec_for(seed, stream)}));
  });
}

rgi_status rgi_measurements_load(const char* csv_path, rgi_measurements** out) {
  return guard([&] {
    need(csv_path, "csv_path");
    need(out, "out");
    emit(out, rgi::load_measurements(csv_path));
  });
}

rgi_status rgi_measurements_save(const rgi_measurements* record, const char* csv_path) {
  return guard([&] {
    need(record, "record");
    need(csv_path, "csv_path");
    rgi::save_measurements(record->value, csv_path);
  });
}

size_t rgi_measurements_count(const rgi_measurements* record) {
  return record ? record->value.count() : 0;
}
const double* rgi_measurements_data(const rgi_measurements* record) {
  return record ? record->value.intensities.data() : nullptr;
}
int rgi_measurements_noise(const rgi_measurements* record, double* power_dbw) {
  if (!record || !record->value.noise_power_dbw) return 0;
  if (power_dbw) *power_dbw = *record->value.noise_power_dbw;
  return 1;
}
void rgi_measurements_free(rgi_measurements* record) { delete record; }

rgi_tv_config rgi_tv_config_default(void) {
  const rgi::TvConfig d;
  return rgi_tv_config{d.tv_weight, d.penalty, d.max_iters, d.rel_tol, RGI_BOUNDARY_REPLICATE};
}

rgi_status rgi_reconstruct_tv(const rgi_stack* stack, const rgi_measurements* record,
                              const rgi_tv_config* config, rgi_image** out,
                              rgi_recon_info* info) {
  return guard([&] {
    need(stack, "stack");
    need(record, "record");
    need(out, "out");
    const rgi::TvConfig tv = config ? to_tv(*config) : rgi::TvConfig{};
    rgi::ReconResult r = rgi::reconstruct_tv(stack->value, record->value, tv);
    if (info) *info = rgi_recon_info{r.iterations_used, r.final_residual};
    emit(out, std::move(r.image));
  });
}

rgi_status rgi_reconstruct_correlation(const rgi_stack* stack, const rgi_measurements* record,
                                       rgi_image** out, rgi_recon_info* info) {
  return guard([&] {
    need(stack, "stack");
    need(record, "record");
    need(out, "out");
    rgi::ReconResult r = rgi::reconstruct_correlation(stack->value, record->value);
    if (info) *info = rgi_recon_info{r.iterations_used, r.final_residual};
    emit(out, std::move(r.image));
  });
}

rgi_status rgi_evaluate(const rgi_image* truth, const rgi_image* test, const rgi_roi* region,
                        rgi_quality* out) {
  return guard([&] {
    need(truth, "truth");
    need(test, "test");
    need(out, "out");
    std::optional<rgi::Roi> roi;
    if (region) roi = to_roi(*region);
    const rgi::QualityReport q = rgi::evaluate(truth->value, test->value, roi);
    *out = rgi_quality{q.psnr_db, q.ssim, q.mse};
  });
}

rgi_status rgi_run_pipeline(const char* config_json, const char* base_dir, const char* out_dir) {
  return run_experiment(config_json, base_dir, out_dir, false);
}

rgi_status rgi_run_sweep(const char* config_json, const char* base_dir, const char* out_dir) {
  return run_experiment(config_json, base_dir, out_dir, true);
}

rgi_status rgi_generate_dataset(const char* dir, const char* family, size_t count, size_t height,
                                size_t width, uint64_t seed) {
  return guard([&] {
    need(dir, "dir");
    need(family, "family");
    rgi::write_scene_corpus(dir, rgi::scene_family_from_string(family), count, height, width,
                            rgi::RngSpec{seed});
  });
}

}  // extern "C"
