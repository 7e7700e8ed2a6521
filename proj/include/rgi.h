/* Retina-like ghost imaging: C interface.
 *
 * Every object crosses the boundary as an opaque handle owned by the caller
 * and released with the matching rgi_*_free. Functions return an rgi_status;
 * on failure rgi_last_error() describes the error for the calling thread
 * until that thread's next call into the library.
 */
#ifndef RGI_H
#define RGI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RGI_BUILDING)
#    define RGI_API __declspec(dllexport)
#  else
#    define RGI_API __declspec(dllimport)
#  endif
#else
#  define RGI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rgi_status {
  RGI_OK = 0,
  RGI_ERR_ARGUMENT = 1,
  RGI_ERR_DECODE = 2,
  RGI_ERR_FORMAT = 3,
  RGI_ERR_DATASET = 4,
  RGI_ERR_STATE = 5,
  RGI_ERR_IO = 6,
  RGI_ERR_INTERNAL = 7
} rgi_status;

typedef struct rgi_image rgi_image;
typedef struct rgi_stack rgi_stack;
typedef struct rgi_geometry rgi_geometry;
typedef struct rgi_pca_model rgi_pca_model;
typedef struct rgi_measurements rgi_measurements;

typedef enum rgi_boundary { RGI_BOUNDARY_REPLICATE = 0, RGI_BOUNDARY_PERIODIC = 1 } rgi_boundary;

typedef struct rgi_tv_config {
  double tv_weight;
  double penalty;
  size_t max_iters;
  double rel_tol;
  rgi_boundary boundary;
} rgi_tv_config;

typedef struct rgi_roi {
  size_t top;
  size_t left;
  size_t height;
  size_t width;
} rgi_roi;

typedef struct rgi_quality {
  double psnr_db; /* +inf when the images agree exactly */
  double ssim;
  double mse;
} rgi_quality;

typedef struct rgi_recon_info {
  size_t iterations_used;
  double final_residual;
} rgi_recon_info;

RGI_API const char* rgi_version(void);
RGI_API const char* rgi_status_string(rgi_status status);
/* Message of the last failed call on this thread; "" if none. */
RGI_API const char* rgi_last_error(void);

/* Images. values may be NULL for an all-zero image. rgi_image_load with
 * height = width = 0 keeps the file's size. */
RGI_API rgi_status rgi_image_create(size_t height, size_t width, const double* values,
                                    rgi_image** out);
RGI_API rgi_status rgi_image_load(const char* path, size_t height, size_t width, rgi_image** out);
RGI_API rgi_status rgi_image_save_pgm(const rgi_image* image, const char* path);
RGI_API size_t rgi_image_height(const rgi_image* image);
RGI_API size_t rgi_image_width(const rgi_image* image);
/* Row-major values, valid until the image is freed. */
RGI_API const double* rgi_image_data(const rgi_image* image);
RGI_API void rgi_image_free(rgi_image* image);

/* Random draws take a seed plus an optional stream name. A non-NULL stream
 * selects the named substream of the seed, which is how the experiment
 * pipeline separates its draws ("random-gi", "roi", "periphery", "pca-gi",
 * "pca-roi", "noise"). */

/* Pattern stacks */
RGI_API rgi_status rgi_stack_random(size_t count, size_t height, size_t width, uint64_t seed,
                                    const char* stream, rgi_stack** out);
RGI_API rgi_status rgi_stack_load(const char* path, rgi_stack** out);
RGI_API rgi_status rgi_stack_save(const rgi_stack* stack, const char* path);
RGI_API size_t rgi_stack_count(const rgi_stack* stack);
RGI_API size_t rgi_stack_height(const rgi_stack* stack);
RGI_API size_t rgi_stack_width(const rgi_stack* stack);
/* count*height*width bytes of 0/1, valid until the stack is freed. */
RGI_API const uint8_t* rgi_stack_bits(const rgi_stack* stack);
RGI_API void rgi_stack_free(rgi_stack* stack);

/* Retina geometry */
RGI_API rgi_status rgi_geometry_build(size_t frame_h, size_t frame_w, rgi_roi roi, size_t rings,
                                      size_t sectors, rgi_geometry** out);
RGI_API rgi_status rgi_geometry_save(const rgi_geometry* geometry, const char* path);
RGI_API size_t rgi_geometry_label_count(const rgi_geometry* geometry);
RGI_API void rgi_geometry_free(rgi_geometry* geometry);
RGI_API rgi_status rgi_retina_compose(const rgi_geometry* geometry, const rgi_stack* roi_fill,
                                      uint64_t seed, const char* stream, rgi_stack** out);

/* PCA. limit = 0 loads every image in the directory. */
RGI_API rgi_status rgi_pca_train(const char* dataset_dir, size_t height, size_t width,
                                 size_t limit, rgi_pca_model** out);
RGI_API rgi_status rgi_pca_save(const rgi_pca_model* model, const char* path);
RGI_API rgi_status rgi_pca_load(const char* path, rgi_pca_model** out);
RGI_API size_t rgi_pca_dimension(const rgi_pca_model* model);
RGI_API size_t rgi_pca_height(const rgi_pca_model* model);
RGI_API size_t rgi_pca_width(const rgi_pca_model* model);
/* Eigenvalues in nonincreasing order, dimension() entries. */
RGI_API const double* rgi_pca_eigenvalues(const rgi_pca_model* model);
RGI_API rgi_status rgi_pca_stack(const rgi_pca_model* model, size_t count, unsigned bit,
                                 uint64_t seed, const char* stream, rgi_stack** out);
RGI_API void rgi_pca_free(rgi_pca_model* model);

/* Forward model */
RGI_API rgi_status rgi_measure(const rgi_stack* stack, const rgi_image* object,
                               rgi_measurements** out);
RGI_API rgi_status rgi_add_wgn(const rgi_measurements* record, double power_dbw, uint64_t seed,
                               const char* stream, rgi_measurements** out);
RGI_API rgi_status rgi_measurements_load(const char* csv_path, rgi_measurements** out);
RGI_API rgi_status rgi_measurements_save(const rgi_measurements* record, const char* csv_path);
RGI_API size_t rgi_measurements_count(const rgi_measurements* record);
RGI_API const double* rgi_measurements_data(const rgi_measurements* record);
/* Returns 1 and writes the power when noise was injected, else 0. */
RGI_API int rgi_measurements_noise(const rgi_measurements* record, double* power_dbw);
RGI_API void rgi_measurements_free(rgi_measurements* record);

/* Reconstruction. info may be NULL. */
RGI_API rgi_tv_config rgi_tv_config_default(void);
RGI_API rgi_status rgi_reconstruct_tv(const rgi_stack* stack, const rgi_measurements* record,
                                      const rgi_tv_config* config, rgi_image** out,
                                      rgi_recon_info* info);
RGI_API rgi_status rgi_reconstruct_correlation(const rgi_stack* stack,
                                               const rgi_measurements* record, rgi_image** out,
                                               rgi_recon_info* info);

/* Metrics. region may be NULL for the whole frame. */
RGI_API rgi_status rgi_evaluate(const rgi_image* truth, const rgi_image* test,
                                const rgi_roi* region, rgi_quality* out);

/* Experiments. config_json is the config document text; out_dir, when not
 * NULL, replaces its output directory. Relative paths in the document
 * resolve against base_dir (NULL for the working directory). */
RGI_API rgi_status rgi_run_pipeline(const char* config_json, const char* base_dir,
                                    const char* out_dir);
RGI_API rgi_status rgi_run_sweep(const char* config_json, const char* base_dir,
                                 const char* out_dir);

/* Procedural scene corpus; family is "blobs" or "blocks". */
RGI_API rgi_status rgi_generate_dataset(const char* dir, const char* family, size_t count,
                                        size_t height, size_t width, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* RGI_H */
