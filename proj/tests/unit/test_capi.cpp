#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rgi.h"
#include "support.hpp"

namespace {

using rgi::testing::read_bytes;
using rgi::testing::TempDir;

TEST(CApi, VersionAndStatusStrings) {
  EXPECT_STREQ(rgi_version(), "1.0.0");
  EXPECT_STREQ(rgi_status_string(RGI_OK), "ok");
  EXPECT_STRNE(rgi_status_string(RGI_ERR_FORMAT), rgi_status_string(RGI_ERR_DECODE));
}

TEST(CApi, NullArgumentsAreReportedNotCrashed) {
  rgi_image* img = nullptr;
  EXPECT_EQ(rgi_image_create(2, 2, nullptr, nullptr), RGI_ERR_ARGUMENT);
  EXPECT_STRNE(rgi_last_error(), "");
  const double outside[1] = {1.5};
  EXPECT_EQ(rgi_image_create(1, 1, outside, &img), RGI_ERR_ARGUMENT);
  EXPECT_EQ(img, nullptr);
  EXPECT_EQ(rgi_measure(nullptr, nullptr, nullptr), RGI_ERR_ARGUMENT);
  const double v[1] = {0.5};
  ASSERT_EQ(rgi_image_create(1, 1, v, &img), RGI_OK);
  EXPECT_STREQ(rgi_last_error(), "");
  rgi_image_free(img);
  rgi_image_free(nullptr);
}

TEST(CApi, ErrorKindsMapToStatuses) {
  TempDir dir;
  rgi_image* img = nullptr;
  EXPECT_EQ(rgi_image_load((dir / "absent.pgm").c_str(), 0, 0, &img), RGI_ERR_DECODE);
  rgi_stack* stack = nullptr;
  rgi::testing::write_bytes(dir / "bad.rgip", "nope");
  EXPECT_EQ(rgi_stack_load((dir / "bad.rgip").c_str(), &stack), RGI_ERR_FORMAT);
  rgi_pca_model* model = nullptr;
  EXPECT_EQ(rgi_pca_train((dir / "empty").c_str(), 4, 4, 0, &model), RGI_ERR_DATASET);
  EXPECT_EQ(rgi_run_pipeline("{not json", nullptr, nullptr), RGI_ERR_FORMAT);
}

TEST(CApi, SimulateReconstructEvaluate) {
  const size_t h = 8, w = 8;
  std::vector<double> px(h * w);
  for (size_t i = 0; i < px.size(); ++i) px[i] = (i % w < 4) ? 0.0 : 1.0;
  rgi_image* object = nullptr;
  ASSERT_EQ(rgi_image_create(h, w, px.data(), &object), RGI_OK);

  rgi_stack* stack = nullptr;
  ASSERT_EQ(rgi_stack_random(96, h, w, 4, "random-gi", &stack), RGI_OK);
  EXPECT_EQ(rgi_stack_count(stack), 96u);

  rgi_measurements* clean = nullptr;
  ASSERT_EQ(rgi_measure(stack, object, &clean), RGI_OK);
  ASSERT_EQ(rgi_measurements_count(clean), 96u);
  double power = 0;
  EXPECT_EQ(rgi_measurements_noise(clean, &power), 0);

  const uint8_t* bits = rgi_stack_bits(stack);
  double first = 0;
  for (size_t i = 0; i < h * w; ++i) first += bits[i] * px[i];
  EXPECT_NEAR(rgi_measurements_data(clean)[0], first, 1e-12);

  rgi_measurements* noisy = nullptr;
  ASSERT_EQ(rgi_add_wgn(clean, -40.0, 4, "noise", &noisy), RGI_OK);
  ASSERT_EQ(rgi_measurements_noise(noisy, &power), 1);
  EXPECT_EQ(power, -40.0);
  rgi_measurements* twice = nullptr;
  EXPECT_EQ(rgi_add_wgn(noisy, -40.0, 4, "noise", &twice), RGI_ERR_STATE);

  rgi_tv_config cfg = rgi_tv_config_default();
  EXPECT_EQ(cfg.max_iters, 300u);
  rgi_image* recon = nullptr;
  rgi_recon_info info{};
  ASSERT_EQ(rgi_reconstruct_tv(stack, clean, &cfg, &recon, &info), RGI_OK);
  EXPECT_GE(info.iterations_used, 1u);

  rgi_quality q{};
  ASSERT_EQ(rgi_evaluate(object, recon, nullptr, &q), RGI_OK);
  EXPECT_GT(q.psnr_db, 30.0);
  rgi_roi roi{2, 2, 4, 4};
  ASSERT_EQ(rgi_evaluate(object, object, &roi, &q), RGI_OK);
  EXPECT_TRUE(std::isinf(q.psnr_db));
  EXPECT_EQ(q.ssim, 1.0);

  rgi_image* corr = nullptr;
  ASSERT_EQ(rgi_reconstruct_correlation(stack, clean, &corr, nullptr), RGI_OK);
  EXPECT_EQ(rgi_image_height(corr), h);

  rgi_image_free(corr);
  rgi_image_free(recon);
  rgi_measurements_free(noisy);
  rgi_measurements_free(clean);
  rgi_stack_free(stack);
  rgi_image_free(object);
}

TEST(CApi, FilesRoundTrip) {
  TempDir dir;
  rgi_stack* stack = nullptr;
  ASSERT_EQ(rgi_stack_random(5, 3, 7, 1, nullptr, &stack), RGI_OK);
  ASSERT_EQ(rgi_stack_save(stack, (dir / "s.rgip").c_str()), RGI_OK);
  rgi_stack* loaded = nullptr;
  ASSERT_EQ(rgi_stack_load((dir / "s.rgip").c_str(), &loaded), RGI_OK);
  ASSERT_EQ(rgi_stack_width(loaded), 7u);
  EXPECT_EQ(std::vector<uint8_t>(rgi_stack_bits(stack), rgi_stack_bits(stack) + 105),
            std::vector<uint8_t>(rgi_stack_bits(loaded), rgi_stack_bits(loaded) + 105));

  const double v[4] = {0.0, 1.0, 0.5, 0.25};
  rgi_image* obj = nullptr;
  ASSERT_EQ(rgi_image_create(1, 4, v, &obj), RGI_OK);
  rgi_stack* row = nullptr;
  ASSERT_EQ(rgi_stack_random(3, 1, 4, 2, nullptr, &row), RGI_OK);
  rgi_measurements* rec = nullptr;
  ASSERT_EQ(rgi_measure(row, obj, &rec), RGI_OK);
  ASSERT_EQ(rgi_measurements_save(rec, (dir / "m.csv").c_str()), RGI_OK);
  rgi_measurements* back = nullptr;
  ASSERT_EQ(rgi_measurements_load((dir / "m.csv").c_str(), &back), RGI_OK);
  for (size_t i = 0; i < 3; ++i)
    EXPECT_EQ(rgi_measurements_data(back)[i], rgi_measurements_data(rec)[i]);

  rgi_measurements_free(back);
  rgi_measurements_free(rec);
  rgi_stack_free(row);
  rgi_image_free(obj);
  rgi_stack_free(loaded);
  rgi_stack_free(stack);
}

TEST(CApi, RetinaAndPca) {
  TempDir dir;
  ASSERT_EQ(rgi_generate_dataset((dir / "corpus").c_str(), "blocks", 30, 12, 12, 1), RGI_OK);
  rgi_pca_model* model = nullptr;
  ASSERT_EQ(rgi_pca_train((dir / "corpus").c_str(), 4, 4, 0, &model), RGI_OK);
  ASSERT_EQ(rgi_pca_dimension(model), 16u);
  const double* ev = rgi_pca_eigenvalues(model);
  for (size_t i = 1; i < 16; ++i) EXPECT_GE(ev[i - 1], ev[i]);
  ASSERT_EQ(rgi_pca_save(model, (dir / "m").c_str()), RGI_OK);
  rgi_pca_model* reloaded = nullptr;
  ASSERT_EQ(rgi_pca_load((dir / "m").c_str(), &reloaded), RGI_OK);
  EXPECT_EQ(rgi_pca_eigenvalues(reloaded)[0], ev[0]);

  rgi_stack* fill = nullptr;
  ASSERT_EQ(rgi_pca_stack(model, 20, 0, 3, "pca-roi", &fill), RGI_OK);
  rgi_geometry* geom = nullptr;
  ASSERT_EQ(rgi_geometry_build(12, 12, rgi_roi{4, 4, 4, 4}, 3, 8, &geom), RGI_OK);
  EXPECT_GT(rgi_geometry_label_count(geom), 16u);
  rgi_stack* full = nullptr;
  ASSERT_EQ(rgi_retina_compose(geom, fill, 3, "periphery", &full), RGI_OK);
  EXPECT_EQ(rgi_stack_height(full), 12u);
  EXPECT_EQ(rgi_stack_count(full), 20u);
  const uint8_t* a = rgi_stack_bits(fill);
  const uint8_t* b = rgi_stack_bits(full);
  for (size_t r = 0; r < 4; ++r)
    for (size_t c = 0; c < 4; ++c) EXPECT_EQ(b[(4 + r) * 12 + 4 + c], a[r * 4 + c]);

  rgi_geometry* bad = nullptr;
  EXPECT_EQ(rgi_geometry_build(12, 12, rgi_roi{10, 10, 4, 4}, 3, 8, &bad), RGI_ERR_ARGUMENT);

  rgi_stack_free(full);
  rgi_geometry_free(geom);
  rgi_stack_free(fill);
  rgi_pca_free(reloaded);
  rgi_pca_free(model);
}

TEST(CApi, PipelineHonoursOutDirAndBaseDir) {
  TempDir dir;
  ASSERT_EQ(rgi_generate_dataset((dir / "objects").c_str(), "blobs", 1, 8, 8, 7), RGI_OK);
  const std::string config = R"({"object": "objects/img_00000.pgm",
    "frame": {"height": 8, "width": 8}, "counts": [32], "seeds": [1],
    "methods": ["random-gi", "random-rgi"], "rings": 2, "sectors": 4,
    "noise_dbw": [-20], "tv": {"max_iters": 20}, "out": "ignored"})";
  const std::string out = (dir / "run").string();
  ASSERT_EQ(rgi_run_sweep(config.c_str(), dir.path().c_str(), out.c_str()), RGI_OK)
      << rgi_last_error();
  EXPECT_FALSE(std::filesystem::exists(dir / "ignored"));
  EXPECT_NE(read_bytes(dir / "run" / "curves.csv").find("random-rgi,32,-20,1,"),
            std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "run" / "recon_random-gi_32_-20_1.pgm"));
}

}  // namespace
