#include <cmath>

#include <gtest/gtest.h>

#include "rgi/error.hpp"
#include "rgi/image.hpp"
#include "support.hpp"

namespace rgi {
namespace {

using testing::kind_of;
using testing::pgm_bytes;
using testing::TempDir;
using testing::write_bytes;

TEST(Image, RejectsValuesOutsideUnitInterval) {
  EXPECT_EQ(kind_of([] { Image(1, 2, {0.5, 1.5}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { Image(1, 2, {-0.1, 0.5}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { Image(2, 2, {0.5, 0.5}); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { Image(0, 3); }), ErrorKind::Argument);
}

TEST(Image, CropIsRowMajorInsideRoi) {
  Image img(3, 3, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8});
  EXPECT_EQ(img.crop(Roi{1, 1, 2, 2}), (std::vector<double>{0.4, 0.5, 0.7, 0.8}));
}

TEST(Roi, ValidationAndCentering) {
  EXPECT_NO_THROW(validate_roi(Roi{0, 0, 4, 4}, 4, 4));
  EXPECT_EQ(kind_of([] { validate_roi(Roi{1, 0, 4, 4}, 4, 4); }), ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { validate_roi(Roi{0, 0, 0, 2}, 4, 4); }), ErrorKind::Argument);
  EXPECT_EQ(centered_roi(32, 32, 16, 16), (Roi{8, 8, 16, 16}));
  EXPECT_EQ(centered_roi(5, 4, 2, 2), (Roi{1, 1, 2, 2}));
}

TEST(MinmaxNormalize, MapsRangeAndConstantInput) {
  EXPECT_EQ(minmax_normalize(std::vector<double>{2.0, 4.0, 3.0}),
            (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(minmax_normalize(std::vector<double>{7.0, 7.0}), (std::vector<double>{0.0, 0.0}));
}

TEST(ResizeBilinear, TwoByTwoToOnePixelAveragesAllFour) {
  const std::vector<double> src{0.0, 255.0, 255.0, 0.0};
  EXPECT_DOUBLE_EQ(resize_bilinear(src, 2, 2, 1, 1)[0], 127.5);
}

TEST(ResizeBilinear, UpsampleUsesHalfPixelCentersAndClamps) {
  // Destination centers map to source x = -0.25, 0.25, 0.75, 1.25.
  const auto out = resize_bilinear(std::vector<double>{0.0, 1.0}, 1, 2, 1, 4);
  EXPECT_EQ(out, (std::vector<double>{0.0, 0.25, 0.75, 1.0}));
}

TEST(LoadImage, TwoByTwoCheckerboardBecomesHalfGray) {
  TempDir dir;
  write_bytes(dir / "c.pgm", pgm_bytes(2, 2, {0, 255, 255, 0}));
  const Image img = load_image(dir / "c.pgm", 1, 1);
  EXPECT_DOUBLE_EQ(img.at(0, 0), 0.5);
}

TEST(LoadImage, IdentityResizeDividesBy255) {
  TempDir dir;
  std::vector<std::uint8_t> px(64 * 64);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<std::uint8_t>(i * 7);
  write_bytes(dir / "a.pgm", pgm_bytes(64, 64, px));
  const Image img = load_image(dir / "a.pgm", 64, 64);
  for (std::size_t i = 0; i < px.size(); ++i) ASSERT_EQ(img.values()[i], px[i] / 255.0);
  EXPECT_EQ(load_image(dir / "a.pgm", 64, 64), img);
  EXPECT_EQ(load_image(dir / "a.pgm", 17, 9), load_image(dir / "a.pgm", 17, 9));
}

TEST(LoadImage, RgbAveragesChannelsWithEqualWeight) {
  TempDir dir;
  std::string bytes = "P6\n# comment line\n2 1\n255\n";
  bytes += std::string{'\x00', '\x03', '\x06', '\x1e', '\x00', '\x00'};
  write_bytes(dir / "rgb.ppm", bytes);
  const Image img = load_image(dir / "rgb.ppm", 1, 2);
  EXPECT_DOUBLE_EQ(img.at(0, 0), 3.0 / 255.0);
  EXPECT_DOUBLE_EQ(img.at(0, 1), 10.0 / 255.0);
}

TEST(LoadImage, ErrorPaths) {
  TempDir dir;
  std::string truncated = pgm_bytes(4, 4, std::vector<std::uint8_t>(16, 9));
  truncated.resize(truncated.size() - 3);
  write_bytes(dir / "t.pgm", truncated);
  write_bytes(dir / "junk.pgm", "not an image at all");
  write_bytes(dir / "deep.pgm", "P5\n1 1\n65535\n\x01\x02");
  write_bytes(dir / "ok.pgm", pgm_bytes(1, 1, {3}));
  EXPECT_EQ(kind_of([&] { load_image(dir / "t.pgm", 4, 4); }), ErrorKind::Decode);
  EXPECT_EQ(kind_of([&] { load_image(dir / "junk.pgm", 4, 4); }), ErrorKind::Decode);
  EXPECT_EQ(kind_of([&] { load_image(dir / "deep.pgm", 1, 1); }), ErrorKind::Decode);
  EXPECT_EQ(kind_of([&] { load_image(dir / "missing.pgm", 1, 1); }), ErrorKind::Decode);
  EXPECT_EQ(kind_of([&] { load_image(dir / "ok.pgm", 0, 1); }), ErrorKind::Argument);
}

TEST(WritePgm, RoundsHalfUpAndReloadsExactly) {
  TempDir dir;
  const Image img(1, 3, {0.5 / 255.0, 1.0, 0.0});
  write_pgm(img, dir / "w.pgm");
  EXPECT_EQ(testing::read_bytes(dir / "w.pgm"), pgm_bytes(1, 3, {1, 255, 0}));

  std::vector<double> v(12);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * 20) / 255.0;
  const Image exact(3, 4, v);
  write_pgm(exact, dir / "e.pgm");
  EXPECT_EQ(load_image(dir / "e.pgm", 3, 4), exact);
}

}  // namespace
}  // namespace rgi
