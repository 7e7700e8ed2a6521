#include <map>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rgi/retina.hpp"
#include "support.hpp"

namespace rgi {
namespace {

using testing::kind_of;

TEST(RetinaGeometry, HandComputedThreePixelStrip) {
  // Frame 1x3 with the middle pixel as fovea; r0 = 0.5, rmax = sqrt(2.5).
  // Both side pixels sit at radius 1, ring floor(2 * ln 2 / ln sqrt(10)) = 1.
  // Left pixel has angle pi -> wedge 3; right pixel angle 0 -> wedge 2.
  const auto g = build_retina_geometry(1, 3, Roi{0, 1, 1, 1}, 2, 4);
  EXPECT_EQ(g.cell_map(), (std::vector<std::uint32_t>{2, 0, 1}));
  EXPECT_EQ(g.label_count(), 3u);
  EXPECT_EQ(g.periphery_cell_count(), 2u);
}

TEST(RetinaGeometry, FullFrameRoiIsIdentityLabeling) {
  const auto g = build_retina_geometry(4, 5, Roi{0, 0, 4, 5}, 6, 16);
  std::vector<std::uint32_t> identity(20);
  for (std::uint32_t i = 0; i < 20; ++i) identity[i] = i;
  EXPECT_EQ(g.cell_map(), identity);
  EXPECT_EQ(g.periphery_cell_count(), 0u);
}

TEST(RetinaGeometry, CountingBoundAndFoveaLabels) {
  const Roi roi = centered_roi(64, 64, 32, 32);
  const auto g = build_retina_geometry(64, 64, roi, 4, 8);
  EXPECT_GT(g.label_count(), 1024u);
  EXPECT_LE(g.label_count(), 1024u + 32u);
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      const auto label = g.cell_map()[r * 64 + c];
      if (roi.contains(r, c)) {
        ASSERT_LT(label, 1024u);
      } else {
        ASSERT_GE(label, 1024u);
      }
    }
  }
}

TEST(RetinaGeometry, PartitionPropertyOverConfigurations) {
  for (std::size_t fh : {7u, 16u, 32u}) {
    for (std::size_t rings : {1u, 3u, 6u}) {
      for (std::size_t sectors : {1u, 5u, 16u}) {
        const Roi roi{1, 2, std::max<std::size_t>(1, fh / 3), std::max<std::size_t>(1, fh / 4)};
        const auto g = build_retina_geometry(fh, fh + 3, roi, rings, sectors);
        ASSERT_EQ(g.cell_map().size(), fh * (fh + 3));
        std::set<std::uint32_t> fovea;
        std::set<std::uint32_t> labels(g.cell_map().begin(), g.cell_map().end());
        for (std::size_t r = 0; r < fh; ++r)
          for (std::size_t c = 0; c < fh + 3; ++c)
            if (roi.contains(r, c)) fovea.insert(g.cell_map()[r * (fh + 3) + c]);
        ASSERT_EQ(fovea.size(), roi.area());
        ASSERT_EQ(labels.size(), g.label_count());
        ASSERT_EQ(*labels.rbegin() + 1, g.label_count());
        ASSERT_LE(g.periphery_cell_count(), rings * sectors);
      }
    }
  }
}

TEST(RetinaGeometry, RingsGrowOutwardFromRoiCenter) {
  // With one wedge, periphery labels follow ring order, so labels never
  // decrease with distance from the center.
  const Roi roi = centered_roi(32, 32, 8, 8);
  const auto g = build_retina_geometry(32, 32, roi, 6, 1);
  std::map<double, std::uint32_t> max_label_at;
  std::vector<std::pair<double, std::uint32_t>> samples;
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 32; ++c) {
      if (roi.contains(r, c)) continue;
      const double d = std::hypot(r + 0.5 - 16.0, c + 0.5 - 16.0);
      samples.emplace_back(d, g.cell_map()[r * 32 + c]);
    }
  }
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    ASSERT_LE(samples[i - 1].second, samples[i].second);
  }
  EXPECT_EQ(g.periphery_cell_count(), 6u);
}

TEST(RetinaGeometry, RejectsRoiOutsideFrame) {
  EXPECT_EQ(kind_of([] { build_retina_geometry(8, 8, Roi{4, 4, 5, 2}, 2, 2); }),
            ErrorKind::Argument);
  EXPECT_EQ(kind_of([] { build_retina_geometry(8, 8, Roi{2, 2, 2, 2}, 0, 2); }),
            ErrorKind::Argument);
}

TEST(RetinaGeometry, JsonRoundTrip) {
  const auto g = build_retina_geometry(12, 10, Roi{3, 2, 4, 5}, 3, 7);
  const auto doc = geometry_to_json(g);
  EXPECT_EQ(doc.at("cell_map").size(), 120u);
  EXPECT_EQ(geometry_from_json(doc), g);
  auto broken = doc;
  broken["cell_map"][0] = 0;
  broken["cell_map"][1] = 0;
  EXPECT_THROW(geometry_from_json(broken), Error);
  EXPECT_EQ(kind_of([] { geometry_from_json(nlohmann::json{{"rings", 1}}); }), ErrorKind::Format);
}

class ComposeRetina : public ::testing::Test {
 protected:
  Roi roi{5, 6, 8, 10};
  RetinaGeometry geom = build_retina_geometry(20, 24, roi, 4, 8);
  PatternStack fill = gen_random_stack(30, 8, 10, RngSpec{1});
  PatternStack out = compose_retina_stack(geom, fill, RngSpec{2});
};

TEST_F(ComposeRetina, RoiEqualsFillPattern) {
  ASSERT_EQ(out.count(), 30u);
  ASSERT_EQ(out.height(), 20u);
  for (std::size_t t = 0; t < out.count(); ++t)
    for (std::size_t r = 0; r < roi.height; ++r)
      for (std::size_t c = 0; c < roi.width; ++c)
        ASSERT_EQ(out.pattern(t)[(r + roi.top) * 24 + c + roi.left], fill.pattern(t)[r * 10 + c]);
}

TEST_F(ComposeRetina, PeripheryCellsAreUniform) {
  for (std::size_t t = 0; t < out.count(); ++t) {
    std::map<std::uint32_t, std::uint8_t> cell_bit;
    for (std::size_t i = 0; i < out.pixels(); ++i) {
      const auto label = geom.cell_map()[i];
      if (label < roi.area()) continue;
      auto [it, inserted] = cell_bit.emplace(label, out.pattern(t)[i]);
      ASSERT_TRUE(inserted || it->second == out.pattern(t)[i]);
    }
  }
}

TEST_F(ComposeRetina, FillsDifferOnlyInsideRoiUnderSharedPeriphery) {
  const PatternStack other = compose_retina_stack(geom, gen_random_stack(30, 8, 10, RngSpec{5}),
                                                  RngSpec{2});
  for (std::size_t t = 0; t < out.count(); ++t)
    for (std::size_t i = 0; i < out.pixels(); ++i)
      if (geom.cell_map()[i] >= roi.area()) {
        ASSERT_EQ(out.pattern(t)[i], other.pattern(t)[i]);
      }
  EXPECT_EQ(out, compose_retina_stack(geom, fill, RngSpec{2}));
}

TEST(ComposeRetinaDegenerate, FullFrameRoiReturnsFill) {
  const auto g = build_retina_geometry(6, 6, Roi{0, 0, 6, 6}, 6, 16);
  const PatternStack fill = gen_random_stack(4, 6, 6, RngSpec{3});
  EXPECT_EQ(compose_retina_stack(g, fill, RngSpec{4}), fill);
}

TEST(ComposeRetinaDegenerate, FillSizeMismatchIsArgumentError) {
  const auto g = build_retina_geometry(6, 6, Roi{1, 1, 3, 3}, 2, 4);
  EXPECT_EQ(kind_of([&] { compose_retina_stack(g, PatternStack(2, 3, 4), RngSpec{1}); }),
            ErrorKind::Argument);
}

}  // namespace
}  // namespace rgi
