#include "rgi/retina.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "rgi/error.hpp"

namespace rgi {

RetinaGeometry::RetinaGeometry(std::size_t frame_h, std::size_t frame_w, const Roi& roi,
                               std::size_t rings, std::size_t sectors,
                               std::vector<std::uint32_t> cell_map)
    : frame_h_(frame_h),
      frame_w_(frame_w),
      roi_(roi),
      rings_(rings),
      sectors_(sectors),
      cell_map_(std::move(cell_map)) {
  validate_roi(roi_, frame_h_, frame_w_);
  require(cell_map_.size() == frame_h_ * frame_w_, "cell map size does not match frame");

  const std::size_t fovea = roi_.area();
  std::vector<bool> fovea_seen(fovea, false);
  std::set<std::uint32_t> periphery;
  for (std::size_t r = 0; r < frame_h_; ++r) {
    for (std::size_t c = 0; c < frame_w_; ++c) {
      const std::uint32_t label = cell_map_[r * frame_w_ + c];
      if (roi_.contains(r, c)) {
        require(label < fovea && !fovea_seen[label], "fovea labels must be unique and < roi area");
        fovea_seen[label] = true;
      } else {
        require(label >= fovea, "periphery label collides with fovea range");
        periphery.insert(label);
      }
    }
  }
  require(periphery.size() <= rings_ * sectors_, "more periphery cells than rings x sectors");
  // Periphery labels are dense so a cell index is label - roi area.
  std::uint32_t expected = static_cast<std::uint32_t>(fovea);
  for (std::uint32_t label : periphery) {
    require(label == expected++, "periphery labels must be contiguous");
  }
  label_count_ = fovea + periphery.size();
}

RetinaGeometry build_retina_geometry(std::size_t frame_h, std::size_t frame_w, const Roi& roi,
                                     std::size_t rings, std::size_t sectors) {
  require(frame_h >= 1 && frame_w >= 1, "frame dimensions must be positive");
  validate_roi(roi, frame_h, frame_w);
  const bool full_frame = roi.area() == frame_h * frame_w;
  require(full_frame || (rings >= 1 && sectors >= 1), "rings and sectors must be at least 1");

  const double cy = static_cast<double>(roi.top) + static_cast<double>(roi.height) / 2.0;
  const double cx = static_cast<double>(roi.left) + static_cast<double>(roi.width) / 2.0;
  const double r0 = static_cast<double>(std::min(roi.height, roi.width)) / 2.0;
  double rmax = 0.0;
  for (double y : {0.0, static_cast<double>(frame_h)}) {
    for (double x : {0.0, static_cast<double>(frame_w)}) {
      rmax = std::max(rmax, std::hypot(y - cy, x - cx));
    }
  }
  const double log_span = std::log(rmax / r0);

  // (ring, sector) per periphery pixel; ordered map gives ring-major labels.
  std::vector<std::size_t> raw_cell(frame_h * frame_w, 0);
  std::map<std::size_t, std::uint32_t> cell_label;
  for (std::size_t r = 0; r < frame_h; ++r) {
    for (std::size_t c = 0; c < frame_w; ++c) {
      if (roi.contains(r, c)) continue;
      const double dy = static_cast<double>(r) + 0.5 - cy;
      const double dx = static_cast<double>(c) + 0.5 - cx;
      const double radius = std::hypot(dy, dx);
      std::size_t ring = 0;
      if (radius > r0 && log_span > 0.0) {
        const double position = std::log(radius / r0) / log_span * static_cast<double>(rings);
        ring = std::min(static_cast<std::size_t>(position), rings - 1);
      }
      const double angle = std::atan2(dy, dx) + std::numbers::pi;
      const auto sector = std::min(
          static_cast<std::size_t>(angle / (2.0 * std::numbers::pi) * static_cast<double>(sectors)),
          sectors - 1);
      const std::size_t key = ring * sectors + sector;
      raw_cell[r * frame_w + c] = key;
      cell_label.emplace(key, 0);
    }
  }
  std::uint32_t next = static_cast<std::uint32_t>(roi.area());
  for (auto& [key, label] : cell_label) label = next++;

  std::vector<std::uint32_t> cell_map(frame_h * frame_w);
  for (std::size_t r = 0; r < frame_h; ++r) {
    for (std::size_t c = 0; c < frame_w; ++c) {
      const std::size_t i = r * frame_w + c;
      cell_map[i] = roi.contains(r, c)
                        ? static_cast<std::uint32_t>((r - roi.top) * roi.width + (c - roi.left))
                        : cell_label.at(raw_cell[i]);
    }
  }
  return RetinaGeometry(frame_h, frame_w, roi, rings, sectors, std::move(cell_map));
}

PatternStack compose_retina_stack(const RetinaGeometry& geometry, const PatternStack& roi_fill,
                                  const RngSpec& rng) {
  const Roi& roi = geometry.roi();
  require(roi_fill.height() == roi.height && roi_fill.width() == roi.width,
          "roi fill dimensions do not match the roi");
  const std::size_t fovea = roi.area();
  const std::size_t cells = geometry.periphery_cell_count();
  const auto& cell_map = geometry.cell_map();

  PatternStack out(roi_fill.count(), geometry.frame_height(), geometry.frame_width());
  std::vector<std::uint8_t> cell_bits(cells);
  for (std::size_t t = 0; t < out.count(); ++t) {
    RandomStream stream(rng.substream(t));
    for (auto& bit : cell_bits) bit = stream.next_bit() ? 1 : 0;
    const auto fill = roi_fill.pattern(t);
    auto pattern = out.pattern(t);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      const std::uint32_t label = cell_map[i];
      pattern[i] = label < fovea ? fill[label] : cell_bits[label - fovea];
    }
  }
  return out;
}

nlohmann::json geometry_to_json(const RetinaGeometry& geometry) {
  const Roi& roi = geometry.roi();
  return nlohmann::json{
      {"frame", {{"height", geometry.frame_height()}, {"width", geometry.frame_width()}}},
      {"roi", {{"top", roi.top}, {"left", roi.left}, {"height", roi.height}, {"width", roi.width}}},
      {"rings", geometry.rings()},
      {"sectors", geometry.sectors()},
      {"label_count", geometry.label_count()},
      {"cell_map", geometry.cell_map()},
  };
}

RetinaGeometry geometry_from_json(const nlohmann::json& doc) {
  try {
    const auto& roi = doc.at("roi");
    return RetinaGeometry(doc.at("frame").at("height").get<std::size_t>(),
                          doc.at("frame").at("width").get<std::size_t>(),
                          Roi{roi.at("top").get<std::size_t>(), roi.at("left").get<std::size_t>(),
                              roi.at("height").get<std::size_t>(),
                              roi.at("width").get<std::size_t>()},
                          doc.at("rings").get<std::size_t>(), doc.at("sectors").get<std::size_t>(),
                          doc.at("cell_map").get<std::vector<std::uint32_t>>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("geometry json: ") + e.what());
  }
}

void save_geometry(const RetinaGeometry& geometry, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out << geometry_to_json(geometry).dump() << '\n';
}

}  // namespace rgi
