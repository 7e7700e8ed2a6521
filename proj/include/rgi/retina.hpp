#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rgi/image.hpp"
#include "rgi/pattern_stack.hpp"
#include "rgi/rng.hpp"

namespace rgi {

/// Fovea rectangle at full resolution plus a log-polar periphery.
///
/// Labels 0..roi.area()-1 index fovea pixels row-major inside the roi. Labels
/// from roi.area() upward index the non-empty periphery (ring, sector) cells,
/// numbered in ring-major order.
class RetinaGeometry {
 public:
  static constexpr std::size_t kDefaultRings = 6;
  static constexpr std::size_t kDefaultSectors = 16;

  RetinaGeometry(std::size_t frame_h, std::size_t frame_w, const Roi& roi, std::size_t rings,
                 std::size_t sectors, std::vector<std::uint32_t> cell_map);

  std::size_t frame_height() const noexcept { return frame_h_; }
  std::size_t frame_width() const noexcept { return frame_w_; }
  const Roi& roi() const noexcept { return roi_; }
  std::size_t rings() const noexcept { return rings_; }
  std::size_t sectors() const noexcept { return sectors_; }
  const std::vector<std::uint32_t>& cell_map() const noexcept { return cell_map_; }

  std::size_t label_count() const noexcept { return label_count_; }
  std::size_t periphery_cell_count() const noexcept { return label_count_ - roi_.area(); }

  bool operator==(const RetinaGeometry&) const = default;

 private:
  std::size_t frame_h_;
  std::size_t frame_w_;
  Roi roi_;
  std::size_t rings_;
  std::size_t sectors_;
  std::vector<std::uint32_t> cell_map_;
  std::size_t label_count_;
};

/// Ring boundaries are log-spaced between r0 (half the shorter roi side) and
/// the farthest frame corner, measured from the roi center; pixels closer
/// than r0 but outside the roi fall into ring 0. Sectors are uniform angular
/// bins starting at angle -pi.
RetinaGeometry build_retina_geometry(std::size_t frame_h, std::size_t frame_w, const Roi& roi,
                                     std::size_t rings = RetinaGeometry::kDefaultRings,
                                     std::size_t sectors = RetinaGeometry::kDefaultSectors);

/// Frame-sized stack whose roi holds roi_fill and whose periphery cells each
/// carry one fair bit per pattern drawn from rng.substream(t).
PatternStack compose_retina_stack(const RetinaGeometry& geometry, const PatternStack& roi_fill,
                                  const RngSpec& rng);

nlohmann::json geometry_to_json(const RetinaGeometry& geometry);
RetinaGeometry geometry_from_json(const nlohmann::json& doc);
void save_geometry(const RetinaGeometry& geometry, const std::filesystem::path& path);

}  // namespace rgi
