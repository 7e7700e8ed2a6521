#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>

#include "rgi/image.hpp"
#include "rgi/rng.hpp"

namespace rgi {

/// Families of procedurally drawn scenes used as stand-in corpora.
enum class SceneFamily {
  Blobs,   ///< soft-edged ellipses over fractal texture
  Blocks,  ///< axis-aligned rectangles and bars over fractal texture
};

SceneFamily scene_family_from_string(std::string_view name);
std::string_view to_string(SceneFamily family) noexcept;

/// Rendered values are stretched to span exactly [0, 1].
Image render_scene(SceneFamily family, std::size_t height, std::size_t width, const RngSpec& rng);

/// Writes `count` scenes as img_00000.pgm, img_00001.pgm, ... into `dir`;
/// scene i draws from rng.substream(i).
void write_scene_corpus(const std::filesystem::path& dir, SceneFamily family, std::size_t count,
                        std::size_t height, std::size_t width, const RngSpec& rng);

}  // namespace rgi
