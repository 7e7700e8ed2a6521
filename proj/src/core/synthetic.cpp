#include "rgi/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rgi/error.hpp"

namespace rgi {

SceneFamily scene_family_from_string(std::string_view name) {
  if (name == "blobs") return SceneFamily::Blobs;
  if (name == "blocks") return SceneFamily::Blocks;
  fail(ErrorKind::Argument, "unknown scene family '" + std::string(name) + "'");
}

std::string_view to_string(SceneFamily family) noexcept {
  return family == SceneFamily::Blobs ? "blobs" : "blocks";
}

namespace {

double uniform(RandomStream& s, double lo, double hi) { return lo + (hi - lo) * s.next_unit(); }

// Sum of bilinearly upsampled random grids whose amplitude halves with each
// octave, giving a roughly 1/f spectrum.
std::vector<double> fractal_texture(std::size_t h, std::size_t w, RandomStream& s) {
  std::vector<double> out(h * w, 0.0);
  double amplitude = 1.0;
  for (std::size_t cells = 2; cells <= std::max(h, w); cells *= 2) {
    std::vector<double> grid(cells * cells);
    for (double& g : grid) g = uniform(s, -amplitude, amplitude);
    const auto up = resize_bilinear(grid, cells, cells, h, w);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += up[i];
    amplitude *= 0.5;
  }
  return out;
}

std::vector<double> render_blobs(std::size_t h, std::size_t w, RandomStream& s) {
  const double texture_gain = uniform(s, 0.1, 0.3);
  std::vector<double> out = fractal_texture(h, w, s);
  const double base = uniform(s, 0.2, 0.5);
  for (double& v : out) v = base + texture_gain * v;
  // Objects gather near the frame center, like subject-centered photographs.
  const int blobs = 2 + static_cast<int>(s.next_unit() * 4.0);
  for (int k = 0; k < blobs; ++k) {
    const double cy = uniform(s, -0.25, 0.25);
    const double cx = uniform(s, -0.25, 0.25);
    const double ry = uniform(s, 0.08, 0.3);
    const double rx = uniform(s, 0.08, 0.3);
    const double theta = uniform(s, 0.0, 3.141592653589793);
    const double level = uniform(s, 0.0, 1.0);
    const double edge = uniform(s, 0.02, 0.08);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(h) - 0.5 - cy;
        const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(w) - 0.5 - cx;
        const double u = (ct * x + st * y) / rx;
        const double v = (-st * x + ct * y) / ry;
        const double dist = std::sqrt(u * u + v * v) - 1.0;
        const double alpha = 1.0 / (1.0 + std::exp(dist / edge));
        double& px = out[r * w + c];
        px = (1.0 - alpha) * px + alpha * (level + 0.5 * texture_gain * (px - base));
      }
    }
  }
  return out;
}

std::vector<double> render_blocks(std::size_t h, std::size_t w, RandomStream& s) {
  const double texture_gain = uniform(s, 0.1, 0.3);
  const std::vector<double> texture = fractal_texture(h, w, s);
  std::vector<double> out(h * w, uniform(s, 0.1, 0.9));
  const int shapes = 3 + static_cast<int>(s.next_unit() * 5.0);
  for (int k = 0; k < shapes; ++k) {
    const bool bar = s.next_unit() < 0.4;
    double y0 = uniform(s, 0.0, 0.8);
    double x0 = uniform(s, 0.0, 0.8);
    double y1 = y0 + uniform(s, 0.1, 0.5);
    double x1 = x0 + uniform(s, 0.1, 0.5);
    if (bar) {
      if (s.next_bit()) {
        y0 = 0.0;
        y1 = 1.0;
        x1 = x0 + uniform(s, 0.04, 0.12);
      } else {
        x0 = 0.0;
        x1 = 1.0;
        y1 = y0 + uniform(s, 0.04, 0.12);
      }
    }
    const double level = uniform(s, 0.0, 1.0);
    for (std::size_t r = 0; r < h; ++r) {
      const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(h);
      if (y < y0 || y > y1) continue;
      for (std::size_t c = 0; c < w; ++c) {
        const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(w);
        if (x >= x0 && x <= x1) out[r * w + c] = level;
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += texture_gain * texture[i];
  return out;
}

}  // namespace

Image render_scene(SceneFamily family, std::size_t height, std::size_t width, const RngSpec& rng) {
  require(height >= 1 && width >= 1, "scene dimensions must be positive");
  RandomStream stream(rng);
  auto values = family == SceneFamily::Blobs ? render_blobs(height, width, stream)
                                             : render_blocks(height, width, stream);
  return Image(height, width, minmax_normalize(values));
}

void write_scene_corpus(const std::filesystem::path& dir, SceneFamily family, std::size_t count,
                        std::size_t height, std::size_t width, const RngSpec& rng) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%05zu.pgm", i);
    write_pgm(render_scene(family, height, width, rng.substream(i)), dir / name);
  }
}

}  // namespace rgi
