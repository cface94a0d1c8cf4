#pragma once

/// @file render.hpp
/// Schematic flat-shaded rasterization of simulated scenes: balls as
/// colored discs, dominos as oriented rectangles that elongate and
/// darken as they fall, oscillators as anchored stems with tip markers,
/// obstacles in gray, on a solid background.

#include "goalforge/image.hpp"
#include "goalforge/physics.hpp"
#include "goalforge/scene.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gf {

struct RenderCfg {
    std::array<std::uint8_t, 3> background{30, 32, 38};
};

/// Fixed 16-color palette; named tags resolve directly, anything else
/// hashes to a stable palette entry.
std::array<std::uint8_t, 3> color_from_tag(const std::string& tag);
const std::vector<std::string>& palette_names();

/// Rasterize every captured frame at h x w. The camera controls the
/// world-to-pixel map (its own image size is overridden by h, w).
std::vector<Image> render_frames(const Scene& scene, const SimResult& sim, const Camera& camera,
                                 int h, int w, const RenderCfg& cfg = {});

} // namespace gf
