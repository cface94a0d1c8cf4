#pragma once

/// @file kernels.hpp
/// Pixel-level inner loops, each in two variants: a serial reference and
/// an OpenMP row-parallel version. The parallel variants must stay
/// bit-identical to the serial ones for any thread count (every output
/// element is computed by exactly one thread with the same expression),
/// which the kernel tests and the bench target both rely on.

#include "goalforge/vec.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace gf::kernels {

/// field[y*w+x] = max(field[y*w+x], amplitude * exp(-d2 / (2 sigma^2)))
/// with d2 the squared distance from pixel center (x, y) to `center`.
/// Evaluated exactly at every pixel; no cutoff radius.
void blob_max_serial(float* field, int h, int w, Vec2 center, double sigma, double amplitude);
void blob_max(float* field, int h, int w, Vec2 center, double sigma, double amplitude);

/// Alpha-blend three control channels (red, green, blue tints) onto an
/// interleaved RGB8 image: out = (1 - a*c) * pixel + a*c * tint, applied
/// per channel in order, rounded once at the end.
void overlay_blend_serial(std::uint8_t* rgb, int h, int w, const float* ch_direct,
                          const float* ch_goal, const float* ch_mass, double alpha);
void overlay_blend(std::uint8_t* rgb, int h, int w, const float* ch_direct,
                   const float* ch_goal, const float* ch_mass, double alpha);

/// Flat-shaded raster primitives, painter's order (later shapes overwrite).
struct RasterShape {
    enum class Kind { Disc, OrientedRect, Capsule };
    Kind kind = Kind::Disc;
    Vec2 a;                // disc/rect center, capsule endpoint A (pixels)
    Vec2 axis;             // rect unit axis; capsule endpoint B
    double r0 = 0.0;       // disc radius | rect half-length | capsule radius
    double r1 = 0.0;       // rect half-thickness
    std::array<std::uint8_t, 3> color{0, 0, 0};
};

/// Fill an RGB8 image with `background` then paint `shapes` in order.
void raster_shapes_serial(std::uint8_t* rgb, int h, int w,
                          const std::array<std::uint8_t, 3>& background,
                          const std::vector<RasterShape>& shapes);
void raster_shapes(std::uint8_t* rgb, int h, int w,
                   const std::array<std::uint8_t, 3>& background,
                   const std::vector<RasterShape>& shapes);

} // namespace gf::kernels
