#pragma once

/// @file gaussian.hpp
/// 2D Gaussian field evaluation, the shared substrate of every control
/// channel. Pixel (x, y) samples the field at exactly (x, y); no
/// pre-rasterized sprite, no cutoff.

#include "goalforge/vec.hpp"

#include <vector>

namespace gf {

struct GaussianBlobCfg {
    double sigma = 4.0;     // pixels
    double amplitude = 1.0; // peak value, in (0, 1]
};

/// Evaluate amplitude * exp(-|p - center|^2 / (2 sigma^2)) on an h x w
/// grid. Throws bad-config for sigma <= 0 or non-positive dims.
std::vector<float> gaussian_field(Vec2 center, const GaussianBlobCfg& cfg, int h, int w);

} // namespace gf
