#pragma once

/// @file control.hpp
/// The f x 3 x h x w control tensor: moving Gaussian blobs for the
/// direct force (channel 0) and goal force (channel 1), static mass
/// blobs (channel 2), the masking curriculum combining them, lossless
/// binary serialization, and alpha-blended overlays.

#include "goalforge/image.hpp"
#include "goalforge/vec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gf {

struct ControlTensor {
    int f = 0;
    int h = 0;
    int w = 0;
    std::vector<float> data; // frame-major, then channel (direct, goal, mass), row, col

    static constexpr int channels = 3;

    std::size_t index(int frame, int channel, int y, int x) const {
        return ((static_cast<std::size_t>(frame) * channels + channel) * h + y) * w + x;
    }
    float at(int frame, int channel, int y, int x) const { return data[index(frame, channel, y, x)]; }
    float& at(int frame, int channel, int y, int x) { return data[index(frame, channel, y, x)]; }

    /// Pointer to one channel plane of one frame (h*w floats).
    const float* plane(int frame, int channel) const { return data.data() + index(frame, channel, 0, 0); }
    float* plane(int frame, int channel) { return data.data() + index(frame, channel, 0, 0); }
};

/// One encoded channel before assembly: f planes of h x w.
struct ChannelField {
    int f = 0;
    int h = 0;
    int w = 0;
    std::vector<float> data; // frame-major

    const float* plane(int frame) const {
        return data.data() + static_cast<std::size_t>(frame) * h * w;
    }
    float* plane(int frame) { return data.data() + static_cast<std::size_t>(frame) * h * w; }
};

/// Affine maps from normalized magnitude/mass to blob geometry. Length
/// fractions are of the image diagonal; mass sigmas are in pixels at the
/// 240-px reference height and scale with h/240.
struct EncodingCfg {
    double sigma_frac = 0.02;     // blob sigma as a fraction of the diagonal
    double amplitude = 1.0;       // blob peak, in (0,1]
    double path_frac_min = 0.05;  // path length at magnitude 0
    double path_frac_max = 0.35;  // path length at magnitude 1
    int duration_min = 12;        // frames at magnitude 0
    int duration_max = 81;        // frames at magnitude 1
    double mass_sigma_min = 6.0;  // px at 240-px height, mass = mass_lo
    double mass_sigma_max = 24.0; // px at 240-px height, mass = mass_hi
    double mass_lo = 1.0;         // kg
    double mass_hi = 4.0;

    void validate() const;
};

struct MaskPolicy {
    enum class Mode { DirectOnly, GoalOnly, RandomCausal };
    Mode mode = Mode::RandomCausal;
    double p_goal = 0.5;     // P(goal channel kept) when both causal channels exist
    double p_massdrop = 0.3; // P(mass channel zeroed), random-causal mode only
};

/// Moving-blob encoding of a force: duration = round(min + magnitude *
/// (max - min)) frames from start_frame, path length affine in magnitude,
/// center advancing linearly along `pixel_angle` (raster frame). Frames
/// outside the active window are zero. Throws duration-overflow when the
/// window does not fit in f frames.
ChannelField encode_force_channel(Vec2 pixel_point, double pixel_angle, double magnitude,
                                  int start_frame, const EncodingCfg& cfg, int f, int h, int w);

/// Same encoding, anchored at the target's initial pixel position and
/// starting at frame 0.
ChannelField encode_goal_channel(Vec2 target_pixel_point, double pixel_angle, double magnitude,
                                 const EncodingCfg& cfg, int f, int h, int w);

/// Static per-object blobs with sigma affine in mass, identical across
/// all frames; overlaps combine by per-pixel maximum. Throws
/// mass-out-of-range for masses outside [mass_lo, mass_hi].
ChannelField encode_mass_channel(const std::vector<std::pair<Vec2, double>>& objects,
                                 const EncodingCfg& cfg, int f, int h, int w);

/// Combine channels under the masking curriculum. Random-causal mode
/// keeps exactly one causal channel (goal with probability p_goal when
/// both exist; pass-through when only one exists) and zeroes the mass
/// channel with probability p_massdrop. Absent channels become zeros.
/// Throws missing-channel when the mode's required channel is absent and
/// dimension-mismatch when present channels disagree in shape.
ControlTensor assemble(const std::optional<ChannelField>& direct,
                       const std::optional<ChannelField>& goal,
                       const std::optional<ChannelField>& mass, const MaskPolicy& policy,
                       std::uint64_t seed);

/// Alpha-blend the tensor onto video frames: channel 0 tints red,
/// 1 green, 2 blue; out = (1 - alpha*c) * pixel + alpha*c * tint.
/// Throws dimension-mismatch unless frames match the tensor's f, h, w.
std::vector<Image> overlay(const std::vector<Image>& frames, const ControlTensor& tensor,
                           double alpha);

/// Binary tensor file: magic "GFCT", then version, f, h, w as 32-bit
/// little-endian unsigned (channels fixed at 3), then float32 LE data.
/// Round-trips are bit-exact. read_tensor throws bad-magic, bad-version,
/// shape-mismatch (truncated or oversized payload), io.
void write_tensor(const ControlTensor& tensor, const std::string& path);
ControlTensor read_tensor(const std::string& path);

} // namespace gf
