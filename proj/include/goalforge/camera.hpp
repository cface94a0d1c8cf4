#pragma once

/// @file camera.hpp
/// World-to-pixel projection. Image convention: u grows rightward,
/// v grows downward, origin at the top-left pixel. Pixel angles are
/// atan2(dv, du), i.e. the counterclockwise y-up angle negated for the
/// v-down raster frame, so a world +y step in a top-down scene maps to
/// -pi/2.

#include "goalforge/vec.hpp"

namespace gf {

enum class CameraMode { OrthographicTopdown, Pinhole };

struct Camera {
    CameraMode mode = CameraMode::OrthographicTopdown;
    Vec3 position{0.0, 0.0, 10.0};
    Vec3 look_at{0.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    double focal_length = 100.0; // pixels, pinhole only
    int image_h = 240;
    int image_w = 240;
    double window_w = 10.0; // meters, orthographic only
    double window_h = 10.0;

    void validate() const;
};

struct PixelPoint {
    Vec2 px;
    bool out_of_window = false; // true when clamped to the image rect
};

struct PixelForce {
    Vec2 px;            // projected application point
    double angle = 0.0; // raster-frame angle, radians
    double magnitude = 0.0;
    bool out_of_window = false;
};

/// Project a world point to continuous pixel coordinates in [0,w)x[0,h).
/// Points outside that rect are clamped and flagged; a pinhole point at or
/// behind the camera plane throws point-behind-camera.
PixelPoint project_point(const Camera& camera, const Vec3& p);

/// Project a force: the application point plus the raster angle of an
/// epsilon step along force_dir. Magnitude passes through untouched
/// (normalization is domain-relative). Throws degenerate-projection when
/// the projected step vanishes.
PixelForce project_force(const Camera& camera, const Vec3& application_point,
                         const Vec3& force_dir, double magnitude);

} // namespace gf
