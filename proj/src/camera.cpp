#include "goalforge/camera.hpp"

#include "goalforge/error.hpp"

#include <algorithm>
#include <cmath>

namespace gf {

void Camera::validate() const {
    if (image_h <= 0 || image_w <= 0)
        throw Error(errc::bad_scene, "camera image size must be positive");
    if (mode == CameraMode::OrthographicTopdown && (window_w <= 0.0 || window_h <= 0.0))
        throw Error(errc::bad_scene, "orthographic world window must be positive");
    if (mode == CameraMode::Pinhole) {
        if ((look_at - position).norm() < 1e-12)
            throw Error(errc::bad_scene, "camera look-at coincides with position");
        if (focal_length <= 0.0)
            throw Error(errc::bad_scene, "pinhole focal length must be positive");
    }
}

namespace {

PixelPoint clamp_to_image(const Camera& camera, Vec2 px) {
    PixelPoint out;
    out.px = px;
    const double umax = static_cast<double>(camera.image_w - 1);
    const double vmax = static_cast<double>(camera.image_h - 1);
    if (px.x < 0.0 || px.y < 0.0 || px.x >= camera.image_w || px.y >= camera.image_h) {
        out.out_of_window = true;
        out.px.x = std::clamp(px.x, 0.0, umax);
        out.px.y = std::clamp(px.y, 0.0, vmax);
    }
    return out;
}

Vec2 project_raw(const Camera& camera, const Vec3& p) {
    if (camera.mode == CameraMode::OrthographicTopdown) {
        // camera (x,y) is the window center; +x -> +u, +y -> -v
        double u = ((p.x - camera.position.x) / camera.window_w + 0.5) * camera.image_w;
        double v = (0.5 - (p.y - camera.position.y) / camera.window_h) * camera.image_h;
        return {u, v};
    }
    Vec3 forward = (camera.look_at - camera.position).normalized();
    Vec3 right = forward.cross(camera.up).normalized();
    if (right.norm2() < 1e-18)
        throw Error(errc::bad_scene, "camera up vector parallel to view direction");
    Vec3 down = forward.cross(right);
    Vec3 rel = p - camera.position;
    double depth = rel.dot(forward);
    if (depth <= 1e-9)
        throw Error(errc::point_behind_camera, "point at or behind the pinhole camera plane");
    double u = 0.5 * camera.image_w + camera.focal_length * rel.dot(right) / depth;
    double v = 0.5 * camera.image_h + camera.focal_length * rel.dot(down) / depth;
    return {u, v};
}

} // namespace

PixelPoint project_point(const Camera& camera, const Vec3& p) {
    return clamp_to_image(camera, project_raw(camera, p));
}

PixelForce project_force(const Camera& camera, const Vec3& application_point,
                         const Vec3& force_dir, double magnitude) {
    if (std::abs(force_dir.norm() - 1.0) > 1e-6)
        throw Error(errc::degenerate_projection, "force direction must be unit-norm");

    const double eps = 1e-5; // meters; small against desk-scale geometry
    Vec2 a = project_raw(camera, application_point);
    Vec2 b = project_raw(camera, application_point + force_dir * eps);
    Vec2 step = b - a;
    if (step.norm() < 1e-9)
        throw Error(errc::degenerate_projection, "projected force step has zero length");

    PixelForce out;
    PixelPoint pt = clamp_to_image(camera, a);
    out.px = pt.px;
    out.out_of_window = pt.out_of_window;
    out.angle = std::atan2(step.y, step.x);
    out.magnitude = magnitude;
    return out;
}

} // namespace gf
