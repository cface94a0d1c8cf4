#include "goalforge/render.hpp"

#include "goalforge/error.hpp"
#include "goalforge/kernels.hpp"
#include "goalforge/rng.hpp"

#include <cmath>

namespace gf {

namespace {

struct NamedColor {
    const char* name;
    std::array<std::uint8_t, 3> rgb;
};

constexpr NamedColor kPalette[16] = {
    {"white", {236, 236, 236}},  {"red", {214, 69, 65}},     {"orange", {230, 126, 34}},
    {"yellow", {241, 196, 15}},  {"green", {39, 174, 96}},   {"teal", {22, 160, 133}},
    {"blue", {41, 128, 185}},    {"navy", {44, 62, 110}},    {"purple", {142, 68, 173}},
    {"magenta", {199, 80, 160}}, {"pink", {240, 148, 170}},  {"brown", {141, 90, 55}},
    {"gray", {127, 133, 139}},   {"silver", {189, 195, 199}},{"olive", {128, 128, 48}},
    {"maroon", {120, 40, 48}},
};

} // namespace

std::array<std::uint8_t, 3> color_from_tag(const std::string& tag) {
    for (const NamedColor& c : kPalette)
        if (tag == c.name) return c.rgb;
    return kPalette[hash64(0x1157, tag) % 16].rgb;
}

const std::vector<std::string>& palette_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const NamedColor& c : kPalette) v.emplace_back(c.name);
        return v;
    }();
    return names;
}

namespace {

/// Pixels per meter at a world point (geometric mean of the two image
/// axes, so disc areas stay exact under anisotropic windows).
double pixel_scale(const Camera& camera, const Vec3& p, int h, int w) {
    if (camera.mode == CameraMode::OrthographicTopdown) {
        double sx = w / camera.window_w;
        double sy = h / camera.window_h;
        return std::sqrt(sx * sy);
    }
    Vec3 forward = (camera.look_at - camera.position).normalized();
    double depth = (p - camera.position).dot(forward);
    if (depth <= 1e-9) return 0.0;
    return camera.focal_length / depth;
}

std::array<std::uint8_t, 3> darken(std::array<std::uint8_t, 3> c, double factor) {
    for (auto& v : c) v = static_cast<std::uint8_t>(std::lround(v * factor));
    return c;
}

const std::array<std::uint8_t, 3> kObstacleGray{90, 94, 100};

} // namespace

std::vector<Image> render_frames(const Scene& scene, const SimResult& sim, const Camera& camera,
                                 int h, int w, const RenderCfg& cfg) {
    if (h <= 0 || w <= 0) throw Error(errc::bad_config, "render dims must be positive");

    Camera cam = camera;
    cam.image_h = h;
    cam.image_w = w;
    cam.validate();

    auto to_px = [&](const Vec3& p) { return project_point(cam, p).px; };

    // static obstacle shapes, reused every frame
    std::vector<kernels::RasterShape> static_shapes;
    for (const Obstacle& ob : scene.obstacles) {
        kernels::RasterShape s;
        s.color = kObstacleGray;
        if (ob.shape == Obstacle::Shape::Segment) {
            s.kind = kernels::RasterShape::Kind::Capsule;
            s.a = to_px(Vec3(ob.a, 0.0));
            s.axis = to_px(Vec3(ob.b, 0.0));
            s.r0 = std::max(ob.thickness / 2.0 * pixel_scale(cam, Vec3(ob.a, 0.0), h, w), 1.0);
        } else {
            Vec2 center = (ob.a + ob.b) * 0.5;
            double scale = pixel_scale(cam, Vec3(center, 0.0), h, w);
            s.kind = kernels::RasterShape::Kind::OrientedRect;
            s.a = to_px(Vec3(center, 0.0));
            s.axis = {1.0, 0.0};
            s.r0 = (ob.b.x - ob.a.x) / 2.0 * scale;
            s.r1 = (ob.b.y - ob.a.y) / 2.0 * scale;
        }
        static_shapes.push_back(s);
    }

    std::vector<Image> frames;
    frames.reserve(static_cast<std::size_t>(sim.frame_count));
    for (int frame = 0; frame < sim.frame_count; ++frame) {
        std::vector<kernels::RasterShape> shapes = static_shapes;

        for (const ObjectTrack& tr : sim.tracks) {
            if (tr.kind == ObjectKind::Ball) {
                const Ball* b = scene.find_ball(tr.id);
                Vec3 pos(tr.world[frame], b->radius);
                kernels::RasterShape s;
                s.kind = kernels::RasterShape::Kind::Disc;
                s.a = to_px(pos);
                s.r0 = b->radius * pixel_scale(cam, pos, h, w);
                s.color = color_from_tag(b->color_tag);
                shapes.push_back(s);
            } else if (tr.kind == ObjectKind::Domino) {
                const Domino* d = scene.find_domino(tr.id);
                double progress = tr.aux[frame];
                Vec2 axis = progress > 0.0 ? tr.fall_dir : unit_from_angle(d->facing);
                // the footprint stretches from the base toward the fall
                // direction as the domino comes down
                double len = d->thickness + d->height * progress;
                Vec2 center_w = d->base_center + axis * (0.5 * d->height * progress);
                Vec3 center3(center_w, 0.0);
                double scale = pixel_scale(cam, center3, h, w);

                Vec2 a_px = to_px(Vec3(d->base_center, 0.0));
                Vec2 b_px = to_px(Vec3(d->base_center + axis, 0.0));
                Vec2 axis_px = (b_px - a_px).normalized();

                kernels::RasterShape s;
                s.kind = kernels::RasterShape::Kind::OrientedRect;
                s.a = to_px(center3);
                s.axis = axis_px;
                s.r0 = len / 2.0 * scale;
                s.r1 = d->width / 2.0 * scale;
                s.color = darken(color_from_tag(tr.id), 1.0 - 0.45 * progress);
                shapes.push_back(s);
            } else {
                const SwayOscillator* o = scene.find_oscillator(tr.id);
                Vec3 anchor3(o->anchor, 0.0);
                Vec3 tip3(tr.world[frame], 0.0);
                double scale = pixel_scale(cam, anchor3, h, w);
                kernels::RasterShape stem;
                stem.kind = kernels::RasterShape::Kind::Capsule;
                stem.a = to_px(anchor3);
                stem.axis = to_px(tip3);
                stem.r0 = std::max(0.04 * scale, 1.0);
                stem.color = color_from_tag("olive");
                shapes.push_back(stem);
                kernels::RasterShape tip;
                tip.kind = kernels::RasterShape::Kind::Disc;
                tip.a = to_px(tip3);
                tip.r0 = o->tip_radius * scale;
                tip.color = color_from_tag("green");
                shapes.push_back(tip);
            }
        }

        Image img;
        img.h = h;
        img.w = w;
        img.rgb.resize(static_cast<std::size_t>(h) * w * 3);
        kernels::raster_shapes(img.rgb.data(), h, w, cfg.background, shapes);
        frames.push_back(std::move(img));
    }
    return frames;
}

} // namespace gf
