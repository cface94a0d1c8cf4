#pragma once

/// @file scene.hpp
/// Scene state the simulator and planner operate on, plus the force
/// vocabulary. All dynamics are planar: world (x, y) in meters, z only
/// feeds the camera. Force/impulse magnitudes are normalized to [0, 1]
/// against the scene's force_range, mirroring the per-domain relative
/// scale of the control encoding.

#include "goalforge/camera.hpp"
#include "goalforge/vec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gf {

struct Ball {
    std::string id;
    Vec3 position;      // z = radius for top-down scenes
    double radius = 0.3;
    double mass = 1.0;  // kg, Unif(1, 4) in generated data
    Vec2 velocity;      // m/s
    std::string color_tag = "white";
};

enum class DominoState { Standing, Toppling, Fallen };

struct Domino {
    std::string id;
    Vec2 base_center;
    double facing = 0.0; // radians; the axis the chain runs along
    double width = 0.5;
    double height = 1.0;
    double thickness = 0.15;
    double mass = 1.0;
    DominoState state = DominoState::Standing;
    double topple_start = -1.0; // seconds, valid when state != Standing
};

struct SwayOscillator {
    std::string id;
    Vec2 anchor;
    double natural_frequency = 4.0; // rad/s
    double damping_ratio = 0.15;    // in (0,1): underdamped
    Vec2 tip_displacement;
    double tip_radius = 0.3; // rendering only
};

struct Obstacle {
    enum class Shape { Segment, Box };
    std::string id;
    Shape shape = Shape::Segment;
    Vec2 a; // segment endpoint / box min corner
    Vec2 b; // segment endpoint / box max corner
    double thickness = 0.0; // segment only; total width across the segment
};

struct WorldBounds {
    Vec2 min{-6.0, -6.0};
    Vec2 max{6.0, 6.0};
};

/// An immediate direct impulse (balls, oscillators) or push force
/// (dominos) applied at t = 0. `magnitude` is normalized; the physical
/// value is force_lo + magnitude * (force_hi - force_lo) of the scene.
struct ForceSpec {
    std::string initiator_id;
    Vec2 application_point;
    double direction = 0.0; // radians, world frame
    double magnitude = 0.0; // normalized [0, 1]
};

/// The desired post-impact force on a target object.
struct GoalForceSpec {
    std::string target_id;
    double direction = 0.0; // radians, world frame
    double magnitude = 0.5; // normalized [0, 1]
    std::optional<std::pair<double, double>> time_window; // seconds; default (2.5, 4.5)
};

struct Scene {
    std::vector<Ball> balls;
    std::vector<Domino> dominos;
    std::vector<SwayOscillator> oscillators;
    std::vector<Obstacle> obstacles;
    Camera camera;
    WorldBounds bounds;
    double gravity = 9.81;
    double linear_damping = 0.0; // 1/s, off for all oracle checks

    // domain normalization, recorded in every sample's metadata; the
    // one relative scale covers applied impulse (kg*m/s), domino push
    // force (N), and goal outcome speed (m/s)
    double force_lo = 0.0;
    double force_hi = 16.0;
    double mass_lo = 1.0;
    double mass_hi = 4.0;

    /// Unique ids, positive dimensions, no interpenetration at t = 0.
    void validate() const;

    const Ball* find_ball(const std::string& id) const;
    const Domino* find_domino(const std::string& id) const;
    const SwayOscillator* find_oscillator(const std::string& id) const;
    bool has_object(const std::string& id) const;

    double force_from_normalized(double magnitude) const {
        return force_lo + magnitude * (force_hi - force_lo);
    }
    double normalized_from_force(double physical) const {
        double span = force_hi - force_lo;
        double m = span > 0.0 ? (physical - force_lo) / span : 0.0;
        return m < 0.0 ? 0.0 : (m > 1.0 ? 1.0 : m);
    }
};

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

} // namespace gf
