#pragma once

/// @file physics.hpp
/// Forward simulation of the three causal primitives: elastic ball
/// collisions (continuous collision detection over fixed substeps),
/// event-based domino chains, and closed-form damped oscillator sway.
/// One scene simulates single-threaded and deterministically; distinct
/// scenes are safe to simulate concurrently.

#include "goalforge/scene.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gf {

struct CollisionEvent {
    double time = 0.0;   // seconds from clip start
    std::string a;       // striker / upstream object
    std::string b;       // receiver
    Vec2 normal;         // unit, pointing from a into b
    double impulse = 0.0; // kg*m/s delivered to b; contact force (N) for dominos
    Vec2 receiver_velocity_after; // world m/s; fall direction for dominos
};

enum class ObjectKind { Ball, Domino, Oscillator };

struct ObjectTrack {
    std::string id;
    ObjectKind kind = ObjectKind::Ball;
    std::vector<Vec2> world;   // reference point per frame (meters)
    std::vector<Vec2> pixel;   // projected per frame, clamped to image
    std::vector<double> aux;   // domino topple progress in [0,1]; else 0
    Vec2 fall_dir;             // dominos: unit fall direction once toppling
};

struct SimResult {
    int frame_count = 0;
    double fps = 16.0;
    std::vector<CollisionEvent> events; // time-ordered
    std::vector<ObjectTrack> tracks;    // scene order: balls, dominos, oscillators
    double force_lo = 0.0;              // normalization snapshot for chain_outcome
    double force_hi = 1.0;

    const ObjectTrack* track(const std::string& id) const;
};

/// First strike received by the target, as a goal-force measurement.
struct ChainOutcome {
    double time = 0.0;      // seconds
    double direction = 0.0; // world radians of the post-impact motion
    double magnitude = 0.0; // normalized against the scene force range
};

struct SimConfig {
    double duration = 5.0; // seconds; frame_count = round(duration*fps) + 1
    double fps = 16.0;
    int substeps_per_frame = 8;
    int max_collision_iters = 128;
    double domino_contact_height_frac = 0.75; // where a direct push lands
    double domino_fall_duration = 0.6;        // seconds, rendering progress only
};

/// 1D elastic exchange along `normal` (unit, pointing from body 1 to
/// body 2); tangential components pass through. Non-approaching inputs
/// are returned unchanged. Conserves momentum and kinetic energy.
std::pair<Vec2, Vec2> elastic_collision(double m1, const Vec2& v1, double m2, const Vec2& v2,
                                        const Vec2& normal);

/// Impulse that closes `gap_distance` (center distance minus radii) in
/// time T under the constant-velocity motion model: m * gap / T.
double min_impulse_for_collision(double mass, double gap_distance, double T);

/// Quasi-static push force needed to topple a domino when applied at
/// `contact_height`: m g (thickness/2) / contact_height.
double topple_threshold(const Domino& d, double contact_height);

SimResult simulate(const Scene& scene, const std::optional<ForceSpec>& applied,
                   double duration, double fps);
SimResult simulate(const Scene& scene, const std::optional<ForceSpec>& applied,
                   const SimConfig& cfg);

/// First collision event whose receiver is `target_id`, expressed as a
/// normalized goal-force observation; nullopt when the target is never
/// struck. Throws unknown-target for ids absent from the result.
std::optional<ChainOutcome> chain_outcome(const SimResult& result, const std::string& target_id);

} // namespace gf
