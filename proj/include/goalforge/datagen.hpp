#pragma once

/// @file datagen.hpp
/// Procedural generation of the three synthetic families — domino
/// chains, rolling balls (collide and miss), and sway — plus blocker
/// scenes and the canonical demo scenes. Emits frames, control tensors,
/// and JSON metadata; output bytes depend only on (base seed, split,
/// config), never on worker count.

#include "goalforge/control.hpp"
#include "goalforge/image.hpp"
#include "goalforge/physics.hpp"
#include "goalforge/scene.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gf {

enum class Family { Dominos, BallsCollide, BallsMiss, Sway };

const char* to_string(Family family);
Family family_from_string(const std::string& name); // throws bad-family

struct DomainCfg {
    int image_h = 128;
    int image_w = 128;
    int frames = 81;
    double fps = 16.0;

    int domino_count_min = 3, domino_count_max = 10;
    int ball_count_min = 3, ball_count_max = 9;  // collide family
    int miss_count_min = 3, miss_count_max = 5;  // miss family
    int oscillator_count_min = 1, oscillator_count_max = 3;

    double mass_min = 1.0, mass_max = 4.0;              // kg
    double ball_radius_min = 0.25, ball_radius_max = 0.40;
    double collision_time_min = 2.5, collision_time_max = 4.5; // s
    double overscale_min = 1.2, overscale_max = 1.6;
    double domino_spacing_min = 0.40, domino_spacing_max = 0.80; // face gap, m

    // per-family normalization scales; domino lo sits above every
    // topple threshold so magnitude 0 still topples
    double force_lo_dominos = 6.0, force_hi_dominos = 24.0; // N
    double force_lo_balls = 0.0, force_hi_balls = 40.0;     // kg*m/s and m/s
    double force_lo_sway = 0.0, force_hi_sway = 4.0;

    int max_place_attempts = 1000;
    EncodingCfg encoding;

    void validate() const;
};

struct SplitSpec {
    int dominos = 3000;
    int balls_collide = 4500;
    int balls_miss = 1500;
    int sway = 3000;

    int total() const { return dominos + balls_collide + balls_miss + sway; }
};

/// A generated scene with its applied force and the ground-truth
/// annotations the metadata records.
struct GenSample {
    Family family = Family::BallsCollide;
    Scene scene;
    ForceSpec force;
    std::string initiator_id;
    std::string target_id;            // collide/miss target; chain-end domino
    std::string adjacent_id;          // dominos: first contact neighbor
    bool straight_on = false;         // collide only
    double planned_collision_time = 0.0; // collide only, seconds
    double miss_angle_world = 0.0;    // miss only, launch angle, radians
};

enum class CollideStyle { Auto, StraightOn, Indirect };

/// Sample one scene per the family's parameter ranges. Collide samples
/// are guaranteed (by construction) to strike the target; miss samples
/// are aimed outside every ball's contact window. Throws
/// placement-failure after max_place_attempts.
GenSample gen_scene(Family family, std::uint64_t seed, const DomainCfg& cfg,
                    CollideStyle style = CollideStyle::Auto);

/// One sample's on-disk payload.
struct BuiltRecord {
    std::string meta_json; // stable key order, UTF-8
    ControlTensor tensor;
    std::vector<Image> frames;
    bool direct_channel_kept = true;
    bool goal_channel_kept = false;
    bool mass_channel_kept = false;
};

/// Encode channels from the sample and its simulation, apply the
/// masking policy, rasterize frames, and assemble metadata.
BuiltRecord build_record(const GenSample& sample, const SimResult& sim, const MaskPolicy& policy,
                         const DomainCfg& cfg, std::uint64_t seed);

/// Generate `split` samples under <out>/<family>/<id>/ and write
/// <out>/manifest.json last. Returns the manifest path. Worker count
/// caps concurrency and never changes output bytes.
std::string generate_dataset(const std::string& out_dir, const SplitSpec& split,
                             const DomainCfg& cfg, const MaskPolicy& policy,
                             std::uint64_t base_seed, int workers);

/// A planning-accuracy scene: one unblocked initiator, the rest fenced
/// off by obstacles.
struct BlockerSample {
    Scene scene;
    GoalForceSpec goal;
    std::string valid_id;
    std::vector<std::string> distractor_ids;
    double random_baseline = 0.0; // 1 / candidate count
};

BlockerSample gen_blocker_scene(std::uint64_t seed, const DomainCfg& cfg, int candidates = 3);

/// Canonical demo scenes ("domino-line", "pool-blocker", "mass-grid").
struct DemoScene {
    Scene scene;
    GoalForceSpec goal;
    std::string notes;
};

DemoScene demo_scene(const std::string& name, std::uint64_t seed);

/// One mass-grid cell: straight shot with the given masses; the goal
/// carries a fixed normalized magnitude and a wide time window.
DemoScene demo_mass_grid(double m_p, double m_t, std::uint64_t seed);

} // namespace gf
