#pragma once

/// @file planner.hpp
/// The inverse problem: given a desired post-impact force on a target,
/// derive the antecedent direct force — which object to push, where to
/// aim, how hard — respecting blockers, masses, and contact geometry.
/// Ball plans are single-hop ghost-ball shots; domino plans select an
/// upstream domino whose cascade reaches the target.

#include "goalforge/scene.hpp"

#include <map>
#include <string>
#include <vector>

namespace gf {

/// Launch directions from a projectile center that guarantee contact
/// with the target disc.
struct AimWindow {
    double center_angle = 0.0; // radians, toward the target center
    double half_angle = 0.0;   // asin((r_p + r_t) / d), in (0, pi/2]
};

enum class RejectReason { Blocked, OutOfRange, InsufficientMassLeverage };

const char* to_string(RejectReason reason);

struct RejectedCandidate {
    std::string id;
    RejectReason reason = RejectReason::OutOfRange;
    std::string blocker_id; // set when reason == Blocked
};

struct PlanResult {
    ForceSpec force;
    double predicted_collision_time = 0.0; // seconds
    double predicted_goal_magnitude = 0.0; // normalized [0,1]
    bool feasible = false;
    std::vector<RejectedCandidate> rejected_candidates;
};

struct PathBlock {
    bool blocked = false;
    std::string blocker_id;
};

/// Angular window of launch directions hitting the target. Throws
/// already-touching when the discs overlap or touch.
AimWindow aim_window(const Ball& projectile, const Ball& target);

/// True iff the capsule (from->to inflated by sweep_radius) intersects
/// any obstacle footprint or the bounding disc of any object not listed
/// in `ignore`. Returns the first blocker found (obstacles, then balls,
/// dominos, oscillators, in scene order).
PathBlock is_path_blocked(const Scene& scene, Vec2 from, Vec2 to, double sweep_radius,
                          const std::vector<std::string>& ignore = {});

/// Head-on elastic launch speed giving the target speed v_goal:
/// v_p = v_goal * (m_p + m_t) / (2 m_p).
double required_projectile_speed(double m_p, double m_t, double v_goal);

/// Derive a direct force achieving `goal`. Feasible plans round-trip
/// through the simulator: the target's first strike matches the goal
/// direction and magnitude. Infeasible results carry every candidate's
/// rejection reason. Throws unknown-target.
PlanResult plan_goal_force(const Scene& scene, const GoalForceSpec& goal, std::uint64_t seed);

/// n independent seeded draws. Initiator selection is uniform over the
/// feasible set unless `bias` (id -> weight) reweights it; ids absent
/// from the bias map get weight 0 once any bias is given. Throws
/// no-feasible-plan when every candidate is rejected.
std::vector<PlanResult> sample_plans(const Scene& scene, const GoalForceSpec& goal, int n,
                                     std::uint64_t seed,
                                     const std::map<std::string, double>& bias = {});

} // namespace gf
