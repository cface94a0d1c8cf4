#pragma once

/// @file evalmetrics.hpp
/// Quantitative evaluation: base-2 Jensen-Shannon diversity of initiator
/// choices, planning accuracy over trial logs, and mass-speed ordering
/// checks on measured projectile speeds.

#include "goalforge/vec.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gf {

/// Probability mass function over a finite support.
struct PMF {
    std::vector<double> p;

    static PMF uniform(std::size_t n);
    static PMF from_counts(const std::vector<std::uint64_t>& counts); // throws empty-counts
    void validate() const; // non-negative, sums to 1 within 1e-9
};

/// Jensen-Shannon divergence, log base 2, in [0, 1]. Throws
/// support-mismatch when sizes differ.
double jsd(const PMF& p, const PMF& q);

/// delta(p) = 1 - JSD(p_hat || Unif(N)) over the counts' support.
double diversity_score(const std::vector<std::uint64_t>& counts);

struct TrialLog {
    std::string scene_id;
    std::string ground_truth;             // the valid, unconstrained initiator
    std::optional<std::string> observed;  // initiator actually chosen
    bool valid = true;                    // excluded from the denominator when false
};

struct AccuracyReport {
    int valid = 0;
    int success = 0;
    double accuracy_percent = 0.0;
};

/// accuracy = successes / valid trials; invalid trials are excluded.
/// Throws no-valid-trials.
AccuracyReport planning_accuracy(const std::vector<TrialLog>& logs);

struct SpeedTrial {
    double m_p = 0.0; // projectile mass, kg
    double m_t = 0.0; // target mass, kg
    double projectile_speed = 0.0;
    int collision_frame = 0;
};

struct CollisionDetection {
    int collision_frame = 0;
    double projectile_speed = 0.0; // mean pre-collision frame step * fps
};

/// Collision frame = first frame the target moves faster than eps
/// (units/s, e.g. 1e-3 for world meters or 0.5*fps for pixels);
/// projectile speed averages the frame-to-frame steps strictly before
/// it. Throws no-collision-detected; requires >= 3 frames.
CollisionDetection detect_collision_and_speed(const std::vector<Vec2>& projectile,
                                              const std::vector<Vec2>& target, double fps,
                                              double eps = 1e-3);

struct SpeedGroup {
    double m_p = 0.0;
    double m_t = 0.0;
    int count = 0;
    double mean_speed = 0.0;
};

/// One desired strict ordering mean(lhs) < mean(rhs) between two mass
/// configurations.
struct SpeedRelationship {
    std::string lhs;
    std::string rhs;
    double lhs_mean = 0.0;
    double rhs_mean = 0.0;
    bool satisfied = false;
};

struct SpeedOrderingReport {
    std::vector<SpeedGroup> groups;
    std::vector<SpeedRelationship> relationships;
    bool all_satisfied = false;
};

/// Check the two physical principles across every comparable pair of
/// mass groups: fixed projectile mass, a heavier target needs a faster
/// projectile; fixed target mass, a heavier projectile moves slower.
/// Throws insufficient-groups when no two groups share a fixed mass.
SpeedOrderingReport speed_ordering_check(const std::vector<SpeedTrial>& trials);

} // namespace gf
