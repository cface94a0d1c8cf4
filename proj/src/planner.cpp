#include "goalforge/planner.hpp"

#include "goalforge/error.hpp"
#include "goalforge/physics.hpp"
#include "goalforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gf {

const char* to_string(RejectReason reason) {
    switch (reason) {
    case RejectReason::Blocked: return "blocked";
    case RejectReason::OutOfRange: return "out-of-range";
    case RejectReason::InsufficientMassLeverage: return "insufficient-mass-leverage";
    }
    return "unknown";
}

AimWindow aim_window(const Ball& projectile, const Ball& target) {
    Vec2 rel = target.position.xy() - projectile.position.xy();
    double d = rel.norm();
    double touch = projectile.radius + target.radius;
    if (d <= touch)
        throw Error(errc::already_touching, "projectile and target discs touch or overlap");
    return {std::atan2(rel.y, rel.x), std::asin(touch / d)};
}

namespace {

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 <= 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double segment_segment_dist(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    Vec2 da = a1 - a0, db = b1 - b0, r = b0 - a0;
    double denom = da.cross(db);
    if (std::abs(denom) > 1e-12) {
        double t = r.cross(db) / denom;
        double s = r.cross(da) / denom;
        if (t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0) return 0.0; // proper crossing
    }
    double d = point_segment_dist(a0, b0, b1);
    d = std::min(d, point_segment_dist(a1, b0, b1));
    d = std::min(d, point_segment_dist(b0, a0, a1));
    d = std::min(d, point_segment_dist(b1, a0, a1));
    return d;
}

bool in_list(const std::vector<std::string>& ids, const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

/// Per-candidate feasibility analysis shared by plan_goal_force and
/// sample_plans, computed once per (scene, goal).
struct CandidatePlan {
    ForceSpec force;
    double collision_time = 0.0;
    double goal_magnitude = 0.0;
};

struct Analysis {
    std::vector<CandidatePlan> feasible;
    std::vector<RejectedCandidate> rejected;
};

Analysis analyze_ball_goal(const Scene& scene, const GoalForceSpec& goal, const Ball& target) {
    Analysis out;
    auto window = goal.time_window.value_or(std::make_pair(2.5, 4.5));
    if (!(window.first < window.second))
        throw Error(errc::bad_config, "goal time window must have start < end");

    Vec2 g_hat = unit_from_angle(goal.direction);
    double span = scene.force_hi - scene.force_lo;
    // the goal magnitude denotes the target's post-impact speed on the
    // domain scale, mirroring chain_outcome
    double v_goal = scene.force_from_normalized(goal.magnitude);
    if (v_goal <= 0.0)
        throw Error(errc::bad_config, "goal maps to a non-positive target speed");

    for (const Ball& p : scene.balls) {
        if (p.id == target.id) continue;
        auto reject = [&](RejectReason r, std::string blocker = {}) {
            out.rejected.push_back({p.id, r, std::move(blocker)});
        };

        // projectile center at the moment of contact (ghost position)
        double touch = p.radius + target.radius;
        Vec2 ghost = target.position.xy() - g_hat * touch;
        Vec2 to_ghost = ghost - p.position.xy();
        double dist = to_ghost.norm();
        if (dist <= 1e-9 || (target.position.xy() - p.position.xy()).norm() <= touch) {
            reject(RejectReason::OutOfRange);
            continue;
        }
        Vec2 d_hat = to_ghost / dist;

        // contact-normal projection: target speed = (2 m_p / (m_p+m_t)) * v_p * kappa
        double kappa = d_hat.dot(g_hat);
        if (kappa <= 1e-6) {
            reject(RejectReason::OutOfRange);
            continue;
        }
        double v_p = required_projectile_speed(p.mass, target.mass, v_goal) / kappa;
        double T = dist / v_p;
        if (T < window.first || T > window.second) {
            reject(RejectReason::OutOfRange);
            continue;
        }

        Vec2 delta_v = d_hat * v_p - p.velocity;
        double impulse = p.mass * delta_v.norm();
        double mu = span > 0.0 ? (impulse - scene.force_lo) / span : 0.0;
        if (mu < 0.0) {
            reject(RejectReason::OutOfRange);
            continue;
        }
        if (mu > 1.0) {
            reject(RejectReason::InsufficientMassLeverage);
            continue;
        }

        PathBlock block = is_path_blocked(scene, p.position.xy(), ghost, p.radius,
                                          {p.id, target.id});
        if (block.blocked) {
            reject(RejectReason::Blocked, block.blocker_id);
            continue;
        }

        CandidatePlan plan;
        plan.force.initiator_id = p.id;
        plan.force.application_point = p.position.xy();
        plan.force.direction = std::atan2(delta_v.y, delta_v.x);
        plan.force.magnitude = mu;
        plan.collision_time = T;
        plan.goal_magnitude = goal.magnitude;
        out.feasible.push_back(std::move(plan));
    }
    return out;
}

Analysis analyze_domino_goal(const Scene& scene, const GoalForceSpec& goal,
                             const Domino& target) {
    Analysis out;
    constexpr double kDirTol = 5.0 * M_PI / 180.0;

    for (const Domino& c : scene.dominos) {
        if (c.id == target.id || c.state != DominoState::Standing) continue;
        auto reject = [&](RejectReason r) { out.rejected.push_back({c.id, r}); };

        double push = scene.force_from_normalized(goal.magnitude);
        double contact_h = 0.75 * c.height;
        if (push < topple_threshold(c, contact_h)) {
            reject(RejectReason::InsufficientMassLeverage);
            continue;
        }

        ForceSpec force;
        force.initiator_id = c.id;
        force.application_point = c.base_center;
        force.direction = goal.direction;
        force.magnitude = goal.magnitude;

        // cascade oracle: does the chain reach the target, arriving in
        // the goal direction?
        SimConfig cfg;
        cfg.duration = 1.0; // events are scheduled up front; frames don't matter
        SimResult sim = simulate(scene, force, cfg);
        auto outcome = chain_outcome(sim, target.id);
        if (!outcome || std::abs(wrap_angle(outcome->direction - goal.direction)) > kDirTol) {
            reject(RejectReason::OutOfRange);
            continue;
        }

        CandidatePlan plan;
        plan.force = force;
        plan.collision_time = outcome->time;
        plan.goal_magnitude = outcome->magnitude;
        out.feasible.push_back(std::move(plan));
    }
    return out;
}

Analysis analyze(const Scene& scene, const GoalForceSpec& goal) {
    if (const Ball* b = scene.find_ball(goal.target_id)) return analyze_ball_goal(scene, goal, *b);
    if (const Domino* d = scene.find_domino(goal.target_id))
        return analyze_domino_goal(scene, goal, *d);
    throw Error(errc::unknown_target, "goal targets unknown object: " + goal.target_id);
}

PlanResult pick(const Analysis& analysis, Rng& rng, const std::map<std::string, double>& bias) {
    PlanResult result;
    result.rejected_candidates = analysis.rejected;
    if (analysis.feasible.empty()) return result;

    std::size_t chosen;
    if (bias.empty()) {
        chosen = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(analysis.feasible.size()) - 1));
    } else {
        std::vector<double> w(analysis.feasible.size(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            auto it = bias.find(analysis.feasible[i].force.initiator_id);
            if (it != bias.end()) {
                if (it->second < 0.0) throw Error(errc::bad_config, "bias weights must be >= 0");
                w[i] = it->second;
                total += w[i];
            }
        }
        if (total <= 0.0)
            throw Error(errc::bad_config, "bias assigns zero weight to every feasible initiator");
        double u = rng.uniform01() * total;
        chosen = w.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc += w[i];
            if (u < acc) {
                chosen = i;
                break;
            }
        }
    }

    const CandidatePlan& plan = analysis.feasible[chosen];
    result.force = plan.force;
    result.predicted_collision_time = plan.collision_time;
    result.predicted_goal_magnitude = plan.goal_magnitude;
    result.feasible = true;
    return result;
}

} // namespace

PathBlock is_path_blocked(const Scene& scene, Vec2 from, Vec2 to, double sweep_radius,
                          const std::vector<std::string>& ignore) {
    if ((to - from).norm() <= 0.0)
        throw Error(errc::bad_config, "is_path_blocked requires from != to");

    for (const Obstacle& ob : scene.obstacles) {
        if (in_list(ignore, ob.id)) continue;
        if (ob.shape == Obstacle::Shape::Segment) {
            if (segment_segment_dist(from, to, ob.a, ob.b) <= sweep_radius + ob.thickness / 2.0)
                return {true, ob.id};
        } else {
            bool inside = from.x >= ob.a.x && from.x <= ob.b.x && from.y >= ob.a.y &&
                          from.y <= ob.b.y;
            Vec2 c00 = ob.a, c11 = ob.b;
            Vec2 c10{c11.x, c00.y}, c01{c00.x, c11.y};
            double d = std::min(std::min(segment_segment_dist(from, to, c00, c10),
                                         segment_segment_dist(from, to, c10, c11)),
                                std::min(segment_segment_dist(from, to, c11, c01),
                                         segment_segment_dist(from, to, c01, c00)));
            if (inside || d <= sweep_radius) return {true, ob.id};
        }
    }
    for (const Ball& b : scene.balls) {
        if (in_list(ignore, b.id)) continue;
        if (point_segment_dist(b.position.xy(), from, to) <= sweep_radius + b.radius)
            return {true, b.id};
    }
    for (const Domino& d : scene.dominos) {
        if (in_list(ignore, d.id)) continue;
        double half_diag = 0.5 * std::hypot(d.width, d.thickness);
        if (point_segment_dist(d.base_center, from, to) <= sweep_radius + half_diag)
            return {true, d.id};
    }
    for (const SwayOscillator& o : scene.oscillators) {
        if (in_list(ignore, o.id)) continue;
        if (point_segment_dist(o.anchor, from, to) <= sweep_radius + o.tip_radius)
            return {true, o.id};
    }
    return {false, {}};
}

double required_projectile_speed(double m_p, double m_t, double v_goal) {
    if (m_p <= 0.0 || m_t <= 0.0)
        throw Error(errc::bad_config, "masses must be positive");
    return v_goal * (m_p + m_t) / (2.0 * m_p);
}

PlanResult plan_goal_force(const Scene& scene, const GoalForceSpec& goal, std::uint64_t seed) {
    Analysis analysis = analyze(scene, goal);
    Rng rng(seed);
    return pick(analysis, rng, {});
}

std::vector<PlanResult> sample_plans(const Scene& scene, const GoalForceSpec& goal, int n,
                                     std::uint64_t seed,
                                     const std::map<std::string, double>& bias) {
    if (n < 1) throw Error(errc::bad_config, "sample_plans requires n >= 1");
    Analysis analysis = analyze(scene, goal);
    if (analysis.feasible.empty())
        throw Error(errc::no_feasible_plan, "every candidate initiator was rejected");
    std::vector<PlanResult> plans;
    plans.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(derive_seed(seed, "plan", static_cast<std::uint64_t>(i)));
        plans.push_back(pick(analysis, rng, bias));
    }
    return plans;
}

} // namespace gf
