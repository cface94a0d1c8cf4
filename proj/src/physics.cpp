#include "goalforge/physics.hpp"

#include "goalforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gf {

std::pair<Vec2, Vec2> elastic_collision(double m1, const Vec2& v1, double m2, const Vec2& v2,
                                        const Vec2& normal) {
    if (std::abs(normal.norm() - 1.0) > 1e-6)
        throw Error(errc::bad_config, "collision normal must be unit-norm");
    double v1n = v1.dot(normal);
    double v2n = v2.dot(normal);
    if (v1n - v2n <= 0.0) return {v1, v2}; // separating or grazing
    double inv = 1.0 / (m1 + m2);
    double v1n_post = ((m1 - m2) * v1n + 2.0 * m2 * v2n) * inv;
    double v2n_post = ((m2 - m1) * v2n + 2.0 * m1 * v1n) * inv;
    return {v1 + normal * (v1n_post - v1n), v2 + normal * (v2n_post - v2n)};
}

double min_impulse_for_collision(double mass, double gap_distance, double T) {
    if (mass <= 0.0 || T <= 0.0 || gap_distance < 0.0)
        throw Error(errc::bad_config, "min_impulse_for_collision: need mass > 0, T > 0, gap >= 0");
    return mass * gap_distance / T;
}

double topple_threshold(const Domino& d, double contact_height) {
    if (contact_height <= 0.0)
        throw Error(errc::bad_config, "topple contact height must be positive");
    const double g = 9.81;
    return d.mass * g * (d.thickness / 2.0) / contact_height;
}

namespace {

constexpr double kTouchEps = 1e-9;

struct BallState {
    std::size_t index; // into scene.balls
    Vec2 p;
    Vec2 v;
    double r;
    double m;
};

struct Toi {
    double t = std::numeric_limits<double>::infinity();
    int kind = -1; // 0 = ball-ball, 1 = ball-obstacle-segment
    std::size_t i = 0, j = 0; // ball indices / (ball, segment)
};

struct ObstacleSegment {
    std::size_t obstacle_index;
    Vec2 a, b;
    double half_thickness;
};

Vec2 closest_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 <= 0.0) return a;
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

/// Earliest root of |dp + dv t| = R in [0, horizon], or +inf.
double sphere_sweep_toi(const Vec2& dp, const Vec2& dv, double R, double horizon) {
    double c = dp.norm2() - R * R;
    double b = 2.0 * dp.dot(dv);
    if (c <= R * R * kTouchEps) {
        // touching already: collide now only if still approaching
        return b < 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double a = dv.norm2();
    if (a <= 0.0) return std::numeric_limits<double>::infinity();
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return std::numeric_limits<double>::infinity();
    double t = (-b - std::sqrt(disc)) / (2.0 * a);
    if (t < 0.0 || t > horizon) return std::numeric_limits<double>::infinity();
    return t;
}

/// Earliest contact of a moving point (radius R capsule around segment)
/// within [0, horizon], verified against the actual closest point.
double segment_sweep_toi(const Vec2& p0, const Vec2& v, const Vec2& a, const Vec2& b, double R,
                         double horizon) {
    double best = std::numeric_limits<double>::infinity();
    double cands[6];
    int n = 0;

    // endpoint circles
    for (const Vec2& c : {a, b}) {
        Vec2 dp = p0 - c;
        double cc = dp.norm2() - R * R;
        double bb = 2.0 * dp.dot(v);
        double aa = v.norm2();
        if (cc <= R * R * kTouchEps) {
            if (bb < 0.0) cands[n++] = 0.0;
            continue;
        }
        if (aa <= 0.0) continue;
        double disc = bb * bb - 4.0 * aa * cc;
        if (disc < 0.0) continue;
        cands[n++] = (-bb - std::sqrt(disc)) / (2.0 * aa);
    }
    // infinite-slab faces
    Vec2 ab = b - a;
    double len = ab.norm();
    if (len > 0.0) {
        Vec2 u = ab / len;
        Vec2 m{-u.y, u.x};
        double s0 = (p0 - a).dot(m);
        double ds = v.dot(m);
        if (std::abs(ds) > 0.0) {
            cands[n++] = (R - s0) / ds;
            cands[n++] = (-R - s0) / ds;
        }
    }

    std::sort(cands, cands + n);
    for (int k = 0; k < n; ++k) {
        double t = cands[k];
        if (t < 0.0 || t > horizon) continue;
        Vec2 p = p0 + v * t;
        Vec2 cp = closest_on_segment(p, a, b);
        Vec2 d = p - cp;
        double dist = d.norm();
        if (dist > R * (1.0 + 1e-9) + 1e-12) continue;
        if (v.dot(d) >= 0.0) continue; // not approaching the surface
        best = t;
        break;
    }
    return best;
}

struct DominoSim {
    std::size_t index;
    DominoState state = DominoState::Standing;
    double start = -1.0;
    Vec2 fall_dir;
};

/// Walk the chain from the struck domino, emitting strike events. Event
/// times are closed-form (per-gap delay), so the whole cascade is
/// resolved up front.
void run_domino_chain(const Scene& scene, std::vector<DominoSim>& doms, std::size_t first,
                      const Vec2& fall_dir, double t0, const SimConfig& cfg,
                      std::vector<CollisionEvent>& events) {
    const double g = scene.gravity;
    doms[first].state = DominoState::Toppling;
    doms[first].start = t0;
    doms[first].fall_dir = fall_dir;

    std::size_t cur = first;
    double t_cur = t0;
    Vec2 dir = fall_dir;
    while (true) {
        const Domino& dc = scene.dominos[doms[cur].index];
        // nearest standing domino ahead with lateral face overlap
        std::size_t next = doms.size();
        double best_axial = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < doms.size(); ++k) {
            if (doms[k].state != DominoState::Standing) continue;
            const Domino& dk = scene.dominos[doms[k].index];
            Vec2 rel = dk.base_center - dc.base_center;
            double axial = rel.dot(dir);
            double lateral = std::abs(rel.cross(dir));
            if (axial <= 0.0) continue;
            if (lateral > (dc.width + dk.width) / 2.0) continue;
            if (axial < best_axial) {
                best_axial = axial;
                next = k;
            }
        }
        if (next == doms.size()) break;

        const Domino& dn = scene.dominos[doms[next].index];
        double spacing = best_axial - (dc.thickness + dn.thickness) / 2.0;
        if (spacing >= dc.height) break; // out of reach, chain stops
        spacing = std::max(spacing, 1e-6);

        double contact_h = std::min(std::sqrt(std::max(dc.height * dc.height - spacing * spacing, 0.0)),
                                    dn.height);
        if (contact_h <= 0.0) break;
        // quasi-static estimate of the falling domino's push at contact
        double delivered = dc.mass * g * dc.height / (2.0 * spacing);
        if (delivered < topple_threshold(dn, contact_h)) break;

        double tau = spacing / (2.0 * dc.height); // v_topple = 2*height per second
        double t_next = t_cur + tau;
        doms[next].state = DominoState::Toppling;
        doms[next].start = t_next;
        doms[next].fall_dir = dir;

        CollisionEvent ev;
        ev.time = t_next;
        ev.a = dc.id;
        ev.b = dn.id;
        ev.normal = dir;
        ev.impulse = delivered;
        ev.receiver_velocity_after = dir;
        events.push_back(ev);

        cur = next;
        t_cur = t_next;
        (void)cfg;
    }
}

} // namespace

const ObjectTrack* SimResult::track(const std::string& id) const {
    for (const auto& t : tracks)
        if (t.id == id) return &t;
    return nullptr;
}

SimResult simulate(const Scene& scene, const std::optional<ForceSpec>& applied, double duration,
                   double fps) {
    SimConfig cfg;
    cfg.duration = duration;
    cfg.fps = fps;
    return simulate(scene, applied, cfg);
}

SimResult simulate(const Scene& scene, const std::optional<ForceSpec>& applied,
                   const SimConfig& cfg) {
    scene.validate();
    if (cfg.duration <= 0.0 || cfg.fps <= 0.0)
        throw Error(errc::bad_config, "duration and fps must be positive");
    if (cfg.duration * cfg.fps > 1024.0)
        throw Error(errc::bad_config, "duration * fps exceeds the 1024-frame cap");

    const int frames = static_cast<int>(std::lround(cfg.duration * cfg.fps)) + 1;

    SimResult result;
    result.frame_count = frames;
    result.fps = cfg.fps;
    result.force_lo = scene.force_lo;
    result.force_hi = scene.force_hi;

    std::vector<BallState> balls;
    balls.reserve(scene.balls.size());
    for (std::size_t i = 0; i < scene.balls.size(); ++i) {
        const Ball& b = scene.balls[i];
        balls.push_back({i, b.position.xy(), b.velocity, b.radius, b.mass});
    }
    std::vector<DominoSim> doms;
    doms.reserve(scene.dominos.size());
    for (std::size_t i = 0; i < scene.dominos.size(); ++i) doms.push_back({i});

    std::vector<Vec2> osc_v0(scene.oscillators.size(), Vec2{});

    // obstacle footprints as capsule segments (boxes decompose to edges)
    std::vector<ObstacleSegment> segs;
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const Obstacle& ob = scene.obstacles[i];
        if (ob.shape == Obstacle::Shape::Segment) {
            segs.push_back({i, ob.a, ob.b, ob.thickness / 2.0});
        } else {
            Vec2 c00 = ob.a, c11 = ob.b;
            Vec2 c10{c11.x, c00.y}, c01{c00.x, c11.y};
            segs.push_back({i, c00, c10, 0.0});
            segs.push_back({i, c10, c11, 0.0});
            segs.push_back({i, c11, c01, 0.0});
            segs.push_back({i, c01, c00, 0.0});
        }
    }

    // apply the direct force at t = 0
    if (applied) {
        const ForceSpec& f = *applied;
        double physical = scene.force_from_normalized(f.magnitude);
        Vec2 dir = unit_from_angle(f.direction);
        bool found = false;
        for (auto& b : balls) {
            if (scene.balls[b.index].id == f.initiator_id) {
                b.v += dir * (physical / b.m);
                found = true;
                break;
            }
        }
        if (!found) {
            for (std::size_t k = 0; k < doms.size(); ++k) {
                const Domino& d = scene.dominos[doms[k].index];
                if (d.id != f.initiator_id) continue;
                found = true;
                double contact_h = cfg.domino_contact_height_frac * d.height;
                if (physical >= topple_threshold(d, contact_h)) {
                    // the chain runs along the facing axis, on the pushed side
                    Vec2 axis = unit_from_angle(d.facing);
                    double s = dir.dot(axis) >= 0.0 ? 1.0 : -1.0;
                    run_domino_chain(scene, doms, k, axis * s, 0.0, cfg, result.events);
                }
                break;
            }
        }
        if (!found) {
            for (std::size_t k = 0; k < scene.oscillators.size(); ++k) {
                if (scene.oscillators[k].id != f.initiator_id) continue;
                found = true;
                osc_v0[k] = dir * physical; // unit effective mass
                break;
            }
        }
        if (!found)
            throw Error(errc::invalid_target, "force targets unknown object: " + f.initiator_id);
    }

    // tracks
    for (const auto& b : scene.balls)
        result.tracks.push_back({b.id, ObjectKind::Ball, {}, {}, {}});
    for (const auto& d : scene.dominos)
        result.tracks.push_back({d.id, ObjectKind::Domino, {}, {}, {}});
    for (const auto& o : scene.oscillators)
        result.tracks.push_back({o.id, ObjectKind::Oscillator, {}, {}, {}});
    for (auto& t : result.tracks) {
        t.world.reserve(frames);
        t.pixel.reserve(frames);
        t.aux.reserve(frames);
    }
    for (std::size_t k = 0; k < doms.size(); ++k)
        if (doms[k].state != DominoState::Standing)
            result.tracks[balls.size() + k].fall_dir = doms[k].fall_dir;

    auto capture = [&](double t) {
        std::size_t ti = 0;
        for (const auto& b : balls) {
            ObjectTrack& tr = result.tracks[ti++];
            tr.world.push_back(b.p);
            tr.pixel.push_back(project_point(scene.camera, Vec3(b.p, b.r)).px);
            tr.aux.push_back(0.0);
        }
        for (const auto& d : doms) {
            const Domino& dd = scene.dominos[d.index];
            ObjectTrack& tr = result.tracks[ti++];
            double progress = 0.0;
            if (d.state != DominoState::Standing && t >= d.start)
                progress = std::min((t - d.start) / cfg.domino_fall_duration, 1.0);
            tr.world.push_back(dd.base_center);
            tr.pixel.push_back(project_point(scene.camera, Vec3(dd.base_center, 0.0)).px);
            tr.aux.push_back(progress);
        }
        for (std::size_t k = 0; k < scene.oscillators.size(); ++k) {
            const SwayOscillator& o = scene.oscillators[k];
            ObjectTrack& tr = result.tracks[ti++];
            Vec2 disp{};
            double v0 = osc_v0[k].norm();
            if (v0 > 0.0 && t > 0.0) {
                double omega = o.natural_frequency;
                double zeta = o.damping_ratio;
                double omega_d = omega * std::sqrt(1.0 - zeta * zeta);
                double amp = (v0 / omega_d) * std::exp(-zeta * omega * t) * std::sin(omega_d * t);
                disp = osc_v0[k].normalized() * amp;
            }
            Vec2 tip = o.anchor + disp;
            tr.world.push_back(tip);
            tr.pixel.push_back(project_point(scene.camera, Vec3(tip, 0.0)).px);
            tr.aux.push_back(0.0);
        }
    };

    const double dt = 1.0 / (cfg.substeps_per_frame * cfg.fps);
    const double damping_scale =
        scene.linear_damping > 0.0 ? std::exp(-scene.linear_damping * dt) : 1.0;

    for (int frame = 0; frame < frames; ++frame) {
        double t_frame = static_cast<double>(frame) / cfg.fps;
        capture(t_frame);
        if (frame == frames - 1) break;

        for (int sub = 0; sub < cfg.substeps_per_frame; ++sub) {
            double t_sub = t_frame + sub * dt;
            double remaining = dt;
            int iters = 0;
            while (remaining > 0.0) {
                Toi first;
                for (std::size_t i = 0; i < balls.size(); ++i) {
                    for (std::size_t j = i + 1; j < balls.size(); ++j) {
                        double t = sphere_sweep_toi(balls[i].p - balls[j].p, balls[i].v - balls[j].v,
                                                    balls[i].r + balls[j].r, remaining);
                        if (t < first.t) first = {t, 0, i, j};
                    }
                    for (std::size_t k = 0; k < segs.size(); ++k) {
                        double t = segment_sweep_toi(balls[i].p, balls[i].v, segs[k].a, segs[k].b,
                                                     balls[i].r + segs[k].half_thickness, remaining);
                        if (t < first.t) first = {t, 1, i, k};
                    }
                }
                if (!(first.t <= remaining)) {
                    for (auto& b : balls) b.p += b.v * remaining;
                    break;
                }
                for (auto& b : balls) b.p += b.v * first.t;
                double t_event = t_sub + (dt - remaining) + first.t;

                if (first.kind == 0) {
                    BallState& b1 = balls[first.i];
                    BallState& b2 = balls[first.j];
                    Vec2 n = (b2.p - b1.p).normalized();
                    auto [v1p, v2p] = elastic_collision(b1.m, b1.v, b2.m, b2.v, n);
                    // striker = the ball pressing harder into the contact
                    bool first_strikes = b1.v.dot(n) >= -b2.v.dot(n);
                    const Ball& sb = scene.balls[(first_strikes ? b1 : b2).index];
                    const Ball& rb = scene.balls[(first_strikes ? b2 : b1).index];
                    const Vec2& rv_post = first_strikes ? v2p : v1p;
                    const Vec2& rv_pre = first_strikes ? b2.v : b1.v;
                    CollisionEvent ev;
                    ev.time = t_event;
                    ev.a = sb.id;
                    ev.b = rb.id;
                    ev.normal = first_strikes ? n : -n;
                    ev.impulse = rb.mass * (rv_post - rv_pre).norm();
                    ev.receiver_velocity_after = rv_post;
                    result.events.push_back(ev);
                    b1.v = v1p;
                    b2.v = v2p;
                } else {
                    BallState& b = balls[first.i];
                    const ObstacleSegment& sg = segs[first.j];
                    Vec2 cp = closest_on_segment(b.p, sg.a, sg.b);
                    Vec2 n = (b.p - cp).normalized();
                    Vec2 v_post = b.v - n * (2.0 * b.v.dot(n));
                    CollisionEvent ev;
                    ev.time = t_event;
                    ev.a = scene.obstacles[sg.obstacle_index].id;
                    ev.b = scene.balls[b.index].id;
                    ev.normal = n;
                    ev.impulse = b.m * (v_post - b.v).norm();
                    ev.receiver_velocity_after = v_post;
                    result.events.push_back(ev);
                    b.v = v_post;
                }
                remaining -= first.t;
                if (++iters > cfg.max_collision_iters)
                    throw Error(errc::non_convergent,
                                "collision resolution did not converge within a substep");
            }
            if (damping_scale != 1.0)
                for (auto& b : balls) b.v *= damping_scale;
        }
    }

    std::stable_sort(result.events.begin(), result.events.end(),
                     [](const CollisionEvent& x, const CollisionEvent& y) { return x.time < y.time; });
    return result;
}

std::optional<ChainOutcome> chain_outcome(const SimResult& result, const std::string& target_id) {
    const ObjectTrack* track = result.track(target_id);
    if (!track) throw Error(errc::unknown_target, "chain_outcome: unknown target " + target_id);
    for (const auto& ev : result.events) {
        if (ev.b != target_id) continue;
        ChainOutcome out;
        out.time = ev.time;
        out.direction = std::atan2(ev.receiver_velocity_after.y, ev.receiver_velocity_after.x);
        // balls: post-impact speed on the domain scale; dominos: the
        // delivered contact force on the same scale
        double value = track->kind == ObjectKind::Domino ? ev.impulse
                                                         : ev.receiver_velocity_after.norm();
        double span = result.force_hi - result.force_lo;
        double m = span > 0.0 ? (value - result.force_lo) / span : 0.0;
        out.magnitude = std::clamp(m, 0.0, 1.0);
        return out;
    }
    return std::nullopt;
}

} // namespace gf
