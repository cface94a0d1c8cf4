#include "goalforge/datagen.hpp"

#include "goalforge/error.hpp"
#include "goalforge/planner.hpp"
#include "goalforge/render.hpp"
#include "goalforge/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <utility>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg(double d) { return d * kPi / 180.0; }

} // namespace

const char* to_string(Family family) {
    switch (family) {
    case Family::Dominos: return "dominos";
    case Family::BallsCollide: return "balls-collide";
    case Family::BallsMiss: return "balls-miss";
    case Family::Sway: return "sway";
    }
    return "unknown";
}

Family family_from_string(const std::string& name) {
    if (name == "dominos") return Family::Dominos;
    if (name == "balls-collide") return Family::BallsCollide;
    if (name == "balls-miss") return Family::BallsMiss;
    if (name == "sway") return Family::Sway;
    throw Error(errc::bad_family, "unknown family: " + name);
}

void DomainCfg::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw Error(errc::bad_config, what);
    };
    need(image_h > 0 && image_w > 0, "image size must be positive");
    need(frames >= 2, "need at least two frames");
    need(fps > 0.0, "fps must be positive");
    need(domino_count_min >= 2 && domino_count_max >= domino_count_min, "bad domino count range");
    need(ball_count_min >= 2 && ball_count_max >= ball_count_min, "bad ball count range");
    need(miss_count_min >= 2 && miss_count_max >= miss_count_min, "bad miss count range");
    need(oscillator_count_min >= 1 && oscillator_count_max >= oscillator_count_min,
         "bad oscillator count range");
    need(mass_min > 0.0 && mass_max > mass_min, "bad mass range");
    need(ball_radius_min > 0.0 && ball_radius_max >= ball_radius_min, "bad radius range");
    need(collision_time_min > 0.0 && collision_time_max > collision_time_min,
         "bad collision time range");
    need(overscale_min >= 1.0 && overscale_max >= overscale_min, "bad overscale range");
    need(domino_spacing_min > 0.0 && domino_spacing_max > domino_spacing_min,
         "bad domino spacing range");
    need(force_hi_dominos > force_lo_dominos && force_hi_balls > force_lo_balls &&
             force_hi_sway > force_lo_sway,
         "force ranges must be ordered");
    need(max_place_attempts > 0, "max_place_attempts must be positive");
    encoding.validate();
}

namespace {

Scene base_scene(const DomainCfg& cfg, double force_lo, double force_hi) {
    Scene s;
    s.camera.image_h = cfg.image_h;
    s.camera.image_w = cfg.image_w;
    s.force_lo = force_lo;
    s.force_hi = force_hi;
    s.mass_lo = cfg.mass_min;
    s.mass_hi = cfg.mass_max;
    return s;
}

const char* kBallColors[] = {"white", "red",  "yellow", "blue",   "green",
                             "orange", "teal", "purple", "magenta"};

/// Placement box keeping every object comfortably inside the camera
/// window (world half-extent 5 at the default 10 m window).
constexpr double kPlaceHalf = 4.5;

GenSample gen_dominos(std::uint64_t seed, const DomainCfg& cfg) {
    Rng rng(seed);
    GenSample sample;
    sample.family = Family::Dominos;
    Scene scene = base_scene(cfg, cfg.force_lo_dominos, cfg.force_hi_dominos);

    int n = static_cast<int>(rng.uniform_int(cfg.domino_count_min, cfg.domino_count_max));
    double height = rng.uniform(0.9, 1.2);
    double thickness = rng.uniform(0.12, 0.18);
    double width = rng.uniform(0.4, 0.6);

    std::vector<double> masses(n);
    for (double& m : masses) m = rng.uniform(cfg.mass_min, cfg.mass_max);

    // face-to-face gaps, each verified to carry the cascade with margin
    double gap_hi = std::min(cfg.domino_spacing_max, 0.70 * height);
    std::vector<double> gaps(n - 1);
    for (int k = 0; k < n - 1; ++k) {
        double gap = cfg.domino_spacing_min;
        for (int attempt = 0; attempt < 100; ++attempt) {
            gap = rng.uniform(cfg.domino_spacing_min, gap_hi);
            double contact_h = std::min(std::sqrt(std::max(height * height - gap * gap, 0.0)),
                                        height);
            if (masses[k] * height * contact_h >= 1.05 * masses[k + 1] * thickness * gap) break;
            gap = cfg.domino_spacing_min;
        }
        gaps[k] = gap;
    }

    double theta = rng.uniform(0.0, 2.0 * kPi);
    bool reverse = rng.bernoulli(0.5);
    Vec2 dir = unit_from_angle(theta);
    double length = 0.0;
    for (double g : gaps) length += g + thickness;

    Vec2 extent = dir * length;
    Vec2 start{rng.uniform(-kPlaceHalf - std::min(0.0, extent.x),
                           kPlaceHalf - std::max(0.0, extent.x)),
               rng.uniform(-kPlaceHalf - std::min(0.0, extent.y),
                           kPlaceHalf - std::max(0.0, extent.y))};
    std::vector<Vec2> centers(n);
    centers[0] = start;
    for (int k = 1; k < n; ++k) centers[k] = centers[k - 1] + dir * (gaps[k - 1] + thickness);

    double chain_angle = theta;
    if (reverse) {
        std::reverse(centers.begin(), centers.end());
        chain_angle = wrap_angle(theta + kPi);
    }

    for (int k = 0; k < n; ++k) {
        Domino d;
        d.id = "domino" + std::to_string(k);
        d.base_center = centers[k];
        d.facing = chain_angle;
        d.width = width;
        d.height = height;
        d.thickness = thickness;
        d.mass = masses[k];
        scene.dominos.push_back(d);
    }

    sample.initiator_id = "domino0";
    sample.adjacent_id = "domino1";
    sample.target_id = "domino" + std::to_string(n - 1);

    sample.force.initiator_id = sample.initiator_id;
    sample.force.application_point = centers[0];
    sample.force.direction = chain_angle;
    sample.force.magnitude = rng.uniform01();

    scene.validate();
    sample.scene = std::move(scene);
    return sample;
}

/// Drop `n` balls into the placement box with surface gaps >= 0.3;
/// index 0 is the projectile. For collide scenes index 1 (the target)
/// keeps a center distance in [2.5, 6.5] from the projectile.
std::vector<Ball> place_balls(Rng& rng, const DomainCfg& cfg, int n, bool pair_constraint,
                              int max_attempts) {
    std::vector<Ball> balls;
    for (int i = 0; i < n; ++i) {
        Ball b;
        b.id = "ball" + std::to_string(i);
        b.radius = rng.uniform(cfg.ball_radius_min, cfg.ball_radius_max);
        b.mass = rng.uniform(cfg.mass_min, cfg.mass_max);
        b.color_tag = kBallColors[i % (sizeof(kBallColors) / sizeof(kBallColors[0]))];

        bool placed = false;
        for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
            Vec2 p;
            if (i == 1 && pair_constraint) {
                double d = rng.uniform(2.5, 6.5);
                p = balls[0].position.xy() + unit_from_angle(rng.uniform(0.0, 2.0 * kPi)) * d;
                if (std::abs(p.x) > kPlaceHalf || std::abs(p.y) > kPlaceHalf) continue;
            } else {
                p = {rng.uniform(-kPlaceHalf, kPlaceHalf), rng.uniform(-kPlaceHalf, kPlaceHalf)};
            }
            bool clear = true;
            for (const Ball& other : balls) {
                if ((p - other.position.xy()).norm() < b.radius + other.radius + 0.3) {
                    clear = false;
                    break;
                }
            }
            if (!clear) continue;
            b.position = Vec3(p, b.radius);
            placed = true;
        }
        if (!placed) throw Error(errc::placement_failure, "could not place " + b.id);
        balls.push_back(b);
    }
    return balls;
}

GenSample gen_collide(std::uint64_t seed, const DomainCfg& cfg, CollideStyle style) {
    Rng rng(seed);
    GenSample sample;
    sample.family = Family::BallsCollide;

    bool straight = style == CollideStyle::StraightOn ||
                    (style == CollideStyle::Auto && rng.bernoulli(0.5));

    for (int attempt = 0; attempt < cfg.max_place_attempts; ++attempt) {
        Scene scene = base_scene(cfg, cfg.force_lo_balls, cfg.force_hi_balls);
        int n = static_cast<int>(rng.uniform_int(cfg.ball_count_min, cfg.ball_count_max));
        scene.balls = place_balls(rng, cfg, n, true, cfg.max_place_attempts);
        const Ball& projectile = scene.balls[0];
        const Ball& target = scene.balls[1];

        AimWindow window = aim_window(projectile, target);
        double alpha = straight ? 0.0 : rng.uniform(-0.95, 0.95) * window.half_angle;
        double aim_angle = window.center_angle + alpha;

        double d = (target.position.xy() - projectile.position.xy()).norm();
        double touch = projectile.radius + target.radius;
        double disc = touch * touch - d * d * std::sin(alpha) * std::sin(alpha);
        double travel = d * std::cos(alpha) - std::sqrt(std::max(disc, 0.0));

        Vec2 from = projectile.position.xy();
        Vec2 contact = from + unit_from_angle(aim_angle) * travel;
        if (is_path_blocked(scene, from, contact, projectile.radius,
                            {projectile.id, target.id})
                .blocked)
            continue;

        double T = rng.uniform(cfg.collision_time_min, cfg.collision_time_max);
        double overscale = rng.uniform(cfg.overscale_min, cfg.overscale_max);
        double impulse = min_impulse_for_collision(projectile.mass, travel, T) * overscale;

        sample.force.initiator_id = projectile.id;
        sample.force.application_point = from;
        sample.force.direction = aim_angle;
        sample.force.magnitude = scene.normalized_from_force(impulse);
        sample.initiator_id = projectile.id;
        sample.target_id = target.id;
        sample.straight_on = straight;
        sample.planned_collision_time = T / overscale;

        scene.validate();
        sample.scene = std::move(scene);
        return sample;
    }
    throw Error(errc::placement_failure, "no unblocked collide layout found");
}

GenSample gen_miss(std::uint64_t seed, const DomainCfg& cfg) {
    Rng rng(seed);
    GenSample sample;
    sample.family = Family::BallsMiss;

    const double margin = deg(1.5);
    for (int attempt = 0; attempt < cfg.max_place_attempts; ++attempt) {
        Scene scene = base_scene(cfg, cfg.force_lo_balls, cfg.force_hi_balls);
        int n = static_cast<int>(rng.uniform_int(cfg.miss_count_min, cfg.miss_count_max));
        scene.balls = place_balls(rng, cfg, n, false, cfg.max_place_attempts);
        const Ball& projectile = scene.balls[0];

        // launch angle outside every ball's contact window, with margin;
        // the scene has no other movers, so clearing the ray is enough
        bool found = false;
        double theta = 0.0;
        for (int k = 0; k < 200 && !found; ++k) {
            theta = rng.uniform(0.0, 2.0 * kPi);
            found = true;
            for (std::size_t i = 1; i < scene.balls.size(); ++i) {
                AimWindow w = aim_window(projectile, scene.balls[i]);
                if (std::abs(wrap_angle(theta - w.center_angle)) < w.half_angle + margin) {
                    found = false;
                    break;
                }
            }
        }
        if (!found) continue;

        sample.force.initiator_id = projectile.id;
        sample.force.application_point = projectile.position.xy();
        sample.force.direction = theta;
        sample.force.magnitude = rng.uniform01();
        sample.initiator_id = projectile.id;
        sample.miss_angle_world = theta;

        scene.validate();
        sample.scene = std::move(scene);
        return sample;
    }
    throw Error(errc::placement_failure, "no clear miss angle found");
}

GenSample gen_sway(std::uint64_t seed, const DomainCfg& cfg) {
    Rng rng(seed);
    GenSample sample;
    sample.family = Family::Sway;
    Scene scene = base_scene(cfg, cfg.force_lo_sway, cfg.force_hi_sway);

    int n = static_cast<int>(rng.uniform_int(cfg.oscillator_count_min, cfg.oscillator_count_max));
    for (int i = 0; i < n; ++i) {
        SwayOscillator o;
        o.id = "sway" + std::to_string(i);
        o.natural_frequency = rng.uniform(2.0, 6.0);
        o.damping_ratio = rng.uniform(0.05, 0.3);

        bool placed = false;
        for (int attempt = 0; attempt < cfg.max_place_attempts && !placed; ++attempt) {
            Vec2 p{rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)};
            bool clear = true;
            for (const SwayOscillator& other : scene.oscillators) {
                if ((p - other.anchor).norm() < 2.0) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                o.anchor = p;
                placed = true;
            }
        }
        if (!placed) throw Error(errc::placement_failure, "could not place " + o.id);
        scene.oscillators.push_back(o);
    }

    int pick = static_cast<int>(rng.uniform_int(0, n - 1));
    sample.initiator_id = scene.oscillators[pick].id;
    sample.force.initiator_id = sample.initiator_id;
    sample.force.application_point = scene.oscillators[pick].anchor;
    sample.force.direction = rng.uniform(0.0, 2.0 * kPi);
    sample.force.magnitude = rng.uniform01();

    scene.validate();
    sample.scene = std::move(scene);
    return sample;
}

} // namespace

GenSample gen_scene(Family family, std::uint64_t seed, const DomainCfg& cfg, CollideStyle style) {
    cfg.validate();
    switch (family) {
    case Family::Dominos: return gen_dominos(seed, cfg);
    case Family::BallsCollide: return gen_collide(seed, cfg, style);
    case Family::BallsMiss: return gen_miss(seed, cfg);
    case Family::Sway: return gen_sway(seed, cfg);
    }
    throw Error(errc::bad_family, "unknown family enum value");
}

namespace {

double application_z(const Scene& scene, const std::string& id) {
    if (const Ball* b = scene.find_ball(id)) return b->radius;
    return 0.0;
}

json track_json(const ObjectTrack& track) {
    json arr = json::array();
    for (const Vec2& p : track.pixel) {
        auto r = [](double v) { return std::round(v * 1000.0) / 1000.0; };
        arr.push_back(json::array({r(p.x), r(p.y)}));
    }
    return arr;
}

/// Trailing motion direction of a track in world coordinates; falls
/// back to `fallback` when the object never moves.
double final_trajectory_angle(const ObjectTrack& track, double fallback) {
    for (std::size_t k = track.world.size(); k-- > 1;) {
        Vec2 step = track.world[k] - track.world[k - 1];
        if (step.norm() > 1e-9) return std::atan2(step.y, step.x);
    }
    return fallback;
}

} // namespace

BuiltRecord build_record(const GenSample& sample, const SimResult& sim, const MaskPolicy& policy,
                         const DomainCfg& cfg, std::uint64_t seed) {
    const Scene& scene = sample.scene;
    Camera cam = scene.camera;
    cam.image_h = cfg.image_h;
    cam.image_w = cfg.image_w;
    cam.validate();

    const int f = sim.frame_count;
    const int h = cfg.image_h;
    const int w = cfg.image_w;

    Vec3 app{sample.force.application_point, application_z(scene, sample.force.initiator_id)};
    PixelForce direct_pf = project_force(cam, app, Vec3(unit_from_angle(sample.force.direction), 0.0),
                                         sample.force.magnitude);
    std::optional<ChannelField> direct =
        encode_force_channel(direct_pf.px, direct_pf.angle, direct_pf.magnitude, 0, cfg.encoding,
                             f, h, w);

    std::optional<ChannelField> goal_field;
    std::optional<ChainOutcome> outcome;
    if (!sample.target_id.empty()) outcome = chain_outcome(sim, sample.target_id);
    if (outcome) {
        const ObjectTrack* track = sim.track(sample.target_id);
        Vec3 anchor{track->world[0], application_z(scene, sample.target_id)};
        PixelForce goal_pf = project_force(cam, anchor,
                                           Vec3(unit_from_angle(outcome->direction), 0.0),
                                           outcome->magnitude);
        goal_field = encode_goal_channel(goal_pf.px, goal_pf.angle, goal_pf.magnitude,
                                         cfg.encoding, f, h, w);
    }

    std::optional<ChannelField> mass_field;
    if (!scene.balls.empty()) {
        std::vector<std::pair<Vec2, double>> blobs;
        for (const Ball& b : scene.balls)
            blobs.emplace_back(project_point(cam, b.position).px, b.mass);
        mass_field = encode_mass_channel(blobs, cfg.encoding, f, h, w);
    }

    std::uint64_t mask_seed = derive_seed(seed, "mask", 0);
    BuiltRecord rec;
    rec.tensor = assemble(direct, goal_field, mass_field, policy, mask_seed);

    // mirror assemble's draws to report what survived the mask
    bool keep_direct = true, keep_goal = false, keep_mass = mass_field.has_value();
    {
        Rng mask_rng(mask_seed);
        switch (policy.mode) {
        case MaskPolicy::Mode::DirectOnly: break;
        case MaskPolicy::Mode::GoalOnly:
            keep_direct = false;
            keep_goal = true;
            break;
        case MaskPolicy::Mode::RandomCausal:
            if (goal_field && direct)
                keep_goal = mask_rng.bernoulli(policy.p_goal);
            else
                keep_goal = goal_field.has_value();
            keep_direct = !keep_goal;
            if (keep_mass) keep_mass = !mask_rng.bernoulli(policy.p_massdrop);
            break;
        }
    }
    rec.direct_channel_kept = keep_direct;
    rec.goal_channel_kept = keep_goal;
    rec.mass_channel_kept = keep_mass;

    rec.frames = render_frames(scene, sim, cam, h, w);

    json meta;
    meta["schema_version"] = 1;
    meta["family"] = to_string(sample.family);
    meta["seed"] = seed;
    meta["fps"] = sim.fps;
    meta["frame_count"] = f;
    meta["image_size"] = json::array({h, w});
    meta["force_range"] = json::array({scene.force_lo, scene.force_hi});
    meta["mass_range"] = json::array({scene.mass_lo, scene.mass_hi});
    meta["scene"] = json::parse(scene_to_json(scene));
    meta["force"] = {{"initiator", sample.force.initiator_id},
                     {"application_point",
                      json::array({sample.force.application_point.x,
                                   sample.force.application_point.y})},
                     {"direction", sample.force.direction},
                     {"magnitude", sample.force.magnitude}};
    meta["roles"] = {{"initiator", sample.initiator_id},
                     {"target", sample.target_id.empty() ? json() : json(sample.target_id)},
                     {"adjacent", sample.adjacent_id.empty() ? json() : json(sample.adjacent_id)}};
    if (outcome)
        meta["outcome"] = {{"time", outcome->time},
                           {"direction", outcome->direction},
                           {"magnitude", outcome->magnitude}};
    else
        meta["outcome"] = nullptr;
    if (sample.family == Family::BallsCollide) {
        meta["straight_on"] = sample.straight_on;
        meta["planned_collision_time"] = sample.planned_collision_time;
    }
    if (sample.family == Family::BallsMiss) {
        meta["launch_angle"] = sample.miss_angle_world;
        meta["final_trajectory_angle"] =
            final_trajectory_angle(*sim.track(sample.initiator_id), sample.miss_angle_world);
    }
    meta["channels"] = {{"direct", keep_direct}, {"goal", keep_goal}, {"mass", keep_mass}};

    json events = json::array();
    for (const CollisionEvent& ev : sim.events)
        events.push_back(
            {{"time", ev.time}, {"a", ev.a}, {"b", ev.b}, {"impulse", ev.impulse}});
    meta["events"] = events;

    json tracks;
    for (const ObjectTrack& track : sim.tracks) tracks[track.id] = track_json(track);
    meta["tracks"] = tracks;

    rec.meta_json = meta.dump(2);
    return rec;
}

namespace {

json encoding_json(const EncodingCfg& e) {
    return {{"sigma_frac", e.sigma_frac},
            {"amplitude", e.amplitude},
            {"path_frac_min", e.path_frac_min},
            {"path_frac_max", e.path_frac_max},
            {"duration_min", e.duration_min},
            {"duration_max", e.duration_max},
            {"mass_sigma_min", e.mass_sigma_min},
            {"mass_sigma_max", e.mass_sigma_max},
            {"mass_lo", e.mass_lo},
            {"mass_hi", e.mass_hi}};
}

json domain_json(const DomainCfg& c) {
    return {{"image_h", c.image_h},
            {"image_w", c.image_w},
            {"frames", c.frames},
            {"fps", c.fps},
            {"domino_count", json::array({c.domino_count_min, c.domino_count_max})},
            {"ball_count", json::array({c.ball_count_min, c.ball_count_max})},
            {"miss_count", json::array({c.miss_count_min, c.miss_count_max})},
            {"oscillator_count", json::array({c.oscillator_count_min, c.oscillator_count_max})},
            {"mass", json::array({c.mass_min, c.mass_max})},
            {"ball_radius", json::array({c.ball_radius_min, c.ball_radius_max})},
            {"collision_time", json::array({c.collision_time_min, c.collision_time_max})},
            {"overscale", json::array({c.overscale_min, c.overscale_max})},
            {"domino_spacing", json::array({c.domino_spacing_min, c.domino_spacing_max})},
            {"force_range_dominos", json::array({c.force_lo_dominos, c.force_hi_dominos})},
            {"force_range_balls", json::array({c.force_lo_balls, c.force_hi_balls})},
            {"force_range_sway", json::array({c.force_lo_sway, c.force_hi_sway})},
            {"max_place_attempts", c.max_place_attempts},
            {"encoding", encoding_json(c.encoding)}};
}

const char* mode_name(MaskPolicy::Mode mode) {
    switch (mode) {
    case MaskPolicy::Mode::DirectOnly: return "direct-only";
    case MaskPolicy::Mode::GoalOnly: return "goal-only";
    case MaskPolicy::Mode::RandomCausal: return "random-causal";
    }
    return "unknown";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(errc::io, "short write to " + path.string());
}

} // namespace

std::string generate_dataset(const std::string& out_dir, const SplitSpec& split,
                             const DomainCfg& cfg, const MaskPolicy& policy,
                             std::uint64_t base_seed, int workers) {
    cfg.validate();
    if (workers < 1) throw Error(errc::bad_config, "workers must be >= 1");

    struct Job {
        Family family;
        int index;
    };
    std::vector<Job> jobs;
    auto add = [&](Family fam, int count) {
        for (int i = 0; i < count; ++i) jobs.push_back({fam, i});
    };
    add(Family::Dominos, split.dominos);
    add(Family::BallsCollide, split.balls_collide);
    add(Family::BallsMiss, split.balls_miss);
    add(Family::Sway, split.sway);

    fs::create_directories(out_dir);

    std::mutex err_mutex;
    std::exception_ptr first_error;

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(jobs.size()); ++i) {
        {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (first_error) continue;
        }
        const Job& job = jobs[static_cast<std::size_t>(i)];
        char idbuf[8];
        std::snprintf(idbuf, sizeof(idbuf), "%06d", job.index);
        fs::path dir = fs::path(out_dir) / to_string(job.family) / idbuf;
        try {
            std::uint64_t seed = derive_seed(base_seed, to_string(job.family),
                                             static_cast<std::uint64_t>(job.index));
            CollideStyle style = CollideStyle::Auto;
            if (job.family == Family::BallsCollide)
                style = job.index % 2 == 0 ? CollideStyle::StraightOn : CollideStyle::Indirect;

            GenSample sample = gen_scene(job.family, seed, cfg, style);
            SimConfig sim_cfg;
            sim_cfg.duration = (cfg.frames - 1) / cfg.fps;
            sim_cfg.fps = cfg.fps;
            SimResult sim = simulate(sample.scene, sample.force, sim_cfg);
            BuiltRecord rec = build_record(sample, sim, policy, cfg, seed);

            fs::create_directories(dir / "frames");
            write_text(dir / "meta.json", rec.meta_json + "\n");
            write_tensor(rec.tensor, (dir / "tensor.gfct").string());
            for (std::size_t k = 0; k < rec.frames.size(); ++k) {
                char fbuf[16];
                std::snprintf(fbuf, sizeof(fbuf), "%05zu.png", k);
                write_png((dir / "frames" / fbuf).string(), rec.frames[k]);
            }
        } catch (...) {
            std::error_code ec;
            fs::remove_all(dir, ec);
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    json manifest;
    manifest["schema_version"] = 1;
    manifest["base_seed"] = base_seed;
    manifest["counts"] = {{"dominos", split.dominos},
                          {"balls-collide", split.balls_collide},
                          {"balls-miss", split.balls_miss},
                          {"sway", split.sway}};
    manifest["total"] = split.total();
    manifest["domain"] = domain_json(cfg);
    manifest["policy"] = {{"mode", mode_name(policy.mode)},
                          {"p_goal", policy.p_goal},
                          {"p_massdrop", policy.p_massdrop}};
    json samples = json::array();
    for (const Job& job : jobs) {
        char idbuf[8];
        std::snprintf(idbuf, sizeof(idbuf), "%06d", job.index);
        samples.push_back({{"family", to_string(job.family)},
                           {"id", idbuf},
                           {"path", std::string(to_string(job.family)) + "/" + idbuf},
                           {"seed", derive_seed(base_seed, to_string(job.family),
                                                static_cast<std::uint64_t>(job.index))}});
    }
    manifest["samples"] = samples;

    fs::path manifest_path = fs::path(out_dir) / "manifest.json";
    write_text(manifest_path, manifest.dump(2) + "\n");
    return manifest_path.string();
}

namespace {

double point_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 <= 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

double seg_to_seg(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    Vec2 da = a1 - a0, db = b1 - b0, r = b0 - a0;
    double denom = da.cross(db);
    if (std::abs(denom) > 1e-12) {
        double t = r.cross(db) / denom;
        double s = r.cross(da) / denom;
        if (t >= 0.0 && t <= 1.0 && s >= 0.0 && s <= 1.0) return 0.0;
    }
    return std::min(std::min(point_to_segment(a0, b0, b1), point_to_segment(a1, b0, b1)),
                    std::min(point_to_segment(b0, a0, a1), point_to_segment(b1, a0, a1)));
}

} // namespace

BlockerSample gen_blocker_scene(std::uint64_t seed, const DomainCfg& cfg, int candidates) {
    if (candidates < 2) throw Error(errc::bad_config, "need at least two candidates");
    Rng rng(seed);

    for (int attempt = 0; attempt < cfg.max_place_attempts; ++attempt) {
        Scene scene = base_scene(cfg, cfg.force_lo_balls, cfg.force_hi_balls);
        const double radius = 0.3;

        Ball target;
        target.id = "target";
        target.color_tag = "red";
        target.radius = radius;
        target.mass = rng.uniform(cfg.mass_min, cfg.mass_max);
        target.position = Vec3({rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, radius);

        double gamma = rng.uniform(0.0, 2.0 * kPi);
        Vec2 g_hat = unit_from_angle(gamma);
        Vec2 ghost = target.position.xy() - g_hat * (2.0 * radius);

        // the unblocked shooter defines the goal magnitude
        double m0 = rng.uniform(cfg.mass_min, cfg.mass_max);
        double alpha0 = rng.uniform(-deg(50.0), deg(50.0));
        double d0 = rng.uniform(2.5, 4.0);
        double T0 = rng.uniform(2.8, 4.2);
        double v_p0 = d0 / T0;
        double v_goal = 2.0 * m0 * v_p0 * std::cos(alpha0) / (m0 + target.mass);

        std::vector<double> angles{alpha0};
        std::vector<Ball> cands;
        Ball valid;
        valid.id = "shooter0";
        valid.color_tag = "white";
        valid.radius = radius;
        valid.mass = m0;
        valid.position = Vec3(ghost - unit_from_angle(gamma + alpha0) * d0, radius);
        cands.push_back(valid);

        bool ok = std::abs(valid.position.x) <= 4.7 && std::abs(valid.position.y) <= 4.7;
        for (int i = 1; i < candidates && ok; ++i) {
            Ball c;
            c.id = "shooter" + std::to_string(i);
            c.color_tag = kBallColors[(i + 2) % (sizeof(kBallColors) / sizeof(kBallColors[0]))];
            c.radius = radius;
            c.mass = rng.uniform(cfg.mass_min, cfg.mass_max);

            bool placed = false;
            for (int inner = 0; inner < 60 && !placed; ++inner) {
                double alpha = rng.uniform(-deg(70.0), deg(70.0));
                bool spaced = true;
                for (double prev : angles)
                    if (std::abs(alpha - prev) < deg(25.0)) spaced = false;
                if (!spaced) continue;

                double T = rng.uniform(2.8, 4.2);
                double v_p = (v_goal * (c.mass + target.mass) / (2.0 * c.mass)) / std::cos(alpha);
                double d = v_p * T;
                if (d < 2.0 || d > 4.6) continue;
                Vec2 pos = ghost - unit_from_angle(gamma + alpha) * d;
                if (std::abs(pos.x) > 4.7 || std::abs(pos.y) > 4.7) continue;

                bool clear = (pos - target.position.xy()).norm() >= 2.0 * radius + 0.2;
                for (const Ball& other : cands)
                    if ((pos - other.position.xy()).norm() < 2.0 * radius + 0.2) clear = false;
                // keep other shooters off the valid corridor
                if (point_to_segment(pos, valid.position.xy(), ghost) < 2.0 * radius + 0.1)
                    clear = false;
                if (!clear) continue;

                c.position = Vec3(pos, radius);
                angles.push_back(alpha);
                placed = true;
            }
            if (!placed) {
                ok = false;
                break;
            }
            cands.push_back(c);
        }
        if (!ok) continue;

        // fence off every distractor's corridor with a wall
        std::vector<Obstacle> walls;
        for (std::size_t i = 1; i < cands.size() && ok; ++i) {
            Vec2 from = cands[i].position.xy();
            Vec2 path = ghost - from;
            Vec2 perp{-path.y, path.x};
            perp = perp.normalized();

            bool placed = false;
            for (int inner = 0; inner < 60 && !placed; ++inner) {
                double frac = rng.uniform(0.3, 0.7);
                double half = rng.uniform(0.6, 1.0);
                Vec2 center = from + path * frac;
                Obstacle wall;
                wall.id = "wall" + std::to_string(i);
                wall.shape = Obstacle::Shape::Segment;
                wall.a = center - perp * half;
                wall.b = center + perp * half;
                wall.thickness = 0.08;

                if (seg_to_seg(wall.a, wall.b, valid.position.xy(), ghost) <= radius + 0.15)
                    continue;
                bool overlaps = false;
                for (const Ball& b : cands)
                    if (point_to_segment(b.position.xy(), wall.a, wall.b) < radius + 0.15)
                        overlaps = true;
                if (point_to_segment(target.position.xy(), wall.a, wall.b) < radius + 0.15)
                    overlaps = true;
                for (const Obstacle& other : walls)
                    if (seg_to_seg(wall.a, wall.b, other.a, other.b) < 0.1) overlaps = true;
                if (overlaps) continue;

                walls.push_back(wall);
                placed = true;
            }
            if (!placed) ok = false;
        }
        if (!ok) continue;

        scene.balls.push_back(target);
        for (const Ball& c : cands) scene.balls.push_back(c);
        scene.obstacles = walls;
        scene.validate();

        GoalForceSpec goal;
        goal.target_id = target.id;
        goal.direction = gamma;
        goal.magnitude = scene.normalized_from_force(v_goal);

        PlanResult plan = plan_goal_force(scene, goal, derive_seed(seed, "verify", attempt));
        if (!plan.feasible || plan.force.initiator_id != valid.id) continue;
        bool all_blocked = true;
        for (std::size_t i = 1; i < cands.size(); ++i) {
            bool found = false;
            for (const RejectedCandidate& r : plan.rejected_candidates)
                if (r.id == cands[i].id && r.reason == RejectReason::Blocked) found = true;
            if (!found) all_blocked = false;
        }
        if (!all_blocked) continue;

        BlockerSample out;
        out.scene = std::move(scene);
        out.goal = goal;
        out.valid_id = valid.id;
        for (std::size_t i = 1; i < cands.size(); ++i) out.distractor_ids.push_back(cands[i].id);
        out.random_baseline = 1.0 / static_cast<double>(candidates);
        return out;
    }
    throw Error(errc::placement_failure, "no verifiable blocker layout found");
}

DemoScene demo_scene(const std::string& name, std::uint64_t seed) {
    if (name == "domino-line") {
        DemoScene demo;
        Scene scene;
        scene.force_lo = 6.0;
        scene.force_hi = 24.0;
        for (int k = 0; k < 6; ++k) {
            Domino d;
            d.id = "domino" + std::to_string(k);
            d.base_center = {-3.5 + 0.65 * k, 0.0};
            d.facing = 0.0;
            d.width = 0.5;
            d.height = 1.0;
            d.thickness = 0.15;
            d.mass = 1.5;
            scene.dominos.push_back(d);
        }
        scene.validate();
        demo.scene = std::move(scene);
        demo.goal.target_id = "domino5";
        demo.goal.direction = 0.0;
        demo.goal.magnitude = 0.5;
        demo.notes = "six-domino line; any of the five upstream dominos can start the cascade";
        return demo;
    }
    if (name == "pool-blocker") {
        DomainCfg cfg;
        BlockerSample blocker = gen_blocker_scene(derive_seed(seed, "pool", 0), cfg, 3);
        DemoScene demo;
        demo.scene = std::move(blocker.scene);
        demo.goal = blocker.goal;
        demo.notes = "three shooters, two fenced off by walls; only " + blocker.valid_id +
                     " has a clear lane";
        return demo;
    }
    if (name == "mass-grid") return demo_mass_grid(1.0, 3.0, seed);
    throw Error(errc::bad_config, "unknown demo scene: " + name);
}

DemoScene demo_mass_grid(double m_p, double m_t, std::uint64_t seed) {
    if (m_p <= 0.0 || m_t <= 0.0) throw Error(errc::bad_config, "masses must be positive");
    Rng rng(seed);
    double d = 4.6 * (1.0 + rng.uniform(-0.05, 0.05));

    DemoScene demo;
    Scene scene;
    scene.force_lo = 0.0;
    scene.force_hi = 8.0;

    Ball target;
    target.id = "target";
    target.color_tag = "red";
    target.radius = 0.3;
    target.mass = m_t;
    target.position = {1.2, 0.0, 0.3};
    Ball cue;
    cue.id = "cue";
    cue.color_tag = "white";
    cue.radius = 0.3;
    cue.mass = m_p;
    cue.position = {1.2 - d, 0.0, 0.3};
    scene.balls = {target, cue};
    scene.validate();

    demo.scene = std::move(scene);
    demo.goal.target_id = "target";
    demo.goal.direction = 0.0;
    demo.goal.magnitude = 0.25;
    demo.goal.time_window = std::make_pair(0.8, 4.8);
    demo.notes = "head-on shot with adjustable masses; the same goal encoding demands different "
                 "cue speeds";
    return demo;
}

} // namespace gf
