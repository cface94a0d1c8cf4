// goalforge: dataset generation, planning, simulation, control-signal
// encoding, evaluation, and overlay rendering from one binary. Every
// subcommand is deterministic given its arguments and seed; errors are
// reported as JSON on stderr with stable kebab-case codes. Exit codes:
// 0 success, 1 input/config error, 2 infeasibility.

#include "goalforge/control.hpp"
#include "goalforge/datagen.hpp"
#include "goalforge/error.hpp"
#include "goalforge/evalmetrics.hpp"
#include "goalforge/physics.hpp"
#include "goalforge/planner.hpp"
#include "goalforge/render.hpp"
#include "goalforge/rng.hpp"
#include "goalforge/scene.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gf;

namespace {

// ---------------------------------------------------------------- plumbing

void emit_error(const std::string& code, const std::string& message, json extra = {}) {
    json err = {{"code", code}, {"message", message}};
    if (!extra.empty())
        for (auto& [k, v] : extra.items()) err[k] = v;
    std::cerr << err.dump() << "\n";
}

int exit_code_for(const std::string& code) {
    return code == errc::no_feasible_plan || code == errc::unknown_target ? 2 : 1;
}

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
    if (seed_opt->count() > 0) return flag_value;
    if (const char* env = std::getenv("GOALFORGE_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw Error(errc::bad_config, std::string("GOALFORGE_SEED is not an integer: ") + env);
        return v;
    }
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write " + path.string());
    out << text;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::bad_config, what + ": " + e.what());
    }
}

// ------------------------------------------------------------ config files

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where) {
    for (auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end())
            throw Error(errc::bad_config, "unknown config key '" + key + "' in " + where);
    }
}

void range2(const json& j, double& lo, double& hi, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw Error(errc::bad_config, key + " must be [lo, hi]");
    lo = j[0].get<double>();
    hi = j[1].get<double>();
}

void irange2(const json& j, int& lo, int& hi, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw Error(errc::bad_config, key + " must be [lo, hi]");
    lo = j[0].get<int>();
    hi = j[1].get<int>();
}

void apply_encoding(EncodingCfg& e, const json& j) {
    expect_keys(j,
                {"sigma_frac", "amplitude", "path_frac_min", "path_frac_max", "duration_min",
                 "duration_max", "mass_sigma_min", "mass_sigma_max", "mass_lo", "mass_hi"},
                "encoding");
    e.sigma_frac = j.value("sigma_frac", e.sigma_frac);
    e.amplitude = j.value("amplitude", e.amplitude);
    e.path_frac_min = j.value("path_frac_min", e.path_frac_min);
    e.path_frac_max = j.value("path_frac_max", e.path_frac_max);
    e.duration_min = j.value("duration_min", e.duration_min);
    e.duration_max = j.value("duration_max", e.duration_max);
    e.mass_sigma_min = j.value("mass_sigma_min", e.mass_sigma_min);
    e.mass_sigma_max = j.value("mass_sigma_max", e.mass_sigma_max);
    e.mass_lo = j.value("mass_lo", e.mass_lo);
    e.mass_hi = j.value("mass_hi", e.mass_hi);
}

void apply_domain(DomainCfg& c, const json& j) {
    expect_keys(j,
                {"image_h", "image_w", "frames", "fps", "domino_count", "ball_count",
                 "miss_count", "oscillator_count", "mass", "ball_radius", "collision_time",
                 "overscale", "domino_spacing", "force_range_dominos", "force_range_balls",
                 "force_range_sway", "max_place_attempts", "encoding"},
                "domain");
    c.image_h = j.value("image_h", c.image_h);
    c.image_w = j.value("image_w", c.image_w);
    c.frames = j.value("frames", c.frames);
    c.fps = j.value("fps", c.fps);
    if (j.contains("domino_count"))
        irange2(j["domino_count"], c.domino_count_min, c.domino_count_max, "domino_count");
    if (j.contains("ball_count"))
        irange2(j["ball_count"], c.ball_count_min, c.ball_count_max, "ball_count");
    if (j.contains("miss_count"))
        irange2(j["miss_count"], c.miss_count_min, c.miss_count_max, "miss_count");
    if (j.contains("oscillator_count"))
        irange2(j["oscillator_count"], c.oscillator_count_min, c.oscillator_count_max,
                "oscillator_count");
    if (j.contains("mass")) range2(j["mass"], c.mass_min, c.mass_max, "mass");
    if (j.contains("ball_radius"))
        range2(j["ball_radius"], c.ball_radius_min, c.ball_radius_max, "ball_radius");
    if (j.contains("collision_time"))
        range2(j["collision_time"], c.collision_time_min, c.collision_time_max, "collision_time");
    if (j.contains("overscale")) range2(j["overscale"], c.overscale_min, c.overscale_max, "overscale");
    if (j.contains("domino_spacing"))
        range2(j["domino_spacing"], c.domino_spacing_min, c.domino_spacing_max, "domino_spacing");
    if (j.contains("force_range_dominos"))
        range2(j["force_range_dominos"], c.force_lo_dominos, c.force_hi_dominos,
               "force_range_dominos");
    if (j.contains("force_range_balls"))
        range2(j["force_range_balls"], c.force_lo_balls, c.force_hi_balls, "force_range_balls");
    if (j.contains("force_range_sway"))
        range2(j["force_range_sway"], c.force_lo_sway, c.force_hi_sway, "force_range_sway");
    c.max_place_attempts = j.value("max_place_attempts", c.max_place_attempts);
    if (j.contains("encoding")) apply_encoding(c.encoding, j["encoding"]);
}

MaskPolicy::Mode mode_from_string(const std::string& name) {
    if (name == "direct-only") return MaskPolicy::Mode::DirectOnly;
    if (name == "goal-only") return MaskPolicy::Mode::GoalOnly;
    if (name == "random-causal") return MaskPolicy::Mode::RandomCausal;
    throw Error(errc::bad_config, "unknown mask mode: " + name);
}

const char* mode_to_string(MaskPolicy::Mode mode) {
    switch (mode) {
    case MaskPolicy::Mode::DirectOnly: return "direct-only";
    case MaskPolicy::Mode::GoalOnly: return "goal-only";
    case MaskPolicy::Mode::RandomCausal: return "random-causal";
    }
    return "unknown";
}

void apply_policy(MaskPolicy& p, const json& j) {
    expect_keys(j, {"mode", "p_goal", "p_massdrop"}, "policy");
    if (j.contains("mode")) p.mode = mode_from_string(j["mode"].get<std::string>());
    p.p_goal = j.value("p_goal", p.p_goal);
    p.p_massdrop = j.value("p_massdrop", p.p_massdrop);
}

void apply_split(SplitSpec& s, const json& j) {
    expect_keys(j, {"dominos", "balls-collide", "balls-miss", "sway"}, "split");
    s.dominos = j.value("dominos", s.dominos);
    s.balls_collide = j.value("balls-collide", s.balls_collide);
    s.balls_miss = j.value("balls-miss", s.balls_miss);
    s.sway = j.value("sway", s.sway);
}

struct FileConfig {
    json domain;
    json policy;
    json split;
};

FileConfig load_config(const std::string& path) {
    FileConfig fc;
    if (path.empty()) return fc;
    json j = parse_json(read_file(path), "config file " + path);
    expect_keys(j, {"domain", "policy", "split"}, "config file");
    if (j.contains("domain")) fc.domain = j["domain"];
    if (j.contains("policy")) fc.policy = j["policy"];
    if (j.contains("split")) fc.split = j["split"];
    return fc;
}

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

json policy_json(const MaskPolicy& p) {
    return {{"mode", mode_to_string(p.mode)}, {"p_goal", p.p_goal}, {"p_massdrop", p.p_massdrop}};
}

// ----------------------------------------------------------- shared pieces

struct SceneArgs {
    std::string scene_path;
    std::string demo;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scene", scene_path, "scene JSON file");
        cmd->add_option("--demo", demo, "canonical demo scene: domino-line, pool-blocker, mass-grid");
    }

    /// Load the scene; demos also supply a default goal and notes.
    Scene load(std::uint64_t seed, GoalForceSpec* goal, std::string* notes) const {
        if (!demo.empty()) {
            DemoScene d = demo_scene(demo, seed);
            if (goal) *goal = d.goal;
            if (notes) *notes = d.notes;
            return d.scene;
        }
        if (scene_path.empty())
            throw Error(errc::bad_config, "need --scene <file> or --demo <name>");
        return load_scene(scene_path);
    }
};

Vec2 object_position(const Scene& scene, const std::string& id) {
    if (const Ball* b = scene.find_ball(id)) return b->position.xy();
    if (const Domino* d = scene.find_domino(id)) return d->base_center;
    if (const SwayOscillator* o = scene.find_oscillator(id)) return o->anchor;
    throw Error(errc::invalid_target, "no ball, domino, or oscillator named " + id);
}

json force_json(const ForceSpec& f) {
    return {{"initiator", f.initiator_id},
            {"application_point", json::array({f.application_point.x, f.application_point.y})},
            {"direction", f.direction},
            {"magnitude", f.magnitude}};
}

json goal_json(const GoalForceSpec& g) {
    json j = {{"target", g.target_id}, {"direction", g.direction}, {"magnitude", g.magnitude}};
    if (g.time_window)
        j["time_window"] = json::array({g.time_window->first, g.time_window->second});
    return j;
}

json events_json(const SimResult& sim) {
    json events = json::array();
    for (const CollisionEvent& ev : sim.events)
        events.push_back({{"time", ev.time},
                          {"a", ev.a},
                          {"b", ev.b},
                          {"normal", json::array({ev.normal.x, ev.normal.y})},
                          {"impulse", ev.impulse},
                          {"receiver_velocity_after",
                           json::array({ev.receiver_velocity_after.x,
                                        ev.receiver_velocity_after.y})}});
    return events;
}

json outcome_json(const std::optional<ChainOutcome>& out) {
    if (!out) return nullptr;
    return {{"time", out->time}, {"direction", out->direction}, {"magnitude", out->magnitude}};
}

json tracks_json(const SimResult& sim) {
    json tracks;
    for (const ObjectTrack& t : sim.tracks) {
        json arr = json::array();
        for (const Vec2& p : t.pixel)
            arr.push_back(json::array({std::round(p.x * 1000.0) / 1000.0,
                                       std::round(p.y * 1000.0) / 1000.0}));
        tracks[t.id] = arr;
    }
    return tracks;
}

json rejected_json(const std::vector<RejectedCandidate>& rejected) {
    json arr = json::array();
    for (const RejectedCandidate& r : rejected) {
        json item = {{"id", r.id}, {"reason", to_string(r.reason)}};
        if (!r.blocker_id.empty()) item["blocker"] = r.blocker_id;
        arr.push_back(item);
    }
    return arr;
}

void write_frames(const fs::path& dir, const std::vector<Image>& frames) {
    fs::create_directories(dir);
    for (std::size_t k = 0; k < frames.size(); ++k) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%05zu.png", k);
        write_png((dir / buf).string(), frames[k]);
    }
}

void print_result(const json& j, const std::string& format,
                  const std::function<void(const json&)>& table) {
    if (format == "table")
        table(j);
    else
        std::cout << j.dump(2) << "\n";
}

void kv_table(const json& j, const std::string& prefix = "") {
    for (auto& [k, v] : j.items()) {
        if (v.is_object()) {
            kv_table(v, prefix + k + ".");
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            std::cout << prefix << k << "  (" << v.size() << " entries)\n";
        } else {
            std::cout << prefix << k << "  " << v.dump() << "\n";
        }
    }
}

// ------------------------------------------------------------- subcommands

struct GenArgs {
    std::string out;
    std::string config;
    std::string family = "all";
    std::string mask_mode;
    std::uint64_t seed = 0;
    int workers = 0;
    int dominos = -1, collide = -1, miss = -1, sway = -1;
    int frames = -1, image = -1;
    double p_goal = -1.0, p_massdrop = -1.0;
    std::string format = "json";
    CLI::Option* seed_opt = nullptr;
};

int cmd_gen(const GenArgs& a) {
    DomainCfg cfg;
    MaskPolicy policy;
    SplitSpec split;

    FileConfig fc = load_config(a.config);
    if (!fc.domain.empty()) apply_domain(cfg, fc.domain);
    if (!fc.policy.empty()) apply_policy(policy, fc.policy);
    if (!fc.split.empty()) apply_split(split, fc.split);

    if (a.frames > 0) cfg.frames = a.frames;
    if (a.image > 0) {
        cfg.image_h = a.image;
        cfg.image_w = a.image;
    }
    if (!a.mask_mode.empty()) policy.mode = mode_from_string(a.mask_mode);
    if (a.p_goal >= 0.0) policy.p_goal = a.p_goal;
    if (a.p_massdrop >= 0.0) policy.p_massdrop = a.p_massdrop;

    if (a.dominos >= 0) split.dominos = a.dominos;
    if (a.collide >= 0) split.balls_collide = a.collide;
    if (a.miss >= 0) split.balls_miss = a.miss;
    if (a.sway >= 0) split.sway = a.sway;

    if (a.family == "dominos") {
        split.balls_collide = split.balls_miss = split.sway = 0;
    } else if (a.family == "balls") {
        split.dominos = split.sway = 0;
    } else if (a.family == "balls-collide") {
        split.dominos = split.balls_miss = split.sway = 0;
    } else if (a.family == "balls-miss") {
        split.dominos = split.balls_collide = split.sway = 0;
    } else if (a.family == "sway") {
        split.dominos = split.balls_collide = split.balls_miss = 0;
    } else if (a.family != "all") {
        throw Error(errc::bad_family, "unknown family: " + a.family);
    }

    std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
    int workers = a.workers > 0
                      ? a.workers
                      : std::max(1u, std::thread::hardware_concurrency());

    std::string manifest = generate_dataset(a.out, split, cfg, policy, seed, workers);

    json resolved = {{"seed", seed},
                     {"workers", workers},
                     {"split",
                      {{"dominos", split.dominos},
                       {"balls-collide", split.balls_collide},
                       {"balls-miss", split.balls_miss},
                       {"sway", split.sway}}},
                     {"domain", domain_json(cfg)},
                     {"policy", policy_json(policy)}};
    write_file(fs::path(a.out) / "config.json", resolved.dump(2) + "\n");

    json result = {{"manifest", manifest},
                   {"out", a.out},
                   {"counts", resolved["split"]},
                   {"total", split.total()},
                   {"config", resolved}};
    print_result(result, a.format, [](const json& j) {
        for (auto& [k, v] : j["counts"].items()) std::cout << k << "  " << v.dump() << "\n";
        std::cout << "total  " << j["total"].dump() << "\n";
        std::cout << "manifest  " << j["manifest"].get<std::string>() << "\n";
    });
    return 0;
}

struct PlanArgs {
    SceneArgs scene;
    std::string target;
    std::string out;
    double direction = 0.0;
    double magnitude = 0.5;
    std::vector<double> window;
    int n = 1;
    std::uint64_t seed = 0;
    bool simulate_plan = false;
    double duration = 5.0;
    double fps = 16.0;
    std::vector<std::string> bias;
    std::string format = "json";
    CLI::Option* seed_opt = nullptr;
    CLI::Option *target_opt = nullptr, *dir_opt = nullptr, *mag_opt = nullptr;
};

int cmd_plan(const PlanArgs& a) {
    std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
    GoalForceSpec goal;
    std::string notes;
    Scene scene = a.scene.load(seed, &goal, &notes);

    if (a.target_opt->count() > 0) goal.target_id = a.target;
    if (a.dir_opt->count() > 0) goal.direction = a.direction;
    if (a.mag_opt->count() > 0) goal.magnitude = a.magnitude;
    if (!a.window.empty()) {
        if (a.window.size() != 2)
            throw Error(errc::bad_config, "--window takes exactly two values");
        goal.time_window = std::make_pair(a.window[0], a.window[1]);
    }
    if (goal.target_id.empty()) throw Error(errc::bad_config, "need --target (or a --demo goal)");

    std::map<std::string, double> bias;
    for (const std::string& spec : a.bias) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw Error(errc::bad_config, "--bias expects id=weight, got: " + spec);
        try {
            bias[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error(errc::bad_config, "--bias weight is not a number: " + spec);
        }
    }

    PlanResult probe = plan_goal_force(scene, goal, seed);
    if (!probe.feasible) {
        emit_error(errc::no_feasible_plan, "every candidate initiator was rejected",
                   {{"rejected", rejected_json(probe.rejected_candidates)}});
        return 2;
    }

    std::vector<PlanResult> plans;
    if (a.n == 1)
        plans.push_back(probe);
    else
        plans = sample_plans(scene, goal, a.n, seed, bias);

    json plans_json = json::array();
    std::map<std::string, std::uint64_t> counts;
    for (const PlanResult& p : plans) {
        plans_json.push_back({{"force", force_json(p.force)},
                              {"predicted_collision_time", p.predicted_collision_time},
                              {"predicted_goal_magnitude", p.predicted_goal_magnitude}});
        counts[p.force.initiator_id]++;
    }

    json result = {{"goal", goal_json(goal)},
                   {"feasible", true},
                   {"plans", plans_json},
                   {"initiator_counts", json(counts)},
                   {"rejected", rejected_json(probe.rejected_candidates)},
                   {"config", {{"seed", seed}, {"n", a.n}}}};
    if (!notes.empty()) result["notes"] = notes;

    std::optional<SimResult> sim;
    if (a.simulate_plan) {
        sim = simulate(scene, plans.front().force, a.duration, a.fps);
        result["simulation"] = {{"frame_count", sim->frame_count},
                                {"fps", sim->fps},
                                {"events", events_json(*sim)},
                                {"outcome", outcome_json(chain_outcome(*sim, goal.target_id))}};
    }

    if (!a.out.empty()) {
        fs::create_directories(a.out);
        if (!sim) sim = simulate(scene, plans.front().force, a.duration, a.fps);

        // conditioning tensor with both causal channels plus mass, unmasked
        Camera cam = scene.camera;
        int f = sim->frame_count;
        EncodingCfg enc;
        Vec3 app{plans.front().force.application_point, 0.0};
        if (const Ball* b = scene.find_ball(plans.front().force.initiator_id))
            app.z = b->radius;
        PixelForce direct_pf =
            project_force(cam, app, Vec3(unit_from_angle(plans.front().force.direction), 0.0),
                          plans.front().force.magnitude);
        ChannelField direct = encode_force_channel(direct_pf.px, direct_pf.angle,
                                                   direct_pf.magnitude, 0, enc, f, cam.image_h,
                                                   cam.image_w);
        Vec3 anchor{object_position(scene, goal.target_id), 0.0};
        if (const Ball* b = scene.find_ball(goal.target_id)) anchor.z = b->radius;
        PixelForce goal_pf = project_force(cam, anchor,
                                           Vec3(unit_from_angle(goal.direction), 0.0),
                                           goal.magnitude);
        ChannelField goal_ch = encode_goal_channel(goal_pf.px, goal_pf.angle, goal_pf.magnitude,
                                                   enc, f, cam.image_h, cam.image_w);
        ControlTensor tensor;
        tensor.f = f;
        tensor.h = cam.image_h;
        tensor.w = cam.image_w;
        tensor.data.assign(static_cast<std::size_t>(f) * 3 * cam.image_h * cam.image_w, 0.0f);
        std::size_t plane = static_cast<std::size_t>(cam.image_h) * cam.image_w;
        for (int k = 0; k < f; ++k) {
            std::memcpy(tensor.plane(k, 0), direct.plane(k), plane * sizeof(float));
            std::memcpy(tensor.plane(k, 1), goal_ch.plane(k), plane * sizeof(float));
        }
        if (!scene.balls.empty()) {
            std::vector<std::pair<Vec2, double>> blobs;
            for (const Ball& b : scene.balls)
                blobs.emplace_back(project_point(cam, b.position).px, b.mass);
            ChannelField mass = encode_mass_channel(blobs, enc, f, cam.image_h, cam.image_w);
            for (int k = 0; k < f; ++k)
                std::memcpy(tensor.plane(k, 2), mass.plane(k), plane * sizeof(float));
        }
        write_tensor(tensor, (fs::path(a.out) / "tensor.gfct").string());

        json full = result;
        full["tracks"] = tracks_json(*sim);
        write_file(fs::path(a.out) / "plan.json", full.dump(2) + "\n");
        write_file(fs::path(a.out) / "config.json", result["config"].dump(2) + "\n");
        result["out"] = a.out;
    }

    print_result(result, a.format, [](const json& j) {
        std::cout << "initiator  count\n";
        for (auto& [k, v] : j["initiator_counts"].items())
            std::cout << k << "  " << v.dump() << "\n";
        for (auto& r : j["rejected"])
            std::cout << "rejected " << r["id"].get<std::string>() << "  "
                      << r["reason"].get<std::string>() << "\n";
    });
    return 0;
}

struct SimArgs {
    SceneArgs scene;
    std::string initiator;
    std::string target;
    std::string out;
    double direction = 0.0;
    double magnitude = 0.5;
    std::vector<double> application;
    double duration = 5.0;
    double fps = 16.0;
    std::uint64_t seed = 0;
    std::string format = "json";
    CLI::Option* seed_opt = nullptr;
    CLI::Option* target_opt = nullptr;
};

int cmd_simulate(const SimArgs& a) {
    std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
    GoalForceSpec goal;
    Scene scene = a.scene.load(seed, &goal, nullptr);
    if (a.target_opt->count() > 0) goal.target_id = a.target;

    ForceSpec force;
    if (!a.initiator.empty()) {
        force.initiator_id = a.initiator;
        force.direction = a.direction;
        force.magnitude = a.magnitude;
        if (!a.application.empty()) {
            if (a.application.size() != 2)
                throw Error(errc::bad_config, "--application takes exactly two values");
            force.application_point = {a.application[0], a.application[1]};
        } else {
            force.application_point = object_position(scene, a.initiator);
        }
    } else if (!goal.target_id.empty()) {
        PlanResult plan = plan_goal_force(scene, goal, seed);
        if (!plan.feasible) {
            emit_error(errc::no_feasible_plan, "every candidate initiator was rejected",
                       {{"rejected", rejected_json(plan.rejected_candidates)}});
            return 2;
        }
        force = plan.force;
    } else {
        throw Error(errc::bad_config, "need --initiator plus force flags, or a goal to plan");
    }

    SimResult sim = simulate(scene, force, a.duration, a.fps);
    json result = {{"frame_count", sim.frame_count},
                   {"fps", sim.fps},
                   {"force", force_json(force)},
                   {"events", events_json(sim)},
                   {"config", {{"seed", seed}, {"duration", a.duration}, {"fps", a.fps}}}};
    if (!goal.target_id.empty())
        result["outcome"] = outcome_json(chain_outcome(sim, goal.target_id));

    if (!a.out.empty()) {
        fs::create_directories(a.out);
        std::vector<Image> frames =
            render_frames(scene, sim, scene.camera, scene.camera.image_h, scene.camera.image_w);
        write_frames(fs::path(a.out) / "frames", frames);
        json full = result;
        full["tracks"] = tracks_json(sim);
        write_file(fs::path(a.out) / "sim.json", full.dump(2) + "\n");
        write_file(fs::path(a.out) / "config.json", result["config"].dump(2) + "\n");
        result["out"] = a.out;
    }

    print_result(result, a.format, [](const json& j) {
        std::cout << "frames  " << j["frame_count"].dump() << "\n";
        std::cout << "time  a  b  impulse\n";
        for (auto& ev : j["events"])
            std::cout << ev["time"].dump() << "  " << ev["a"].get<std::string>() << "  "
                      << ev["b"].get<std::string>() << "  " << ev["impulse"].dump() << "\n";
    });
    return 0;
}

struct EncodeArgs {
    SceneArgs scene;
    std::string initiator;
    std::string target;
    std::string out;
    std::string config;
    std::string mask_mode = "random-causal";
    double direction = 0.0;
    double magnitude = 0.5;
    std::vector<double> application;
    int frames = 81;
    double fps = 16.0;
    double p_goal = -1.0, p_massdrop = -1.0;
    std::uint64_t seed = 0;
    std::string format = "json";
    CLI::Option* seed_opt = nullptr;
    CLI::Option* target_opt = nullptr;
};

int cmd_encode(const EncodeArgs& a) {
    std::uint64_t seed = resolve_seed(a.seed_opt, a.seed);
    GoalForceSpec goal;
    Scene scene = a.scene.load(seed, &goal, nullptr);
    if (a.target_opt->count() > 0) goal.target_id = a.target;

    DomainCfg cfg;
    MaskPolicy policy;
    FileConfig fc = load_config(a.config);
    if (!fc.domain.empty()) apply_domain(cfg, fc.domain);
    if (!fc.policy.empty()) apply_policy(policy, fc.policy);
    policy.mode = mode_from_string(a.mask_mode);
    if (a.p_goal >= 0.0) policy.p_goal = a.p_goal;
    if (a.p_massdrop >= 0.0) policy.p_massdrop = a.p_massdrop;
    cfg.image_h = scene.camera.image_h;
    cfg.image_w = scene.camera.image_w;
    cfg.frames = a.frames;
    cfg.fps = a.fps;

    GenSample sample;
    sample.scene = scene;
    sample.target_id = goal.target_id;
    if (!a.initiator.empty()) {
        sample.force.initiator_id = a.initiator;
        sample.force.direction = a.direction;
        sample.force.magnitude = a.magnitude;
        sample.force.application_point = a.application.empty()
                                             ? object_position(scene, a.initiator)
                                             : Vec2{a.application[0], a.application[1]};
        sample.initiator_id = a.initiator;
    } else if (!goal.target_id.empty()) {
        PlanResult plan = plan_goal_force(scene, goal, seed);
        if (!plan.feasible) {
            emit_error(errc::no_feasible_plan, "every candidate initiator was rejected",
                       {{"rejected", rejected_json(plan.rejected_candidates)}});
            return 2;
        }
        sample.force = plan.force;
        sample.initiator_id = plan.force.initiator_id;
    } else {
        throw Error(errc::bad_config, "need --initiator plus force flags, or a goal to plan");
    }

    SimConfig sim_cfg;
    sim_cfg.duration = (cfg.frames - 1) / cfg.fps;
    sim_cfg.fps = cfg.fps;
    SimResult sim = simulate(scene, sample.force, sim_cfg);
    BuiltRecord rec = build_record(sample, sim, policy, cfg, seed);

    if (a.out.empty()) throw Error(errc::bad_config, "encode requires --out <tensor path>");
    if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
    write_tensor(rec.tensor, a.out);

    json result = {{"out", a.out},
                   {"f", rec.tensor.f},
                   {"h", rec.tensor.h},
                   {"w", rec.tensor.w},
                   {"channels",
                    {{"direct", rec.direct_channel_kept},
                     {"goal", rec.goal_channel_kept},
                     {"mass", rec.mass_channel_kept}}},
                   {"force", force_json(sample.force)},
                   {"config", {{"seed", seed}, {"policy", policy_json(policy)}}}};
    print_result(result, a.format, [](const json& j) { kv_table(j); });
    return 0;
}

struct EvalArgs {
    std::string metric;
    std::string input;
    std::string out;
    std::string format = "json";
};

std::vector<std::uint64_t> parse_counts(const json& j) {
    json arr;
    if (j.is_array())
        arr = j;
    else if (j.is_object() && j.contains("counts"))
        arr = j["counts"];
    else if (j.is_object() && j.contains("initiator_counts"))
        arr = j["initiator_counts"];
    else
        throw Error(errc::bad_config, "counts input must be an array or {counts: [...]}");

    std::vector<std::uint64_t> counts;
    if (arr.is_object()) {
        for (auto& [k, v] : arr.items()) {
            (void)k;
            counts.push_back(v.get<std::uint64_t>());
        }
    } else {
        for (auto& v : arr) counts.push_back(v.get<std::uint64_t>());
    }
    return counts;
}

int cmd_eval(const EvalArgs& a) {
    std::string text = read_file(a.input);
    // an empty trial file means zero trials, not malformed JSON
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    bool blank = std::find_if(text.begin(), text.end(), not_space) == text.end();
    json input = blank ? json::array() : parse_json(text, "eval input " + a.input);

    json report;
    if (a.metric == "diversity") {
        std::vector<std::uint64_t> counts = parse_counts(input);
        double score = diversity_score(counts);
        report = {{"metric", "diversity"},
                  {"support", counts.size()},
                  {"counts", counts},
                  {"score", score}};
    } else if (a.metric == "accuracy") {
        if (!input.is_array()) throw Error(errc::bad_config, "accuracy input must be an array");
        std::vector<TrialLog> logs;
        for (auto& row : input) {
            TrialLog log;
            log.scene_id = row.value("scene", "");
            log.ground_truth = row.value("truth", "");
            if (row.contains("observed") && !row["observed"].is_null())
                log.observed = row["observed"].get<std::string>();
            log.valid = row.value("valid", true);
            logs.push_back(std::move(log));
        }
        AccuracyReport acc = planning_accuracy(logs);
        report = {{"metric", "accuracy"},
                  {"trials", logs.size()},
                  {"valid", acc.valid},
                  {"success", acc.success},
                  {"accuracy_percent", acc.accuracy_percent}};
    } else if (a.metric == "speed") {
        if (!input.is_array()) throw Error(errc::bad_config, "speed input must be an array");
        std::vector<SpeedTrial> trials;
        for (auto& row : input) {
            SpeedTrial t;
            t.m_p = row.at("m_p").get<double>();
            t.m_t = row.at("m_t").get<double>();
            t.projectile_speed = row.at("speed").get<double>();
            t.collision_frame = row.value("collision_frame", 0);
            trials.push_back(t);
        }
        SpeedOrderingReport rep = speed_ordering_check(trials);
        json groups = json::array();
        for (const SpeedGroup& g : rep.groups)
            groups.push_back({{"m_p", g.m_p},
                              {"m_t", g.m_t},
                              {"count", g.count},
                              {"mean_speed", g.mean_speed}});
        json rels = json::array();
        for (const SpeedRelationship& r : rep.relationships)
            rels.push_back({{"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"lhs_mean", r.lhs_mean},
                            {"rhs_mean", r.rhs_mean},
                            {"satisfied", r.satisfied}});
        report = {{"metric", "speed"},
                  {"groups", groups},
                  {"relationships", rels},
                  {"all_satisfied", rep.all_satisfied}};
    } else {
        throw Error(errc::bad_config, "unknown metric: " + a.metric +
                                          " (expected diversity, accuracy, or speed)");
    }

    if (!a.out.empty()) write_file(a.out, report.dump(2) + "\n");

    print_result(report, a.format, [&](const json& j) {
        if (a.metric == "diversity") {
            std::cout << "metric  support  score\n";
            std::cout << "diversity  " << j["support"].dump() << "  " << j["score"].dump()
                      << "\n";
        } else if (a.metric == "accuracy") {
            std::cout << "valid  success  accuracy%\n";
            std::cout << j["valid"].dump() << "  " << j["success"].dump() << "  "
                      << j["accuracy_percent"].dump() << "\n";
        } else {
            std::cout << "m_p  m_t  count  mean_speed\n";
            for (auto& g : j["groups"])
                std::cout << g["m_p"].dump() << "  " << g["m_t"].dump() << "  "
                          << g["count"].dump() << "  " << g["mean_speed"].dump() << "\n";
            std::cout << "lhs  rhs  satisfied\n";
            for (auto& r : j["relationships"])
                std::cout << r["lhs"].get<std::string>() << "  " << r["rhs"].get<std::string>()
                          << "  " << r["satisfied"].dump() << "\n";
        }
    });
    return 0;
}

struct OverlayArgs {
    std::string sample;
    std::string out;
    double alpha = 0.5;
    std::string format = "json";
};

int cmd_overlay(const OverlayArgs& a) {
    fs::path sample(a.sample);
    fs::path tensor_path = sample / "tensor.gfct";
    if (!fs::exists(tensor_path))
        throw Error(errc::missing_tensor, "no tensor.gfct in " + a.sample);
    fs::path frames_dir = sample / "frames";
    if (!fs::exists(frames_dir))
        throw Error(errc::io, "no frames/ directory in " + a.sample);

    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(frames_dir))
        if (entry.path().extension() == ".png") names.push_back(entry.path());
    std::sort(names.begin(), names.end());

    std::vector<Image> frames;
    frames.reserve(names.size());
    for (const fs::path& p : names) frames.push_back(read_png(p.string()));

    ControlTensor tensor = read_tensor(tensor_path.string());
    std::vector<Image> blended = overlay(frames, tensor, a.alpha);

    fs::path out = a.out.empty() ? sample / "overlay" : fs::path(a.out);
    fs::create_directories(out);
    for (std::size_t k = 0; k < blended.size(); ++k)
        write_png((out / names[k].filename()).string(), blended[k]);
    write_file(out / "config.json",
               json{{"sample", a.sample}, {"alpha", a.alpha}}.dump(2) + "\n");

    json result = {{"out", out.string()},
                   {"frames", blended.size()},
                   {"alpha", a.alpha},
                   {"config", {{"sample", a.sample}, {"alpha", a.alpha}}}};
    print_result(result, a.format, [](const json& j) { kv_table(j); });
    return 0;
}

void add_format(CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"goal-force scene generation, planning, and evaluation"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a dataset");
    gen_cmd->add_option("--out", gen.out, "output directory")->required();
    gen.seed_opt = gen_cmd->add_option("--seed", gen.seed, "base seed");
    gen_cmd->add_option("--workers", gen.workers, "worker thread cap");
    gen_cmd->add_option("--config", gen.config, "JSON config file");
    gen_cmd->add_option("--family", gen.family,
                        "restrict to one family: dominos, balls, balls-collide, balls-miss, sway");
    gen_cmd->add_option("--dominos", gen.dominos, "domino sample count");
    gen_cmd->add_option("--collide", gen.collide, "collide sample count");
    gen_cmd->add_option("--miss", gen.miss, "miss sample count");
    gen_cmd->add_option("--sway", gen.sway, "sway sample count");
    gen_cmd->add_option("--frames", gen.frames, "frames per sample");
    gen_cmd->add_option("--image", gen.image, "square image size");
    gen_cmd->add_option("--mask-mode", gen.mask_mode,
                        "direct-only, goal-only, or random-causal");
    gen_cmd->add_option("--p-goal", gen.p_goal, "P(goal kept) in random-causal mode");
    gen_cmd->add_option("--p-massdrop", gen.p_massdrop, "P(mass dropped) in random-causal mode");
    add_format(gen_cmd, gen.format);

    PlanArgs plan;
    CLI::App* plan_cmd = app.add_subcommand("plan", "derive direct forces for a goal force");
    plan.scene.add_to(plan_cmd);
    plan.target_opt = plan_cmd->add_option("--target", plan.target, "goal target object id");
    plan.dir_opt = plan_cmd->add_option("--direction", plan.direction, "goal direction, radians");
    plan.mag_opt = plan_cmd->add_option("--magnitude", plan.magnitude, "goal magnitude in [0,1]");
    plan_cmd->add_option("--window", plan.window, "goal time window, seconds")->expected(2);
    plan_cmd->add_option("--n", plan.n, "number of sampled plans")->check(CLI::PositiveNumber);
    plan.seed_opt = plan_cmd->add_option("--seed", plan.seed, "seed");
    plan_cmd->add_flag("--simulate", plan.simulate_plan, "simulate the first plan");
    plan_cmd->add_option("--duration", plan.duration, "simulation seconds");
    plan_cmd->add_option("--fps", plan.fps, "simulation fps");
    plan_cmd->add_option("--out", plan.out, "write plan.json, tensor.gfct, config.json here");
    plan_cmd->add_option("--bias", plan.bias, "id=weight sampling bias (repeatable)");
    add_format(plan_cmd, plan.format);

    SimArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the physics forward");
    sim.scene.add_to(sim_cmd);
    sim_cmd->add_option("--initiator", sim.initiator, "object receiving the direct force");
    sim_cmd->add_option("--direction", sim.direction, "force direction, radians");
    sim_cmd->add_option("--magnitude", sim.magnitude, "normalized force magnitude");
    sim_cmd->add_option("--application", sim.application, "application point x y")->expected(2);
    sim.target_opt = sim_cmd->add_option("--target", sim.target, "outcome target id");
    sim_cmd->add_option("--duration", sim.duration, "seconds");
    sim_cmd->add_option("--fps", sim.fps, "frames per second");
    sim.seed_opt = sim_cmd->add_option("--seed", sim.seed, "seed (used when planning the force)");
    sim_cmd->add_option("--out", sim.out, "write frames and sim.json here");
    add_format(sim_cmd, sim.format);

    EncodeArgs enc;
    CLI::App* enc_cmd = app.add_subcommand("encode", "build a control tensor");
    enc.scene.add_to(enc_cmd);
    enc_cmd->add_option("--initiator", enc.initiator, "object receiving the direct force");
    enc_cmd->add_option("--direction", enc.direction, "force direction, radians");
    enc_cmd->add_option("--magnitude", enc.magnitude, "normalized force magnitude");
    enc_cmd->add_option("--application", enc.application, "application point x y")->expected(2);
    enc.target_opt = enc_cmd->add_option("--target", enc.target, "goal channel target id");
    enc_cmd->add_option("--frames", enc.frames, "tensor frame count");
    enc_cmd->add_option("--fps", enc.fps, "frames per second");
    enc_cmd->add_option("--mask-mode", enc.mask_mode, "direct-only, goal-only, or random-causal");
    enc_cmd->add_option("--p-goal", enc.p_goal, "P(goal kept) in random-causal mode");
    enc_cmd->add_option("--p-massdrop", enc.p_massdrop, "P(mass dropped) in random-causal mode");
    enc_cmd->add_option("--config", enc.config, "JSON config file");
    enc.seed_opt = enc_cmd->add_option("--seed", enc.seed, "seed");
    enc_cmd->add_option("--out", enc.out, "tensor output path (.gfct)")->required();
    add_format(enc_cmd, enc.format);

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "compute evaluation metrics");
    eval_cmd->add_option("--metric", eval.metric, "diversity, accuracy, or speed")->required();
    eval_cmd->add_option("--input", eval.input, "input JSON file")->required();
    eval_cmd->add_option("--out", eval.out, "also write the report here");
    add_format(eval_cmd, eval.format);

    OverlayArgs ov;
    CLI::App* ov_cmd = app.add_subcommand("overlay", "alpha-blend a control tensor onto frames");
    ov_cmd->add_option("--sample", ov.sample, "sample directory (frames/ + tensor.gfct)")
        ->required();
    ov_cmd->add_option("--alpha", ov.alpha, "blend strength in [0,1]");
    ov_cmd->add_option("--out", ov.out, "output directory (default <sample>/overlay)");
    add_format(ov_cmd, ov.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(errc::bad_config, e.what());
        return 1;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (plan_cmd->parsed()) return cmd_plan(plan);
        if (sim_cmd->parsed()) return cmd_simulate(sim);
        if (enc_cmd->parsed()) return cmd_encode(enc);
        if (eval_cmd->parsed()) return cmd_eval(eval);
        if (ov_cmd->parsed()) return cmd_overlay(ov);
    } catch (const Error& e) {
        emit_error(e.code(), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 0;
}
