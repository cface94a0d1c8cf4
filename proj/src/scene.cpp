#include "goalforge/scene.hpp"

#include "goalforge/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using nlohmann::json;

namespace gf {

namespace {

void check(bool ok, const std::string& what) {
    if (!ok) throw Error(errc::bad_scene, what);
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }
json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec2 vec2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(errc::bad_scene, "expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw Error(errc::bad_scene, "expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

void Scene::validate() const {
    camera.validate();
    check(bounds.max.x > bounds.min.x && bounds.max.y > bounds.min.y, "degenerate world bounds");
    check(force_hi > force_lo, "force range must be ordered");
    check(mass_hi > mass_lo, "mass range must be ordered");

    std::set<std::string> ids;
    auto add_id = [&](const std::string& id) {
        check(!id.empty(), "empty object id");
        check(ids.insert(id).second, "duplicate object id: " + id);
    };
    for (const auto& b : balls) {
        add_id(b.id);
        check(b.radius > 0.0, b.id + ": radius must be positive");
        check(b.mass > 0.0, b.id + ": mass must be positive");
        check(std::isfinite(b.position.x) && std::isfinite(b.position.y), b.id + ": non-finite position");
    }
    for (const auto& d : dominos) {
        add_id(d.id);
        check(d.width > 0.0 && d.height > 0.0 && d.thickness > 0.0, d.id + ": dimensions must be positive");
        check(d.mass > 0.0, d.id + ": mass must be positive");
    }
    for (const auto& o : oscillators) {
        add_id(o.id);
        check(o.natural_frequency > 0.0, o.id + ": natural frequency must be positive");
        check(o.damping_ratio > 0.0 && o.damping_ratio < 1.0, o.id + ": damping ratio must be in (0,1)");
    }
    for (const auto& ob : obstacles) {
        add_id(ob.id);
        if (ob.shape == Obstacle::Shape::Segment)
            check((ob.b - ob.a).norm() > 0.0, ob.id + ": zero-length segment");
        else
            check(ob.b.x > ob.a.x && ob.b.y > ob.a.y, ob.id + ": degenerate box");
    }

    // no interpenetration at t = 0
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            double d = (balls[i].position.xy() - balls[j].position.xy()).norm();
            check(d >= balls[i].radius + balls[j].radius - 1e-9,
                  balls[i].id + " and " + balls[j].id + " interpenetrate");
        }
    }
    for (std::size_t i = 0; i < dominos.size(); ++i) {
        for (std::size_t j = i + 1; j < dominos.size(); ++j) {
            double d = (dominos[i].base_center - dominos[j].base_center).norm();
            double min_sep = std::max(dominos[i].thickness, dominos[j].thickness);
            check(d > min_sep - 1e-9, dominos[i].id + " and " + dominos[j].id + " interpenetrate");
        }
    }
}

const Ball* Scene::find_ball(const std::string& id) const {
    for (const auto& b : balls)
        if (b.id == id) return &b;
    return nullptr;
}

const Domino* Scene::find_domino(const std::string& id) const {
    for (const auto& d : dominos)
        if (d.id == id) return &d;
    return nullptr;
}

const SwayOscillator* Scene::find_oscillator(const std::string& id) const {
    for (const auto& o : oscillators)
        if (o.id == id) return &o;
    return nullptr;
}

bool Scene::has_object(const std::string& id) const {
    if (find_ball(id) || find_domino(id) || find_oscillator(id)) return true;
    for (const auto& ob : obstacles)
        if (ob.id == id) return true;
    return false;
}

json camera_to_json(const Camera& c) {
    json j;
    j["mode"] = c.mode == CameraMode::OrthographicTopdown ? "orthographic-topdown" : "pinhole";
    j["position"] = vec3_json(c.position);
    j["look_at"] = vec3_json(c.look_at);
    j["up"] = vec3_json(c.up);
    j["image_size"] = json::array({c.image_h, c.image_w});
    if (c.mode == CameraMode::OrthographicTopdown)
        j["world_window"] = json::array({c.window_w, c.window_h});
    else
        j["focal_length"] = c.focal_length;
    return j;
}

Camera camera_from_json(const json& j) {
    Camera c;
    std::string mode = j.value("mode", "orthographic-topdown");
    if (mode == "orthographic-topdown")
        c.mode = CameraMode::OrthographicTopdown;
    else if (mode == "pinhole")
        c.mode = CameraMode::Pinhole;
    else
        throw Error(errc::bad_scene, "unknown camera mode: " + mode);
    if (j.contains("position")) c.position = vec3_from(j.at("position"));
    if (j.contains("look_at")) c.look_at = vec3_from(j.at("look_at"));
    if (j.contains("up")) c.up = vec3_from(j.at("up"));
    if (j.contains("image_size")) {
        c.image_h = j.at("image_size")[0].get<int>();
        c.image_w = j.at("image_size")[1].get<int>();
    }
    if (j.contains("world_window")) {
        c.window_w = j.at("world_window")[0].get<double>();
        c.window_h = j.at("world_window")[1].get<double>();
    }
    if (j.contains("focal_length")) c.focal_length = j.at("focal_length").get<double>();
    return c;
}

std::string scene_to_json(const Scene& s) {
    json j;
    j["schema_version"] = 1;
    j["world"] = {{"bounds", json::array({s.bounds.min.x, s.bounds.min.y, s.bounds.max.x, s.bounds.max.y})},
                  {"gravity", s.gravity},
                  {"linear_damping", s.linear_damping}};
    j["camera"] = camera_to_json(s.camera);
    j["force_range"] = json::array({s.force_lo, s.force_hi});
    j["mass_range"] = json::array({s.mass_lo, s.mass_hi});

    j["balls"] = json::array();
    for (const auto& b : s.balls)
        j["balls"].push_back({{"id", b.id},
                              {"position", vec3_json(b.position)},
                              {"radius", b.radius},
                              {"mass", b.mass},
                              {"velocity", vec2_json(b.velocity)},
                              {"color", b.color_tag}});
    j["dominos"] = json::array();
    for (const auto& d : s.dominos)
        j["dominos"].push_back({{"id", d.id},
                                {"base_center", vec2_json(d.base_center)},
                                {"facing", d.facing},
                                {"width", d.width},
                                {"height", d.height},
                                {"thickness", d.thickness},
                                {"mass", d.mass}});
    j["oscillators"] = json::array();
    for (const auto& o : s.oscillators)
        j["oscillators"].push_back({{"id", o.id},
                                    {"anchor", vec2_json(o.anchor)},
                                    {"natural_frequency", o.natural_frequency},
                                    {"damping_ratio", o.damping_ratio},
                                    {"tip_radius", o.tip_radius}});
    j["obstacles"] = json::array();
    for (const auto& ob : s.obstacles) {
        json o = {{"id", ob.id}};
        if (ob.shape == Obstacle::Shape::Segment) {
            o["shape"] = "segment";
            o["a"] = vec2_json(ob.a);
            o["b"] = vec2_json(ob.b);
            o["thickness"] = ob.thickness;
        } else {
            o["shape"] = "box";
            o["min"] = vec2_json(ob.a);
            o["max"] = vec2_json(ob.b);
        }
        j["obstacles"].push_back(o);
    }
    return j.dump(2);
}

Scene scene_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errc::bad_scene, std::string("scene JSON parse error: ") + e.what());
    }
    Scene s;
    try {
        if (j.contains("world")) {
            const json& w = j.at("world");
            if (w.contains("bounds")) {
                const json& b = w.at("bounds");
                s.bounds.min = {b[0].get<double>(), b[1].get<double>()};
                s.bounds.max = {b[2].get<double>(), b[3].get<double>()};
            }
            s.gravity = w.value("gravity", 9.81);
            s.linear_damping = w.value("linear_damping", 0.0);
        }
        if (j.contains("camera")) s.camera = camera_from_json(j.at("camera"));
        if (j.contains("force_range")) {
            s.force_lo = j.at("force_range")[0].get<double>();
            s.force_hi = j.at("force_range")[1].get<double>();
        }
        if (j.contains("mass_range")) {
            s.mass_lo = j.at("mass_range")[0].get<double>();
            s.mass_hi = j.at("mass_range")[1].get<double>();
        }
        for (const json& b : j.value("balls", json::array())) {
            Ball ball;
            ball.id = b.at("id").get<std::string>();
            ball.position = vec3_from(b.at("position"));
            ball.radius = b.at("radius").get<double>();
            ball.mass = b.at("mass").get<double>();
            if (b.contains("velocity")) ball.velocity = vec2_from(b.at("velocity"));
            ball.color_tag = b.value("color", "white");
            s.balls.push_back(ball);
        }
        for (const json& d : j.value("dominos", json::array())) {
            Domino dom;
            dom.id = d.at("id").get<std::string>();
            dom.base_center = vec2_from(d.at("base_center"));
            dom.facing = d.at("facing").get<double>();
            dom.width = d.at("width").get<double>();
            dom.height = d.at("height").get<double>();
            dom.thickness = d.at("thickness").get<double>();
            dom.mass = d.at("mass").get<double>();
            s.dominos.push_back(dom);
        }
        for (const json& o : j.value("oscillators", json::array())) {
            SwayOscillator osc;
            osc.id = o.at("id").get<std::string>();
            osc.anchor = vec2_from(o.at("anchor"));
            osc.natural_frequency = o.at("natural_frequency").get<double>();
            osc.damping_ratio = o.at("damping_ratio").get<double>();
            osc.tip_radius = o.value("tip_radius", 0.3);
            s.oscillators.push_back(osc);
        }
        for (const json& o : j.value("obstacles", json::array())) {
            Obstacle ob;
            ob.id = o.at("id").get<std::string>();
            std::string shape = o.value("shape", "segment");
            if (shape == "segment") {
                ob.shape = Obstacle::Shape::Segment;
                ob.a = vec2_from(o.at("a"));
                ob.b = vec2_from(o.at("b"));
                ob.thickness = o.value("thickness", 0.0);
            } else if (shape == "box") {
                ob.shape = Obstacle::Shape::Box;
                ob.a = vec2_from(o.at("min"));
                ob.b = vec2_from(o.at("max"));
            } else {
                throw Error(errc::bad_scene, "unknown obstacle shape: " + shape);
            }
            s.obstacles.push_back(ob);
        }
    } catch (const json::exception& e) {
        throw Error(errc::bad_scene, std::string("scene JSON field error: ") + e.what());
    }
    s.validate();
    return s;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::io, "cannot open scene file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scene_from_json(ss.str());
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::io, "cannot write scene file: " + path);
    out << scene_to_json(scene) << "\n";
}

} // namespace gf
