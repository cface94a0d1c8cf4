#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "goalforge/error.hpp"
#include "goalforge/physics.hpp"
#include "goalforge/rng.hpp"

#include <cmath>

using namespace gf;

namespace {

Scene two_ball_lane() {
    Scene scene;
    scene.force_lo = 0.0;
    scene.force_hi = 2.0;
    Ball a;
    a.id = "a";
    a.position = {0.0, 0.0, 0.25};
    a.radius = 0.25;
    a.mass = 1.0;
    Ball b = a;
    b.id = "b";
    b.position = {3.0, 0.0, 0.25};
    scene.balls = {a, b};
    return scene;
}

Scene domino_row(int n, double spacing, double push_lo, double push_hi) {
    Scene scene;
    scene.force_lo = push_lo;
    scene.force_hi = push_hi;
    for (int k = 0; k < n; ++k) {
        Domino d;
        d.id = "d" + std::to_string(k);
        d.base_center = {k * spacing, 0.0};
        d.facing = 0.0;
        d.height = 1.0;
        d.thickness = 0.15;
        d.width = 0.5;
        d.mass = 1.0;
        scene.dominos.push_back(d);
    }
    return scene;
}

} // namespace

TEST_CASE("elastic_collision frozen 1v3 head-on exchange") {
    auto [v1, v2] = elastic_collision(1.0, {1.0, 0.0}, 3.0, {0.0, 0.0}, {1.0, 0.0});
    CHECK(v1.x == doctest::Approx(-0.5));
    CHECK(v1.y == doctest::Approx(0.0));
    CHECK(v2.x == doctest::Approx(0.5));
    CHECK(v2.y == doctest::Approx(0.0));
}

TEST_CASE("elastic_collision equal masses swap the normal component") {
    auto [v1, v2] = elastic_collision(2.0, {1.0, 2.0}, 2.0, {0.0, 0.0}, {1.0, 0.0});
    CHECK(v1.x == doctest::Approx(0.0));
    CHECK(v1.y == doctest::Approx(2.0)); // tangential passes through
    CHECK(v2.x == doctest::Approx(1.0));
    CHECK(v2.y == doctest::Approx(0.0));
}

TEST_CASE("elastic_collision leaves non-approaching pairs unchanged") {
    auto [v1, v2] = elastic_collision(1.0, {-1.0, 0.5}, 1.0, {1.0, 0.0}, {1.0, 0.0});
    CHECK(v1.x == doctest::Approx(-1.0));
    CHECK(v1.y == doctest::Approx(0.5));
    CHECK(v2.x == doctest::Approx(1.0));
}

TEST_CASE("elastic_collision conserves momentum and energy over random draws") {
    Rng rng(17);
    for (int i = 0; i < 20000; ++i) {
        double m1 = rng.uniform(0.1, 10.0), m2 = rng.uniform(0.1, 10.0);
        Vec2 v1{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        Vec2 v2{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        Vec2 n = unit_from_angle(rng.uniform(0.0, 2.0 * M_PI));
        auto [w1, w2] = elastic_collision(m1, v1, m2, v2, n);

        Vec2 dp = (w1 * m1 + w2 * m2) - (v1 * m1 + v2 * m2);
        double ke0 = 0.5 * m1 * v1.norm2() + 0.5 * m2 * v2.norm2();
        double ke1 = 0.5 * m1 * w1.norm2() + 0.5 * m2 * w2.norm2();
        REQUIRE(dp.norm() <= 1e-9 * (1.0 + v1.norm() * m1 + v2.norm() * m2));
        REQUIRE(std::abs(ke1 - ke0) <= 1e-9 * (1.0 + ke0));
    }
}

TEST_CASE("min_impulse_for_collision closed form") {
    CHECK(min_impulse_for_collision(2.0, 3.0, 3.0) == doctest::Approx(2.0));
    CHECK(min_impulse_for_collision(1.0, 2.5, 2.5) == doctest::Approx(1.0));
    CHECK_THROWS_AS(min_impulse_for_collision(0.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(min_impulse_for_collision(1.0, 1.0, 0.0), Error);
}

TEST_CASE("topple_threshold closed form") {
    Domino d;
    d.mass = 1.0;
    d.thickness = 0.2;
    CHECK(topple_threshold(d, 1.0) == doctest::Approx(0.981));
    d.mass = 2.0;
    CHECK(topple_threshold(d, 1.0) == doctest::Approx(1.962));
    CHECK_THROWS_AS(topple_threshold(d, 0.0), Error);
}

TEST_CASE("ccd collision lands at the kinematic contact time") {
    Scene scene = two_ball_lane();
    // gap = 3.0 - 0.5 = 2.5 m; impulse 1 kg*m/s on 1 kg -> 1 m/s -> contact at 2.5 s
    ForceSpec f{"a", {0.0, 0.0}, 0.0, 0.5};
    SimResult sim = simulate(scene, f, 5.0, 16.0);

    REQUIRE(sim.events.size() == 1);
    const CollisionEvent& ev = sim.events.front();
    CHECK(ev.a == "a");
    CHECK(ev.b == "b");
    CHECK(std::abs(ev.time - 2.5) <= 1.0 / 128.0 + 1e-9);

    // equal masses: full transfer, receiver leaves at 1 m/s along +x
    auto out = chain_outcome(sim, "b");
    REQUIRE(out.has_value());
    CHECK(out->direction == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(out->magnitude == doctest::Approx(0.5).epsilon(1e-6)); // 1 m/s on the [0,2] scale
    CHECK(out->time == doctest::Approx(ev.time));
}

TEST_CASE("frame bookkeeping and the frame cap") {
    Scene scene = two_ball_lane();
    SimResult sim = simulate(scene, std::nullopt, 2.0, 16.0);
    CHECK(sim.frame_count == 33);
    for (const auto& t : sim.tracks) {
        CHECK(t.world.size() == 33);
        CHECK(t.pixel.size() == 33);
    }
    CHECK_THROWS_AS(simulate(scene, std::nullopt, 100.0, 16.0), Error);
    CHECK_THROWS_AS(simulate(scene, std::nullopt, 0.0, 16.0), Error);
}

TEST_CASE("obstacle reflects an incoming ball") {
    Scene scene;
    scene.force_lo = 0.0;
    scene.force_hi = 2.0;
    Ball a;
    a.id = "a";
    a.position = {0.0, 0.0, 0.25};
    a.radius = 0.25;
    scene.balls = {a};
    Obstacle wall;
    wall.id = "wall";
    wall.a = {2.0, -1.0};
    wall.b = {2.0, 1.0};
    scene.obstacles = {wall};

    ForceSpec f{"a", {0.0, 0.0}, 0.0, 0.5}; // 1 m/s toward the wall
    SimResult sim = simulate(scene, f, 4.0, 16.0);
    REQUIRE(sim.events.size() == 1);
    CHECK(sim.events[0].a == "wall");
    CHECK(sim.events[0].b == "a");
    // contact at x = 2 - 0.25 = 1.75 m -> t = 1.75 s, then the ball returns
    CHECK(std::abs(sim.events[0].time - 1.75) <= 1.0 / 128.0 + 1e-9);
    const ObjectTrack* track = sim.track("a");
    REQUIRE(track != nullptr);
    CHECK(track->world.back().x < 1.75);
}

TEST_CASE("domino chain topples every downstream piece exactly once") {
    Scene scene = domino_row(5, 0.6, 0.0, 10.0);
    ForceSpec f{"d0", {0.0, 0.0}, 0.0, 1.0}; // 10 N: far above threshold
    SimResult sim = simulate(scene, f, 5.0, 16.0);

    REQUIRE(sim.events.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(sim.events[k].a == "d" + std::to_string(k));
        CHECK(sim.events[k].b == "d" + std::to_string(k + 1));
        if (k > 0) CHECK(sim.events[k].time > sim.events[k - 1].time);
    }
    auto out = chain_outcome(sim, "d4");
    REQUIRE(out.has_value());
    CHECK(out->direction == doctest::Approx(0.0).epsilon(1e-6));
    // the toppling track progresses monotonically to 1
    const ObjectTrack* track = sim.track("d2");
    REQUIRE(track != nullptr);
    CHECK(track->aux.front() == 0.0);
    CHECK(track->aux.back() == doctest::Approx(1.0));
}

TEST_CASE("sub-threshold push leaves the chain standing") {
    Scene scene = domino_row(3, 0.6, 0.0, 10.0);
    // threshold at 0.75 m contact: 1 * 9.81 * 0.075 / 0.75 = 0.981 N
    ForceSpec f{"d0", {0.0, 0.0}, 0.0, 0.05}; // 0.5 N
    SimResult sim = simulate(scene, f, 3.0, 16.0);
    CHECK(sim.events.empty());
    CHECK_FALSE(chain_outcome(sim, "d2").has_value());
}

TEST_CASE("chain break when the gap exceeds the height") {
    Scene scene = domino_row(2, 0.6, 0.0, 10.0);
    scene.dominos[1].base_center = {1.5, 0.0}; // spacing > height: unreachable
    ForceSpec f{"d0", {0.0, 0.0}, 0.0, 1.0};
    SimResult sim = simulate(scene, f, 3.0, 16.0);
    CHECK(sim.events.empty());
}

TEST_CASE("oscillator tip sways and decays after an impulse") {
    Scene scene;
    scene.force_lo = 0.0;
    scene.force_hi = 4.0;
    SwayOscillator o;
    o.id = "osc";
    o.anchor = {0.0, 0.0};
    o.natural_frequency = 4.0;
    o.damping_ratio = 0.15;
    scene.oscillators = {o};

    ForceSpec f{"osc", {0.0, 0.0}, 0.0, 0.5}; // v0 = 2 m/s along +x
    SimResult sim = simulate(scene, f, 5.0, 16.0);
    const ObjectTrack* track = sim.track("osc");
    REQUIRE(track != nullptr);

    double peak_early = 0.0, peak_late = 0.0;
    for (int k = 0; k < 16; ++k)
        peak_early = std::max(peak_early, (track->world[k] - o.anchor).norm());
    for (std::size_t k = track->world.size() - 16; k < track->world.size(); ++k)
        peak_late = std::max(peak_late, (track->world[k] - o.anchor).norm());
    CHECK(peak_early > 0.1);
    CHECK(peak_late < 0.5 * peak_early);

    // closed form at the first captured frame
    double t = 1.0 / 16.0;
    double omega_d = 4.0 * std::sqrt(1.0 - 0.15 * 0.15);
    double amp = (2.0 / omega_d) * std::exp(-0.15 * 4.0 * t) * std::sin(omega_d * t);
    CHECK(track->world[1].x == doctest::Approx(amp).epsilon(1e-9));
    CHECK(track->world[1].y == doctest::Approx(0.0));
}

TEST_CASE("unknown ids raise the documented errors") {
    Scene scene = two_ball_lane();
    ForceSpec f{"ghost", {0.0, 0.0}, 0.0, 0.5};
    CHECK_THROWS_AS(simulate(scene, f, 1.0, 16.0), Error);
    SimResult sim = simulate(scene, std::nullopt, 1.0, 16.0);
    CHECK_THROWS_AS(chain_outcome(sim, "ghost"), Error);
}

TEST_CASE("simulation output is bit-reproducible") {
    Scene scene = two_ball_lane();
    scene.balls[1].position = {2.0, 1.0, 0.25};
    ForceSpec f{"a", {0.0, 0.0}, 0.45, 0.8};
    SimResult s1 = simulate(scene, f, 5.0, 16.0);
    SimResult s2 = simulate(scene, f, 5.0, 16.0);
    REQUIRE(s1.events.size() == s2.events.size());
    for (std::size_t i = 0; i < s1.events.size(); ++i)
        CHECK(s1.events[i].time == s2.events[i].time);
    for (std::size_t t = 0; t < s1.tracks.size(); ++t)
        for (std::size_t k = 0; k < s1.tracks[t].world.size(); ++k) {
            CHECK(s1.tracks[t].world[k].x == s2.tracks[t].world[k].x);
            CHECK(s1.tracks[t].world[k].y == s2.tracks[t].world[k].y);
        }
}
