#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "goalforge/camera.hpp"
#include "goalforge/error.hpp"
#include "goalforge/gaussian.hpp"
#include "goalforge/rng.hpp"
#include "goalforge/vec.hpp"

#include <cmath>
#include <set>

using namespace gf;

TEST_CASE("wrap_angle lands in (-pi, pi]") {
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3.0 * M_PI / 2.0) == doctest::Approx(-M_PI / 2.0));
    CHECK(wrap_angle(-3.0 * M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
    CHECK(wrap_angle(7.0 * M_PI) == doctest::Approx(M_PI));
    for (double a = -20.0; a < 20.0; a += 0.37) {
        double w = wrap_angle(a);
        CHECK(w > -M_PI - 1e-12);
        CHECK(w <= M_PI + 1e-12);
        CHECK(std::cos(w) == doctest::Approx(std::cos(a)));
        CHECK(std::sin(w) == doctest::Approx(std::sin(a)));
    }
}

TEST_CASE("vector algebra basics") {
    Vec2 a{3.0, 4.0};
    CHECK(a.norm() == doctest::Approx(5.0));
    CHECK(a.normalized().norm() == doctest::Approx(1.0));
    CHECK(Vec2{0.0, 0.0}.normalized().norm() == 0.0);
    CHECK(Vec2{1.0, 0.0}.cross({0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(Vec2{0.0, 1.0}.cross({1.0, 0.0}) == doctest::Approx(-1.0));
    Vec3 x{1.0, 0.0, 0.0}, y{0.0, 1.0, 0.0};
    Vec3 z = x.cross(y);
    CHECK(z.z == doctest::Approx(1.0));
    CHECK(unit_from_angle(M_PI / 2.0).y == doctest::Approx(1.0));
}

TEST_CASE("seeded rng streams are reproducible and well-ranged") {
    Rng a(42), b(42), c(43);
    bool diverged = false;
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) diverged = true;
    }
    CHECK(diverged);

    Rng r(7);
    for (int i = 0; i < 10000; ++i) {
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = r.uniform(2.0, 5.0);
        CHECK(v >= 2.0);
        CHECK(v < 5.0);
    }
}

TEST_CASE("uniform_int covers inclusive bounds") {
    Rng r(11);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        std::int64_t v = r.uniform_int(3, 9);
        CHECK(v >= 3);
        CHECK(v <= 9);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(r.uniform_int(5, 5) == 5);
}

TEST_CASE("bernoulli respects degenerate probabilities") {
    Rng r(3);
    for (int i = 0; i < 200; ++i) {
        CHECK_FALSE(r.bernoulli(0.0));
        CHECK(r.bernoulli(1.0));
    }
}

TEST_CASE("derive_seed separates labels and indices") {
    std::uint64_t a = derive_seed(1, "alpha", 0);
    CHECK(a == derive_seed(1, "alpha", 0));
    CHECK(a != derive_seed(1, "alpha", 1));
    CHECK(a != derive_seed(1, "beta", 0));
    CHECK(a != derive_seed(2, "alpha", 0));
}

TEST_CASE("orthographic projection frozen values") {
    Camera cam; // 10x10 m window centered at the origin
    cam.image_h = 100;
    cam.image_w = 100;

    PixelPoint center = project_point(cam, {0.0, 0.0, 0.0});
    CHECK(center.px.x == doctest::Approx(50.0));
    CHECK(center.px.y == doctest::Approx(50.0));
    CHECK_FALSE(center.out_of_window);

    // +y is up in the world, down-decreasing in the raster
    PixelPoint up = project_point(cam, {0.0, 2.5, 0.0});
    CHECK(up.px.x == doctest::Approx(50.0));
    CHECK(up.px.y == doctest::Approx(25.0));

    PixelPoint edge = project_point(cam, {5.0, 0.0, 0.0});
    CHECK(edge.out_of_window);
    CHECK(edge.px.x == doctest::Approx(99.0));
    CHECK(edge.px.y == doctest::Approx(50.0));
}

TEST_CASE("pinhole projection frozen values") {
    Camera cam;
    cam.mode = CameraMode::Pinhole;
    cam.position = {0.0, 0.0, 10.0};
    cam.look_at = {0.0, 0.0, 0.0};
    cam.up = {0.0, 1.0, 0.0};
    cam.focal_length = 100.0;
    cam.image_h = 200;
    cam.image_w = 200;

    PixelPoint p = project_point(cam, {1.0, 0.0, 0.0});
    CHECK(p.px.x == doctest::Approx(110.0));
    CHECK(p.px.y == doctest::Approx(100.0));

    PixelPoint q = project_point(cam, {0.0, 1.0, 0.0});
    CHECK(q.px.x == doctest::Approx(100.0));
    CHECK(q.px.y == doctest::Approx(90.0));

    // nearer points project farther from center
    PixelPoint near = project_point(cam, {1.0, 0.0, 5.0});
    CHECK(near.px.x > p.px.x);

    CHECK_THROWS_WITH_AS(project_point(cam, {0.0, 0.0, 11.0}), doctest::Contains("behind"),
                         Error);
}

TEST_CASE("projected force angles flip with the raster v axis") {
    Camera cam;
    cam.image_h = 100;
    cam.image_w = 100;

    PixelForce py = project_force(cam, {0.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, 0.7);
    CHECK(py.angle == doctest::Approx(-M_PI / 2.0));
    CHECK(py.magnitude == doctest::Approx(0.7));

    PixelForce px = project_force(cam, {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 1.0);
    CHECK(px.angle == doctest::Approx(0.0));

    for (double theta = -3.0; theta < 3.0; theta += 0.31) {
        PixelForce f =
            project_force(cam, {0.0, 0.0, 0.0}, Vec3(unit_from_angle(theta), 0.0), 0.5);
        CHECK(std::abs(wrap_angle(f.angle + theta)) < 1e-6);
    }

    CHECK_THROWS_AS(project_force(cam, {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, 1.0), Error);
}

TEST_CASE("gaussian field peaks at the center and decays isotropically") {
    GaussianBlobCfg cfg;
    cfg.sigma = 3.0;
    cfg.amplitude = 0.9;
    std::vector<float> field = gaussian_field({5.0, 5.0}, cfg, 11, 11);

    CHECK(field[5 * 11 + 5] == doctest::Approx(0.9));
    // one sigma out along the row: amplitude * exp(-1/2)
    CHECK(field[5 * 11 + 8] == doctest::Approx(0.9 * std::exp(-0.5)));
    for (int k = 1; k <= 5; ++k) {
        CHECK(field[5 * 11 + 5 + k] == doctest::Approx(field[5 * 11 + 5 - k]));
        CHECK(field[(5 + k) * 11 + 5] == doctest::Approx(field[5 * 11 + 5 + k]));
    }

    CHECK_THROWS_AS(gaussian_field({0.0, 0.0}, {0.0, 1.0}, 4, 4), Error);
    CHECK_THROWS_AS(gaussian_field({0.0, 0.0}, cfg, 0, 4), Error);
}
