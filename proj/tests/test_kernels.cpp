#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "goalforge/kernels.hpp"
#include "goalforge/rng.hpp"

#include <omp.h>

#include <cstring>
#include <vector>

using namespace gf;
using namespace gf::kernels;

namespace {

std::vector<float> random_field(Rng& rng, int h, int w) {
    std::vector<float> f(static_cast<std::size_t>(h) * w);
    for (float& v : f) v = static_cast<float>(rng.uniform01());
    return f;
}

std::vector<std::uint8_t> random_rgb(Rng& rng, int h, int w) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(h) * w * 3);
    for (std::uint8_t& v : img) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return img;
}

} // namespace

TEST_CASE("blob_max parallel output is bit-identical to serial") {
    Rng rng(101);
    for (int threads : {1, 2, 3, 7}) {
        omp_set_num_threads(threads);
        for (auto [h, w] : {std::pair{1, 1}, {5, 7}, {64, 64}, {33, 128}}) {
            std::vector<float> base = random_field(rng, h, w);
            Vec2 center{rng.uniform(-10.0, w + 10.0), rng.uniform(-10.0, h + 10.0)};
            double sigma = rng.uniform(0.5, 20.0);
            double amp = rng.uniform(0.1, 1.0);

            std::vector<float> serial = base, parallel = base;
            blob_max_serial(serial.data(), h, w, center, sigma, amp);
            blob_max(parallel.data(), h, w, center, sigma, amp);
            CHECK(std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(float)) ==
                  0);
        }
    }
}

TEST_CASE("blob_max writes the max of old and new values") {
    std::vector<float> field(9, 0.5f);
    blob_max_serial(field.data(), 3, 3, {1.0, 1.0}, 1.0, 1.0);
    CHECK(field[4] == doctest::Approx(1.0)); // peak overwrites
    // far corner keeps the old value when the blob is below it
    std::vector<float> far(9, 0.9f);
    blob_max_serial(far.data(), 3, 3, {0.0, 0.0}, 0.3, 1.0);
    CHECK(far[8] == doctest::Approx(0.9f));
}

TEST_CASE("overlay_blend parallel output is bit-identical to serial") {
    Rng rng(202);
    for (int threads : {1, 3, 5}) {
        omp_set_num_threads(threads);
        for (double alpha : {0.0, 0.37, 1.0}) {
            int h = 31, w = 45;
            std::vector<std::uint8_t> base = random_rgb(rng, h, w);
            std::vector<float> c0 = random_field(rng, h, w);
            std::vector<float> c1 = random_field(rng, h, w);
            std::vector<float> c2 = random_field(rng, h, w);

            std::vector<std::uint8_t> serial = base, parallel = base;
            overlay_blend_serial(serial.data(), h, w, c0.data(), c1.data(), c2.data(), alpha);
            overlay_blend(parallel.data(), h, w, c0.data(), c1.data(), c2.data(), alpha);
            CHECK(serial == parallel);
        }
    }
}

TEST_CASE("overlay_blend with zero alpha is the identity") {
    Rng rng(303);
    int h = 16, w = 16;
    std::vector<std::uint8_t> base = random_rgb(rng, h, w);
    std::vector<float> c = random_field(rng, h, w);
    std::vector<std::uint8_t> out = base;
    overlay_blend_serial(out.data(), h, w, c.data(), c.data(), c.data(), 0.0);
    CHECK(out == base);
}

TEST_CASE("overlay_blend saturates toward the channel tints") {
    int h = 1, w = 1;
    std::vector<std::uint8_t> img = {40, 80, 120};
    std::vector<float> on(1, 1.0f), off(1, 0.0f);
    overlay_blend_serial(img.data(), h, w, on.data(), off.data(), off.data(), 1.0);
    CHECK(img[0] == 255); // direct channel tints red
    CHECK(img[1] == 0);
    CHECK(img[2] == 0);

    img = {40, 80, 120};
    overlay_blend_serial(img.data(), h, w, off.data(), on.data(), off.data(), 1.0);
    CHECK(img[1] == 255); // goal channel tints green

    img = {40, 80, 120};
    overlay_blend_serial(img.data(), h, w, off.data(), off.data(), on.data(), 1.0);
    CHECK(img[2] == 255); // mass channel tints blue
}

TEST_CASE("raster_shapes parallel output is bit-identical to serial") {
    Rng rng(404);
    for (int threads : {1, 2, 6}) {
        omp_set_num_threads(threads);
        int h = 48, w = 64;
        std::vector<RasterShape> shapes;
        for (int i = 0; i < 12; ++i) {
            RasterShape s;
            int kind = static_cast<int>(rng.uniform_int(0, 2));
            s.kind = kind == 0   ? RasterShape::Kind::Disc
                     : kind == 1 ? RasterShape::Kind::OrientedRect
                                 : RasterShape::Kind::Capsule;
            s.a = {rng.uniform(0.0, w), rng.uniform(0.0, h)};
            if (s.kind == RasterShape::Kind::OrientedRect)
                s.axis = Vec2{std::cos(rng.uniform(0.0, 6.28)), std::sin(rng.uniform(0.0, 6.28))};
            else
                s.axis = {rng.uniform(0.0, w), rng.uniform(0.0, h)};
            s.r0 = rng.uniform(1.0, 12.0);
            s.r1 = rng.uniform(1.0, 6.0);
            s.color = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                       static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                       static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
            shapes.push_back(s);
        }

        std::vector<std::uint8_t> serial(static_cast<std::size_t>(h) * w * 3);
        std::vector<std::uint8_t> parallel = serial;
        raster_shapes_serial(serial.data(), h, w, {10, 20, 30}, shapes);
        raster_shapes(parallel.data(), h, w, {10, 20, 30}, shapes);
        CHECK(serial == parallel);
    }
}

TEST_CASE("raster_shapes paints in order with later shapes on top") {
    int h = 8, w = 8;
    RasterShape first;
    first.kind = RasterShape::Kind::Disc;
    first.a = {4.0, 4.0};
    first.r0 = 3.0;
    first.color = {200, 0, 0};
    RasterShape second = first;
    second.r0 = 1.5;
    second.color = {0, 200, 0};

    std::vector<std::uint8_t> img(static_cast<std::size_t>(h) * w * 3);
    raster_shapes_serial(img.data(), h, w, {0, 0, 0}, {first, second});
    const std::uint8_t* center = img.data() + 3 * (4 * w + 4);
    CHECK(center[1] == 200); // second shape wins at the shared center
    const std::uint8_t* ring = img.data() + 3 * (4 * w + 7);
    CHECK(ring[0] == 200); // first shape still owns its outer ring
}
