// Serial reference vs OpenMP row-parallel kernels on 240x240 frames.
// The parallel variants should win on multi-core hosts while remaining
// bit-identical; correctness lives in the tests, speed here.

#include "goalforge/kernels.hpp"
#include "goalforge/rng.hpp"

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

using namespace gf;
using namespace gf::kernels;

namespace {

constexpr int kH = 240;
constexpr int kW = 240;

std::vector<float> random_field(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<float> field(static_cast<std::size_t>(kH) * kW);
    for (float& v : field) v = static_cast<float>(rng.uniform01());
    return field;
}

std::vector<std::uint8_t> random_rgb(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(kH) * kW * 3);
    for (std::uint8_t& v : rgb) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    return rgb;
}

std::vector<RasterShape> scene_shapes() {
    Rng rng(5);
    std::vector<RasterShape> shapes;
    for (int i = 0; i < 12; ++i) {
        RasterShape s;
        s.kind = i % 3 == 0   ? RasterShape::Kind::Disc
                 : i % 3 == 1 ? RasterShape::Kind::OrientedRect
                              : RasterShape::Kind::Capsule;
        s.a = {rng.uniform(0.0, kW), rng.uniform(0.0, kH)};
        s.axis = s.kind == RasterShape::Kind::Capsule
                     ? Vec2{rng.uniform(0.0, kW), rng.uniform(0.0, kH)}
                     : unit_from_angle(rng.uniform(0.0, 2.0 * std::numbers::pi));
        s.r0 = rng.uniform(4.0, 30.0);
        s.r1 = rng.uniform(2.0, 8.0);
        s.color = {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                   static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                   static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
        shapes.push_back(s);
    }
    return shapes;
}

void BM_blob_max_serial(benchmark::State& state) {
    std::vector<float> field = random_field(1);
    for (auto _ : state) {
        blob_max_serial(field.data(), kH, kW, {120.3, 80.7}, 12.0, 0.9);
        benchmark::DoNotOptimize(field.data());
    }
}

void BM_blob_max_parallel(benchmark::State& state) {
    std::vector<float> field = random_field(1);
    for (auto _ : state) {
        blob_max(field.data(), kH, kW, {120.3, 80.7}, 12.0, 0.9);
        benchmark::DoNotOptimize(field.data());
    }
}

void BM_overlay_blend_serial(benchmark::State& state) {
    std::vector<std::uint8_t> rgb = random_rgb(2);
    std::vector<float> direct = random_field(3), goal = random_field(4), mass = random_field(5);
    for (auto _ : state) {
        overlay_blend_serial(rgb.data(), kH, kW, direct.data(), goal.data(), mass.data(), 0.5);
        benchmark::DoNotOptimize(rgb.data());
    }
}

void BM_overlay_blend_parallel(benchmark::State& state) {
    std::vector<std::uint8_t> rgb = random_rgb(2);
    std::vector<float> direct = random_field(3), goal = random_field(4), mass = random_field(5);
    for (auto _ : state) {
        overlay_blend(rgb.data(), kH, kW, direct.data(), goal.data(), mass.data(), 0.5);
        benchmark::DoNotOptimize(rgb.data());
    }
}

void BM_raster_shapes_serial(benchmark::State& state) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(kH) * kW * 3);
    std::vector<RasterShape> shapes = scene_shapes();
    for (auto _ : state) {
        raster_shapes_serial(rgb.data(), kH, kW, {30, 32, 38}, shapes);
        benchmark::DoNotOptimize(rgb.data());
    }
}

void BM_raster_shapes_parallel(benchmark::State& state) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(kH) * kW * 3);
    std::vector<RasterShape> shapes = scene_shapes();
    for (auto _ : state) {
        raster_shapes(rgb.data(), kH, kW, {30, 32, 38}, shapes);
        benchmark::DoNotOptimize(rgb.data());
    }
}

} // namespace

BENCHMARK(BM_blob_max_serial);
BENCHMARK(BM_blob_max_parallel);
BENCHMARK(BM_overlay_blend_serial);
BENCHMARK(BM_overlay_blend_parallel);
BENCHMARK(BM_raster_shapes_serial);
BENCHMARK(BM_raster_shapes_parallel);

BENCHMARK_MAIN();
