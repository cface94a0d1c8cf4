#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "goalforge/control.hpp"
#include "goalforge/error.hpp"
#include "goalforge/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

using namespace gf;
namespace fs = std::filesystem;

namespace {

int nonzero_planes(const ChannelField& field) {
    int count = 0;
    std::size_t plane = static_cast<std::size_t>(field.h) * field.w;
    for (int k = 0; k < field.f; ++k) {
        const float* p = field.plane(k);
        bool any = false;
        for (std::size_t i = 0; i < plane; ++i)
            if (p[i] != 0.0f) any = true;
        if (any) ++count;
    }
    return count;
}

Vec2 plane_argmax(const ChannelField& field, int k) {
    const float* p = field.plane(k);
    int best = 0;
    for (int i = 1; i < field.h * field.w; ++i)
        if (p[i] > p[best]) best = i;
    return {static_cast<double>(best % field.w), static_cast<double>(best / field.w)};
}

ChannelField constant_field(int f, int h, int w, float value) {
    ChannelField field;
    field.f = f;
    field.h = h;
    field.w = w;
    field.data.assign(static_cast<std::size_t>(f) * h * w, value);
    return field;
}

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

} // namespace

TEST_CASE("force channel duration is affine in magnitude") {
    EncodingCfg cfg;
    cfg.duration_min = 10;
    cfg.duration_max = 40;
    for (double m : {0.0, 0.5, 1.0}) {
        ChannelField field = encode_force_channel({32.0, 32.0}, 0.0, m, 0, cfg, 48, 64, 64);
        int expected = static_cast<int>(std::lround(10 + m * 30));
        CHECK(nonzero_planes(field) == expected);
    }
}

TEST_CASE("force channel respects the start frame and overflow limit") {
    EncodingCfg cfg;
    cfg.duration_min = 4;
    cfg.duration_max = 8;
    ChannelField field = encode_force_channel({16.0, 16.0}, 0.0, 0.0, 5, cfg, 16, 32, 32);
    std::size_t plane = 32 * 32;
    for (int k = 0; k < 5; ++k) {
        const float* p = field.plane(k);
        for (std::size_t i = 0; i < plane; ++i) REQUIRE(p[i] == 0.0f);
    }
    CHECK(nonzero_planes(field) == 4);
    CHECK_THROWS_AS(encode_force_channel({16.0, 16.0}, 0.0, 1.0, 9, cfg, 16, 32, 32), Error);
    CHECK_THROWS_AS(encode_force_channel({16.0, 16.0}, 0.0, 1.5, 0, cfg, 16, 32, 32), Error);
}

TEST_CASE("blob path endpoints are affine in magnitude and follow the angle") {
    EncodingCfg cfg;
    cfg.duration_min = 8;
    cfg.duration_max = 8;
    cfg.path_frac_min = 0.0;
    cfg.path_frac_max = 0.25;
    const int h = 96, w = 96;
    double diag = std::hypot(96.0, 96.0);

    ChannelField field = encode_force_channel({20.0, 48.0}, 0.0, 1.0, 0, cfg, 8, h, w);
    Vec2 first = plane_argmax(field, 0);
    Vec2 last = plane_argmax(field, 7);
    CHECK(first.x == doctest::Approx(20.0).epsilon(0.03));
    CHECK(first.y == doctest::Approx(48.0).epsilon(0.03));
    CHECK(last.x == doctest::Approx(20.0 + 0.25 * diag).epsilon(0.03));
    CHECK(last.y == doctest::Approx(48.0).epsilon(0.03));

    // straight down the raster for angle pi/2
    ChannelField down = encode_force_channel({48.0, 20.0}, M_PI / 2.0, 1.0, 0, cfg, 8, h, w);
    Vec2 end = plane_argmax(down, 7);
    CHECK(end.x == doctest::Approx(48.0).epsilon(0.03));
    CHECK(end.y == doctest::Approx(20.0 + 0.25 * diag).epsilon(0.03));

    // zero magnitude keeps the blob at its anchor
    ChannelField still = encode_force_channel({30.0, 30.0}, 1.1, 0.0, 0, cfg, 8, h, w);
    CHECK(plane_argmax(still, 7).x == doctest::Approx(30.0).epsilon(0.03));
}

TEST_CASE("goal channel equals a force channel anchored at frame zero") {
    EncodingCfg cfg;
    ChannelField goal = encode_goal_channel({40.0, 40.0}, 0.3, 0.6, cfg, 81, 64, 64);
    ChannelField force = encode_force_channel({40.0, 40.0}, 0.3, 0.6, 0, cfg, 81, 64, 64);
    CHECK(goal.data == force.data);
}

TEST_CASE("mass channel is static with sigma affine in mass") {
    EncodingCfg cfg; // sigma 6..24 px at 240-px height, masses 1..4
    const int h = 240, w = 240;
    double mid_mass = 2.5;
    ChannelField field = encode_mass_channel({{{100.0, 100.0}, mid_mass}}, cfg, 5, h, w);

    std::size_t plane = static_cast<std::size_t>(h) * w;
    for (int k = 1; k < 5; ++k)
        CHECK(std::memcmp(field.plane(0), field.plane(k), plane * sizeof(float)) == 0);

    // sigma at the midpoint mass is 15 px: exp(-1/2) one sigma out
    float peak = field.plane(0)[100 * w + 100];
    float at_sigma = field.plane(0)[100 * w + 115];
    CHECK(peak == doctest::Approx(1.0));
    CHECK(at_sigma == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));

    // half-resolution grid scales sigma with image height
    ChannelField small = encode_mass_channel({{{50.0, 50.0}, mid_mass}}, cfg, 1, 120, 120);
    float small_sigma = small.plane(0)[50 * 120 + 50 + 8];
    CHECK(small_sigma ==
          doctest::Approx(std::exp(-8.0 * 8.0 / (2.0 * 7.5 * 7.5))).epsilon(1e-6));

    CHECK_THROWS_AS(encode_mass_channel({{{10.0, 10.0}, 9.0}}, cfg, 1, 64, 64), Error);
}

TEST_CASE("assemble keeps exactly one causal channel in random-causal mode") {
    ChannelField direct = constant_field(3, 8, 8, 0.25f);
    ChannelField goal = constant_field(3, 8, 8, 0.5f);
    ChannelField mass = constant_field(3, 8, 8, 0.75f);
    MaskPolicy policy; // random-causal, p_goal 0.5, p_massdrop 0.3

    int goal_kept = 0, mass_kept = 0;
    const int draws = 2000;
    for (int s = 0; s < draws; ++s) {
        ControlTensor t = assemble(direct, goal, mass, policy, derive_seed(9, "mask", s));
        bool has_direct = t.at(0, 0, 0, 0) != 0.0f;
        bool has_goal = t.at(0, 1, 0, 0) != 0.0f;
        CHECK(has_direct != has_goal); // exactly one causal channel
        if (has_goal) ++goal_kept;
        if (t.at(0, 2, 0, 0) != 0.0f) ++mass_kept;
    }
    CHECK(std::abs(goal_kept / double(draws) - 0.5) < 0.05);
    CHECK(std::abs(1.0 - mass_kept / double(draws) - 0.3) < 0.05);
}

TEST_CASE("assemble mode constraints and channel pass-through") {
    ChannelField direct = constant_field(2, 4, 4, 0.25f);
    ChannelField goal = constant_field(2, 4, 4, 0.5f);
    MaskPolicy policy;

    policy.mode = MaskPolicy::Mode::DirectOnly;
    ControlTensor d = assemble(direct, goal, std::nullopt, policy, 1);
    CHECK(d.at(0, 0, 0, 0) == 0.25f);
    CHECK(d.at(0, 1, 0, 0) == 0.0f);
    CHECK(d.at(0, 2, 0, 0) == 0.0f); // absent mass becomes zeros
    CHECK_THROWS_AS(assemble(std::nullopt, goal, std::nullopt, policy, 1), Error);

    policy.mode = MaskPolicy::Mode::GoalOnly;
    ControlTensor g = assemble(direct, goal, std::nullopt, policy, 1);
    CHECK(g.at(0, 0, 0, 0) == 0.0f);
    CHECK(g.at(0, 1, 0, 0) == 0.5f);
    CHECK_THROWS_AS(assemble(direct, std::nullopt, std::nullopt, policy, 1), Error);

    policy.mode = MaskPolicy::Mode::RandomCausal;
    // with a single causal channel the draw passes it through untouched
    for (int s = 0; s < 32; ++s) {
        ControlTensor only = assemble(direct, std::nullopt, std::nullopt, policy, s);
        CHECK(only.at(0, 0, 0, 0) == 0.25f);
        CHECK(only.at(1, 1, 3, 3) == 0.0f);
    }

    ChannelField odd = constant_field(2, 4, 5, 0.1f);
    CHECK_THROWS_AS(assemble(direct, odd, std::nullopt, policy, 1), Error);
}

TEST_CASE("tensor io round-trips bit-exactly") {
    Rng rng(55);
    ControlTensor tensor;
    tensor.f = 3;
    tensor.h = 6;
    tensor.w = 5;
    tensor.data.resize(3 * 3 * 6 * 5);
    for (float& v : tensor.data) v = static_cast<float>(rng.uniform01());

    fs::path path = temp_file("roundtrip.gfct");
    write_tensor(tensor, path.string());
    ControlTensor back = read_tensor(path.string());
    CHECK(back.f == tensor.f);
    CHECK(back.h == tensor.h);
    CHECK(back.w == tensor.w);
    CHECK(std::memcmp(back.data.data(), tensor.data.data(),
                      tensor.data.size() * sizeof(float)) == 0);
    fs::remove(path);
}

TEST_CASE("tensor io rejects corrupted files with stable codes") {
    ControlTensor tensor;
    tensor.f = 2;
    tensor.h = 4;
    tensor.w = 4;
    tensor.data.assign(2 * 3 * 4 * 4, 0.5f);
    fs::path path = temp_file("corrupt.gfct");
    write_tensor(tensor, path.string());

    auto code_of = [&](const fs::path& p) {
        try {
            read_tensor(p.string());
        } catch (const Error& e) {
            return e.code();
        }
        return std::string("none");
    };

    // flip the magic
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK(code_of(path) == "bad-magic");

    write_tensor(tensor, path.string());
    fs::resize_file(path, fs::file_size(path) - 8); // truncated payload
    CHECK(code_of(path) == "shape-mismatch");

    write_tensor(tensor, path.string());
    std::ofstream app(path, std::ios::app | std::ios::binary);
    app << "zz"; // trailing bytes beyond the declared shape
    app.close();
    CHECK(code_of(path) == "shape-mismatch");

    // unsupported version field
    write_tensor(tensor, path.string());
    std::fstream v(path, std::ios::in | std::ios::out | std::ios::binary);
    v.seekp(4);
    std::uint32_t bad = 99;
    v.write(reinterpret_cast<const char*>(&bad), 4);
    v.close();
    CHECK(code_of(path) == "bad-version");

    fs::remove(path);
    CHECK(code_of(path) == "io");

    CHECK_THROWS_AS(write_tensor(ControlTensor{}, (temp_file("empty.gfct")).string()), Error);
}

TEST_CASE("overlay identities") {
    Rng rng(66);
    const int f = 3, h = 12, w = 10;
    std::vector<Image> frames;
    for (int k = 0; k < f; ++k) {
        Image img = Image::filled(h, w, 10, 20, 30);
        for (auto& v : img.rgb) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
        frames.push_back(img);
    }
    ControlTensor zero;
    zero.f = f;
    zero.h = h;
    zero.w = w;
    zero.data.assign(static_cast<std::size_t>(f) * 3 * h * w, 0.0f);

    std::vector<Image> same = overlay(frames, zero, 0.8);
    for (int k = 0; k < f; ++k) CHECK(same[k].rgb == frames[k].rgb);

    ControlTensor busy = zero;
    for (float& v : busy.data) v = static_cast<float>(rng.uniform01());
    std::vector<Image> alpha0 = overlay(frames, busy, 0.0);
    for (int k = 0; k < f; ++k) CHECK(alpha0[k].rgb == frames[k].rgb);

    std::vector<Image> tinted = overlay(frames, busy, 0.5);
    bool changed = false;
    for (int k = 0; k < f; ++k)
        if (tinted[k].rgb != frames[k].rgb) changed = true;
    CHECK(changed);

    CHECK_THROWS_AS(overlay(frames, busy, 1.5), Error);
    busy.f = f + 1;
    CHECK_THROWS_AS(overlay(frames, busy, 0.5), Error);
}
