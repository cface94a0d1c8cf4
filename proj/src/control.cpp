#include "goalforge/control.hpp"

#include "goalforge/error.hpp"
#include "goalforge/kernels.hpp"
#include "goalforge/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace gf {

void EncodingCfg::validate() const {
    if (sigma_frac <= 0.0) throw Error(errc::bad_config, "sigma_frac must be positive");
    if (amplitude <= 0.0 || amplitude > 1.0)
        throw Error(errc::bad_config, "amplitude must be in (0,1]");
    if (!(path_frac_min <= path_frac_max) || path_frac_min < 0.0)
        throw Error(errc::bad_config, "path fraction range must be ordered and non-negative");
    if (duration_min < 1 || duration_min > duration_max)
        throw Error(errc::bad_config, "duration range must be ordered with min >= 1");
    if (!(mass_sigma_min <= mass_sigma_max) || mass_sigma_min <= 0.0)
        throw Error(errc::bad_config, "mass sigma range must be ordered and positive");
    if (!(mass_lo < mass_hi)) throw Error(errc::bad_config, "mass range must be ordered");
}

namespace {

void check_dims(int f, int h, int w) {
    if (f <= 0 || h <= 0 || w <= 0)
        throw Error(errc::bad_config, "tensor dims must be positive");
}

double diagonal(int h, int w) { return std::hypot(static_cast<double>(h), static_cast<double>(w)); }

} // namespace

ChannelField encode_force_channel(Vec2 pixel_point, double pixel_angle, double magnitude,
                                  int start_frame, const EncodingCfg& cfg, int f, int h, int w) {
    cfg.validate();
    check_dims(f, h, w);
    if (magnitude < 0.0 || magnitude > 1.0)
        throw Error(errc::bad_config, "magnitude must be normalized to [0,1]");
    if (start_frame < 0) throw Error(errc::bad_config, "start_frame must be >= 0");

    int duration = static_cast<int>(
        std::lround(cfg.duration_min + magnitude * (cfg.duration_max - cfg.duration_min)));
    if (start_frame + duration > f)
        throw Error(errc::duration_overflow, "blob window " + std::to_string(start_frame) + "+" +
                                                 std::to_string(duration) + " exceeds " +
                                                 std::to_string(f) + " frames");

    double diag = diagonal(h, w);
    double path = (cfg.path_frac_min + magnitude * (cfg.path_frac_max - cfg.path_frac_min)) * diag;
    double sigma = cfg.sigma_frac * diag;
    Vec2 step = unit_from_angle(pixel_angle);

    ChannelField field;
    field.f = f;
    field.h = h;
    field.w = w;
    field.data.assign(static_cast<std::size_t>(f) * h * w, 0.0f);
    for (int k = 0; k < duration; ++k) {
        double s = duration > 1 ? path * k / (duration - 1) : 0.0;
        Vec2 center = pixel_point + step * s;
        kernels::blob_max(field.plane(start_frame + k), h, w, center, sigma, cfg.amplitude);
    }
    return field;
}

ChannelField encode_goal_channel(Vec2 target_pixel_point, double pixel_angle, double magnitude,
                                 const EncodingCfg& cfg, int f, int h, int w) {
    return encode_force_channel(target_pixel_point, pixel_angle, magnitude, 0, cfg, f, h, w);
}

ChannelField encode_mass_channel(const std::vector<std::pair<Vec2, double>>& objects,
                                 const EncodingCfg& cfg, int f, int h, int w) {
    cfg.validate();
    check_dims(f, h, w);

    double scale = h / 240.0; // sigma range is specified at 240-px height
    std::vector<float> plane(static_cast<std::size_t>(h) * w, 0.0f);
    for (const auto& [px, mass] : objects) {
        if (mass < cfg.mass_lo || mass > cfg.mass_hi)
            throw Error(errc::mass_out_of_range,
                        "mass " + std::to_string(mass) + " outside configured range");
        double t = (mass - cfg.mass_lo) / (cfg.mass_hi - cfg.mass_lo);
        double sigma = (cfg.mass_sigma_min + t * (cfg.mass_sigma_max - cfg.mass_sigma_min)) * scale;
        kernels::blob_max(plane.data(), h, w, px, sigma, cfg.amplitude);
    }

    ChannelField field;
    field.f = f;
    field.h = h;
    field.w = w;
    field.data.resize(static_cast<std::size_t>(f) * h * w);
    for (int k = 0; k < f; ++k)
        std::copy(plane.begin(), plane.end(), field.data.begin() + static_cast<std::size_t>(k) * h * w);
    return field;
}

ControlTensor assemble(const std::optional<ChannelField>& direct,
                       const std::optional<ChannelField>& goal,
                       const std::optional<ChannelField>& mass, const MaskPolicy& policy,
                       std::uint64_t seed) {
    const ChannelField* any = direct ? &*direct : goal ? &*goal : mass ? &*mass : nullptr;
    if (!any) throw Error(errc::missing_channel, "assemble requires at least one channel");
    for (const auto* ch : {direct ? &*direct : nullptr, goal ? &*goal : nullptr,
                           mass ? &*mass : nullptr}) {
        if (ch && (ch->f != any->f || ch->h != any->h || ch->w != any->w))
            throw Error(errc::dimension_mismatch, "channel shapes disagree");
    }

    bool keep_direct = false, keep_goal = false, keep_mass = mass.has_value();
    Rng rng(seed);
    switch (policy.mode) {
    case MaskPolicy::Mode::DirectOnly:
        if (!direct) throw Error(errc::missing_channel, "direct-only policy without a direct channel");
        keep_direct = true;
        break;
    case MaskPolicy::Mode::GoalOnly:
        if (!goal) throw Error(errc::missing_channel, "goal-only policy without a goal channel");
        keep_goal = true;
        break;
    case MaskPolicy::Mode::RandomCausal:
        if (!direct && !goal)
            throw Error(errc::missing_channel, "random-causal policy without any causal channel");
        if (direct && goal) {
            keep_goal = rng.bernoulli(policy.p_goal);
            keep_direct = !keep_goal;
        } else {
            keep_direct = direct.has_value();
            keep_goal = goal.has_value();
        }
        if (keep_mass) keep_mass = !rng.bernoulli(policy.p_massdrop);
        break;
    }

    ControlTensor tensor;
    tensor.f = any->f;
    tensor.h = any->h;
    tensor.w = any->w;
    tensor.data.assign(static_cast<std::size_t>(tensor.f) * ControlTensor::channels * tensor.h *
                           tensor.w,
                       0.0f);
    const std::size_t plane_size = static_cast<std::size_t>(tensor.h) * tensor.w;
    auto copy_channel = [&](const ChannelField& src, int channel) {
        for (int k = 0; k < tensor.f; ++k)
            std::memcpy(tensor.plane(k, channel), src.plane(k), plane_size * sizeof(float));
    };
    if (keep_direct) copy_channel(*direct, 0);
    if (keep_goal) copy_channel(*goal, 1);
    if (keep_mass) copy_channel(*mass, 2);
    return tensor;
}

std::vector<Image> overlay(const std::vector<Image>& frames, const ControlTensor& tensor,
                           double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw Error(errc::bad_config, "alpha must be in [0,1]");
    if (static_cast<int>(frames.size()) != tensor.f)
        throw Error(errc::dimension_mismatch, "frame count differs from tensor frame count");
    for (const Image& img : frames)
        if (img.h != tensor.h || img.w != tensor.w)
            throw Error(errc::dimension_mismatch, "frame size differs from tensor size");

    std::vector<Image> out = frames;
    for (int k = 0; k < tensor.f; ++k)
        kernels::overlay_blend(out[k].rgb.data(), tensor.h, tensor.w, tensor.plane(k, 0),
                               tensor.plane(k, 1), tensor.plane(k, 2), alpha);
    return out;
}

namespace {

constexpr char kMagic[4] = {'G', 'F', 'C', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "tensor io assumes a little-endian host");

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_u32(std::FILE* f, std::uint32_t v) {
    if (std::fwrite(&v, 4, 1, f) != 1) throw Error(errc::io, "tensor write failed");
}

std::uint32_t read_u32(std::FILE* f) {
    std::uint32_t v = 0;
    if (std::fread(&v, 4, 1, f) != 1) throw Error(errc::shape_mismatch, "tensor header truncated");
    return v;
}

} // namespace

void write_tensor(const ControlTensor& tensor, const std::string& path) {
    check_dims(tensor.f, tensor.h, tensor.w);
    std::size_t expected = static_cast<std::size_t>(tensor.f) * ControlTensor::channels *
                           tensor.h * tensor.w;
    if (tensor.data.size() != expected)
        throw Error(errc::shape_mismatch, "tensor data size disagrees with dims");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw Error(errc::io, "cannot open for writing: " + path);
    if (std::fwrite(kMagic, 1, 4, fp.get()) != 4) throw Error(errc::io, "tensor write failed");
    write_u32(fp.get(), kVersion);
    write_u32(fp.get(), static_cast<std::uint32_t>(tensor.f));
    write_u32(fp.get(), static_cast<std::uint32_t>(tensor.h));
    write_u32(fp.get(), static_cast<std::uint32_t>(tensor.w));
    if (std::fwrite(tensor.data.data(), sizeof(float), tensor.data.size(), fp.get()) !=
        tensor.data.size())
        throw Error(errc::io, "tensor write failed");
}

ControlTensor read_tensor(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw Error(errc::io, "cannot open for reading: " + path);

    char magic[4] = {};
    if (std::fread(magic, 1, 4, fp.get()) != 4)
        throw Error(errc::bad_magic, "file too short for magic: " + path);
    if (std::memcmp(magic, kMagic, 4) != 0) throw Error(errc::bad_magic, "bad magic: " + path);
    std::uint32_t version = read_u32(fp.get());
    if (version != kVersion)
        throw Error(errc::bad_version, "unsupported tensor version " + std::to_string(version));

    ControlTensor tensor;
    tensor.f = static_cast<int>(read_u32(fp.get()));
    tensor.h = static_cast<int>(read_u32(fp.get()));
    tensor.w = static_cast<int>(read_u32(fp.get()));
    check_dims(tensor.f, tensor.h, tensor.w);

    std::size_t count = static_cast<std::size_t>(tensor.f) * ControlTensor::channels * tensor.h *
                        tensor.w;
    tensor.data.resize(count);
    if (std::fread(tensor.data.data(), sizeof(float), count, fp.get()) != count)
        throw Error(errc::shape_mismatch, "tensor payload shorter than header declares");
    char extra;
    if (std::fread(&extra, 1, 1, fp.get()) == 1)
        throw Error(errc::shape_mismatch, "tensor payload longer than header declares");
    return tensor;
}

} // namespace gf
