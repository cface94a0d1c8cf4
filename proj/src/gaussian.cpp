#include "goalforge/gaussian.hpp"

#include "goalforge/error.hpp"
#include "goalforge/kernels.hpp"

namespace gf {

std::vector<float> gaussian_field(Vec2 center, const GaussianBlobCfg& cfg, int h, int w) {
    if (cfg.sigma <= 0.0)
        throw Error(errc::bad_config, "gaussian sigma must be positive");
    if (cfg.amplitude <= 0.0 || cfg.amplitude > 1.0)
        throw Error(errc::bad_config, "gaussian amplitude must be in (0, 1]");
    if (h <= 0 || w <= 0)
        throw Error(errc::bad_config, "field dimensions must be positive");
    std::vector<float> field(static_cast<std::size_t>(h) * w, 0.0f);
    kernels::blob_max(field.data(), h, w, center, cfg.sigma, cfg.amplitude);
    return field;
}

} // namespace gf
