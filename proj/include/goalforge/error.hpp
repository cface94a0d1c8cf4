#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gf {

/// Domain error carrying a stable machine-readable code alongside the
/// human-readable message. Codes are kebab-case and show up verbatim in
/// CLI error JSON, so they must stay backward compatible.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
// core-math
inline constexpr const char* point_behind_camera = "point-behind-camera";
inline constexpr const char* degenerate_projection = "degenerate-projection";
// physics
inline constexpr const char* invalid_target = "invalid-target";
inline constexpr const char* non_convergent = "non-convergent";
inline constexpr const char* unknown_target = "unknown-target";
inline constexpr const char* bad_scene = "bad-scene";
// planner
inline constexpr const char* already_touching = "already-touching";
inline constexpr const char* no_feasible_plan = "no-feasible-plan";
// control-signal
inline constexpr const char* duration_overflow = "duration-overflow";
inline constexpr const char* mass_out_of_range = "mass-out-of-range";
inline constexpr const char* missing_channel = "missing-channel";
inline constexpr const char* dimension_mismatch = "dimension-mismatch";
inline constexpr const char* io = "io";
inline constexpr const char* bad_magic = "bad-magic";
inline constexpr const char* bad_version = "bad-version";
inline constexpr const char* shape_mismatch = "shape-mismatch";
// datagen
inline constexpr const char* placement_failure = "placement-failure";
inline constexpr const char* bad_family = "bad-family";
// eval
inline constexpr const char* support_mismatch = "support-mismatch";
inline constexpr const char* empty_counts = "empty-counts";
inline constexpr const char* no_valid_trials = "no-valid-trials";
inline constexpr const char* no_collision_detected = "no-collision-detected";
inline constexpr const char* insufficient_groups = "insufficient-groups";
// cli / config
inline constexpr const char* bad_config = "bad-config";
inline constexpr const char* missing_tensor = "missing-tensor";
} // namespace errc

} // namespace gf
