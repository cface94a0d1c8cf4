#include "goalforge/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gf::kernels {

namespace {

inline void blob_max_row(float* row, int w, int y, Vec2 center, double inv_two_sigma2,
                         double amplitude) {
    double dy = static_cast<double>(y) - center.y;
    double dy2 = dy * dy;
    for (int x = 0; x < w; ++x) {
        double dx = static_cast<double>(x) - center.x;
        double v = amplitude * std::exp(-(dx * dx + dy2) * inv_two_sigma2);
        float fv = static_cast<float>(v);
        if (fv > row[x]) row[x] = fv;
    }
}

inline void overlay_row(std::uint8_t* row, int w, const float* c0, const float* c1,
                        const float* c2, double alpha) {
    for (int x = 0; x < w; ++x) {
        double r = row[3 * x + 0];
        double g = row[3 * x + 1];
        double b = row[3 * x + 2];
        if (c0) {
            double a = alpha * c0[x];
            r = (1.0 - a) * r + a * 255.0;
            g = (1.0 - a) * g;
            b = (1.0 - a) * b;
        }
        if (c1) {
            double a = alpha * c1[x];
            r = (1.0 - a) * r;
            g = (1.0 - a) * g + a * 255.0;
            b = (1.0 - a) * b;
        }
        if (c2) {
            double a = alpha * c2[x];
            r = (1.0 - a) * r;
            g = (1.0 - a) * g;
            b = (1.0 - a) * b + a * 255.0;
        }
        row[3 * x + 0] = static_cast<std::uint8_t>(std::clamp(std::lround(r), 0L, 255L));
        row[3 * x + 1] = static_cast<std::uint8_t>(std::clamp(std::lround(g), 0L, 255L));
        row[3 * x + 2] = static_cast<std::uint8_t>(std::clamp(std::lround(b), 0L, 255L));
    }
}

inline bool covers(const RasterShape& s, double px, double py) {
    switch (s.kind) {
    case RasterShape::Kind::Disc: {
        double dx = px - s.a.x, dy = py - s.a.y;
        return dx * dx + dy * dy <= s.r0 * s.r0;
    }
    case RasterShape::Kind::OrientedRect: {
        double dx = px - s.a.x, dy = py - s.a.y;
        double along = dx * s.axis.x + dy * s.axis.y;
        double across = -dx * s.axis.y + dy * s.axis.x;
        return std::abs(along) <= s.r0 && std::abs(across) <= s.r1;
    }
    case RasterShape::Kind::Capsule: {
        Vec2 p{px, py};
        Vec2 ab = s.axis - s.a;
        double len2 = ab.norm2();
        double t = len2 > 0.0 ? std::clamp((p - s.a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        Vec2 closest = s.a + ab * t;
        return (p - closest).norm2() <= s.r0 * s.r0;
    }
    }
    return false;
}

inline void raster_row(std::uint8_t* row, int w, int y,
                       const std::array<std::uint8_t, 3>& background,
                       const std::vector<RasterShape>& shapes) {
    for (int x = 0; x < w; ++x) {
        row[3 * x + 0] = background[0];
        row[3 * x + 1] = background[1];
        row[3 * x + 2] = background[2];
    }
    double py = static_cast<double>(y);
    for (const RasterShape& s : shapes) {
        for (int x = 0; x < w; ++x) {
            if (covers(s, static_cast<double>(x), py)) {
                row[3 * x + 0] = s.color[0];
                row[3 * x + 1] = s.color[1];
                row[3 * x + 2] = s.color[2];
            }
        }
    }
}

} // namespace

void blob_max_serial(float* field, int h, int w, Vec2 center, double sigma, double amplitude) {
    double inv = 1.0 / (2.0 * sigma * sigma);
    for (int y = 0; y < h; ++y) blob_max_row(field + std::size_t(y) * w, w, y, center, inv, amplitude);
}

void blob_max(float* field, int h, int w, Vec2 center, double sigma, double amplitude) {
    double inv = 1.0 / (2.0 * sigma * sigma);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) blob_max_row(field + std::size_t(y) * w, w, y, center, inv, amplitude);
}

void overlay_blend_serial(std::uint8_t* rgb, int h, int w, const float* ch_direct,
                          const float* ch_goal, const float* ch_mass, double alpha) {
    for (int y = 0; y < h; ++y) {
        std::size_t off = std::size_t(y) * w;
        overlay_row(rgb + 3 * off, w, ch_direct ? ch_direct + off : nullptr,
                    ch_goal ? ch_goal + off : nullptr, ch_mass ? ch_mass + off : nullptr, alpha);
    }
}

void overlay_blend(std::uint8_t* rgb, int h, int w, const float* ch_direct,
                   const float* ch_goal, const float* ch_mass, double alpha) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        std::size_t off = std::size_t(y) * w;
        overlay_row(rgb + 3 * off, w, ch_direct ? ch_direct + off : nullptr,
                    ch_goal ? ch_goal + off : nullptr, ch_mass ? ch_mass + off : nullptr, alpha);
    }
}

void raster_shapes_serial(std::uint8_t* rgb, int h, int w,
                          const std::array<std::uint8_t, 3>& background,
                          const std::vector<RasterShape>& shapes) {
    for (int y = 0; y < h; ++y) raster_row(rgb + std::size_t(y) * w * 3, w, y, background, shapes);
}

void raster_shapes(std::uint8_t* rgb, int h, int w,
                   const std::array<std::uint8_t, 3>& background,
                   const std::vector<RasterShape>& shapes) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) raster_row(rgb + std::size_t(y) * w * 3, w, y, background, shapes);
}

} // namespace gf::kernels
