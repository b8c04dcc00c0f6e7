#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rauzy/errors.hpp"
#include "rauzy/fractal.hpp"

namespace rauzy {

struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, top row first, 3 bytes per pixel
};

/// Color of label k among n labels: hue 360k/n, saturation 0.75, value 0.95,
/// channels rounded half-up to bytes.
inline std::array<std::uint8_t, 3> palette_color(int k, int n) {
    const double h = 360.0 * k / (n > 0 ? n : 1);
    const double s = 0.75, v = 0.95;
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    auto byte = [](double t) { return static_cast<std::uint8_t>(std::floor(255.0 * t + 0.5)); };
    return {byte(r + m), byte(g + m), byte(b + m)};
}

/// Plot each point as a single pixel on white, bounding box plus a 5% margin
/// per axis, second coordinate increasing upward. Degenerate extents center
/// the points. Output is byte-deterministic for identical input.
inline RasterImage render_ppm(const PointCloud& cloud, int width, int height) {
    if (width < 16 || height < 16) throw validation_error("image needs width, height >= 16");
    RasterImage img{width, height, {}};
    img.rgb.assign(static_cast<std::size_t>(width) * height * 3, 255);
    if (cloud.size() == 0) return img;

    const int n_labels = static_cast<int>(cloud.label_names.empty()
                                              ? 1
                                              : cloud.label_names.size());
    std::vector<std::array<std::uint8_t, 3>> colors(static_cast<std::size_t>(n_labels));
    for (int k = 0; k < n_labels; ++k) colors[static_cast<std::size_t>(k)] = palette_color(k, n_labels);

    auto coord = [&](const double* p, int axis) { return cloud.dim > axis ? p[axis] : 0.0; };

    double lo[2], hi[2];
    for (int a = 0; a < 2; ++a) {
        lo[a] = hi[a] = coord(cloud.point(0), a);
        for (std::size_t i = 1; i < cloud.size(); ++i) {
            lo[a] = std::min(lo[a], coord(cloud.point(i), a));
            hi[a] = std::max(hi[a], coord(cloud.point(i), a));
        }
        const double margin = 0.05 * (hi[a] - lo[a]);
        lo[a] -= margin;
        hi[a] += margin;
    }

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double* p = cloud.point(i);
        int px, py;
        if (hi[0] > lo[0]) {
            px = static_cast<int>((coord(p, 0) - lo[0]) / (hi[0] - lo[0]) * width);
            px = std::min(std::max(px, 0), width - 1);
        } else {
            px = width / 2;
        }
        if (hi[1] > lo[1]) {
            const int row_from_bottom = static_cast<int>((coord(p, 1) - lo[1]) / (hi[1] - lo[1]) * height);
            py = height - 1 - std::min(std::max(row_from_bottom, 0), height - 1);
        } else {
            py = height / 2;
        }
        const auto& c = colors[static_cast<std::size_t>(
            cloud.labels[i] >= 0 && cloud.labels[i] < n_labels ? cloud.labels[i] : 0)];
        std::uint8_t* px_ptr = img.rgb.data() + (static_cast<std::size_t>(py) * width + px) * 3;
        px_ptr[0] = c[0];
        px_ptr[1] = c[1];
        px_ptr[2] = c[2];
    }
    return img;
}

/// Binary PPM: "P6\n<width> <height>\n255\n" then raw RGB rows top to bottom.
inline std::string ppm_bytes(const RasterImage& img) {
    std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
    return out;
}

inline void write_ppm(const RasterImage& img, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string bytes = ppm_bytes(img);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write to " + path.string());
}

} // namespace rauzy
