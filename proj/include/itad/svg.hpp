#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace itad::svg {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

// Fixed 256-entry diverging colormap (blue -> white -> red), generated by
// piecewise-linear interpolation of pinned anchors so images are
// reproducible byte-for-byte.
const std::array<Rgb, 256>& colormap();
Rgb map_value(double v, double lo, double hi);

// Heatmap of matrix values over (t,x); one rect per cell.
void write_heatmap(const std::filesystem::path& path,
                   const std::vector<double>& ts, const std::vector<double>& xs,
                   const std::vector<std::vector<double>>& values,
                   const std::string& title);

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_lines(const std::filesystem::path& path,
                 const std::vector<Series>& series, const std::string& title);

// Cobweb diagram: map curve, diagonal, and the orbit staircase.
void write_cobweb(const std::filesystem::path& path,
                  const std::vector<double>& grid_u,
                  const std::vector<double>& grid_map,
                  const std::vector<double>& orbit, const std::string& title);

}  // namespace itad::svg
