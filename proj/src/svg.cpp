#include "itad/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "itad/errors.hpp"

namespace itad::svg {

namespace {

// Anchors of the diverging map at indices 0, 128, 255.
constexpr Rgb kLow{40, 60, 190};
constexpr Rgb kMid{245, 245, 245};
constexpr Rgb kHigh{190, 40, 40};

std::uint8_t lerp8(std::uint8_t a, std::uint8_t b, double t) {
    return std::uint8_t(std::lround(double(a) + (double(b) - double(a)) * t));
}

std::array<Rgb, 256> build_colormap() {
    std::array<Rgb, 256> cm{};
    for (int i = 0; i < 256; ++i) {
        if (i <= 128) {
            const double t = double(i) / 128.0;
            cm[i] = {lerp8(kLow.r, kMid.r, t), lerp8(kLow.g, kMid.g, t),
                     lerp8(kLow.b, kMid.b, t)};
        } else {
            const double t = double(i - 128) / 127.0;
            cm[i] = {lerp8(kMid.r, kHigh.r, t), lerp8(kMid.g, kHigh.g, t),
                     lerp8(kMid.b, kHigh.b, t)};
        }
    }
    return cm;
}

std::string color_attr(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kW = 720.0, kH = 480.0;
constexpr double kMargin = 48.0;

struct Frame {
    double xmin, xmax, ymin, ymax;
    double px(double x) const {
        return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
    }
    double py(double y) const {
        return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
    }
};

void open_svg(std::ofstream& out, const std::filesystem::path& path,
              const std::string& title) {
    out.open(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
        << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">"
        << title << "</text>\n";
}

void axes(std::ofstream& out, const Frame& f) {
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << kW - 2 * kMargin << "\" height=\"" << kH - 2 * kMargin
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kH - kMargin + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(f.xmin)
        << "</text>\n";
    out << "<text x=\"" << kW - kMargin << "\" y=\"" << kH - kMargin + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(f.xmax) << "</text>\n";
    out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kH - kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(f.ymin) << "</text>\n";
    out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << num(f.ymax) << "</text>\n";
}

constexpr const char* kSeriesColors[] = {"#1f4e9e", "#c23b22", "#2c8a4b",
                                         "#8a5fbf", "#c98a1c", "#3bb3c2"};

}  // namespace

const std::array<Rgb, 256>& colormap() {
    static const std::array<Rgb, 256> cm = build_colormap();
    return cm;
}

Rgb map_value(double v, double lo, double hi) {
    double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    return colormap()[std::size_t(std::lround(t * 255.0))];
}

void write_heatmap(const std::filesystem::path& path,
                   const std::vector<double>& ts, const std::vector<double>& xs,
                   const std::vector<std::vector<double>>& values,
                   const std::string& title) {
    if (ts.empty() || xs.empty()) throw IoError("heatmap input is empty");
    double lo = values[0][0], hi = values[0][0];
    for (const auto& row : values)
        for (double v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    std::ofstream out;
    open_svg(out, path, title);
    const Frame f{ts.front(), ts.back(), xs.front(), xs.back()};
    const double cw = (kW - 2 * kMargin) / double(ts.size());
    const double ch = (kH - 2 * kMargin) / double(xs.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const Rgb c = map_value(values[i][j], lo, hi);
            out << "<rect x=\"" << num(kMargin + double(i) * cw) << "\" y=\""
                << num(kH - kMargin - double(j + 1) * ch) << "\" width=\""
                << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5)
                << "\" fill=\"" << color_attr(c) << "\"/>\n";
        }
    }
    axes(out, f);
    out << "</svg>\n";
    out.close();
    if (out.fail()) throw IoError("failed writing " + path.string());
}

void write_lines(const std::filesystem::path& path,
                 const std::vector<Series>& series, const std::string& title) {
    if (series.empty()) throw IoError("line plot input is empty");
    Frame f{series[0].x.front(), series[0].x.front(), series[0].y.front(),
            series[0].y.front()};
    for (const auto& s : series) {
        for (double v : s.x) {
            f.xmin = std::min(f.xmin, v);
            f.xmax = std::max(f.xmax, v);
        }
        for (double v : s.y) {
            f.ymin = std::min(f.ymin, v);
            f.ymax = std::max(f.ymax, v);
        }
    }
    if (f.xmax == f.xmin) f.xmax = f.xmin + 1.0;
    if (f.ymax == f.ymin) f.ymax = f.ymin + 1.0;
    std::ofstream out;
    open_svg(out, path, title);
    axes(out, f);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kSeriesColors[k % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << num(f.px(s.x[i])) << "," << num(f.py(s.y[i])) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << kW - kMargin - 4 << "\" y=\""
            << kMargin + 14 + 14 * double(k)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    out.close();
    if (out.fail()) throw IoError("failed writing " + path.string());
}

void write_cobweb(const std::filesystem::path& path,
                  const std::vector<double>& grid_u,
                  const std::vector<double>& grid_map,
                  const std::vector<double>& orbit, const std::string& title) {
    std::ofstream out;
    open_svg(out, path, title);
    const Frame f{0.0, 1.0, 0.0, 1.0};
    axes(out, f);
    out << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(0))
        << "\" x2=\"" << num(f.px(1)) << "\" y2=\"" << num(f.py(1))
        << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"#1f4e9e\" stroke-width=\"1.5\" "
           "points=\"";
    for (std::size_t i = 0; i < grid_u.size(); ++i)
        out << num(f.px(grid_u[i])) << "," << num(f.py(grid_map[i])) << " ";
    out << "\"/>\n";
    if (orbit.size() > 1) {
        out << "<polyline fill=\"none\" stroke=\"#c23b22\" stroke-width=\"1\" "
               "points=\"";
        double x = orbit[0];
        out << num(f.px(x)) << "," << num(f.py(0.0)) << " ";
        for (std::size_t i = 1; i < orbit.size(); ++i) {
            const double y = orbit[i];
            out << num(f.px(x)) << "," << num(f.py(y)) << " ";
            out << num(f.px(y)) << "," << num(f.py(y)) << " ";
            x = y;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    out.close();
    if (out.fail()) throw IoError("failed writing " + path.string());
}

}  // namespace itad::svg
