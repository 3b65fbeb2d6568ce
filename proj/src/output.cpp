#include "rodrigues/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rodrigues/errors.hpp"

namespace rodrigues {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string Rgb::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

Rgb ramp_color(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37},
    }};
    if (!std::isfinite(t)) return {200, 200, 200};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    double f = t - static_cast<double>(i);
    auto mix = [&](int c) {
        return static_cast<unsigned char>(std::lround(stops[i][c] * (1 - f) + stops[i + 1][c] * f));
    };
    return {mix(0), mix(1), mix(2)};
}

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width_px)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width_px) {
    height_ = std::max(1, static_cast<int>(std::lround(width_px * (ymax - ymin) / (xmax - xmin))));
}

double SvgCanvas::px(double x) const { return (x - xmin_) / (xmax_ - xmin_) * width_; }
double SvgCanvas::py(double y) const { return (ymax_ - y) / (ymax_ - ymin_) * height_; }

namespace {
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}
} // namespace

void SvgCanvas::cell(double x0, double y0, double x1, double y1, const std::string& fill) {
    double a = px(std::min(x0, x1)), b = py(std::max(y0, y1));
    double w = std::abs(px(x1) - px(x0)), h = std::abs(py(y1) - py(y0));
    body_ += "<rect x=\"" + num(a) + "\" y=\"" + num(b) + "\" width=\"" + num(w + 0.3) + "\" height=\"" +
             num(h + 0.3) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgCanvas::dot(double x, double y, double radius_px, const std::string& fill) {
    body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"" + num(radius_px) + "\" fill=\"" +
             fill + "\"/>\n";
}

void SvgCanvas::square(double x, double y, double half_px, const std::string& stroke) {
    body_ += "<rect x=\"" + num(px(x) - half_px) + "\" y=\"" + num(py(y) - half_px) + "\" width=\"" +
             num(2 * half_px) + "\" height=\"" + num(2 * half_px) + "\" fill=\"none\" stroke=\"" + stroke + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke, double width_px) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width_px) + "\" points=\"";
    for (const auto& p : pts) body_ += num(px(p.real())) + "," + num(py(p.imag())) + " ";
    body_ += "\"/>\n";
}

void SvgCanvas::segment(double x0, double y0, double x1, double y1, const std::string& stroke, double width_px) {
    body_ += "<line x1=\"" + num(px(x0)) + "\" y1=\"" + num(py(y0)) + "\" x2=\"" + num(px(x1)) + "\" y2=\"" +
             num(py(y1)) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width_px) + "\"/>\n";
}

void SvgCanvas::label(double x, double y, const std::string& text) {
    body_ += "<text x=\"" + num(px(x)) + "\" y=\"" + num(py(y)) + "\" font-size=\"12\" font-family=\"sans-serif\">" +
             text + "</text>\n";
}

std::string SvgCanvas::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
       << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_ << "</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace rodrigues
