#pragma once

#include <complex>
#include <string>
#include <vector>

namespace rodrigues {

// Shortest round-trip form with 17 significant digits; "nan"/"inf" spelled out.
std::string format_double(double v);

struct Rgb {
    unsigned char r, g, b;
    std::string hex() const;
};

// Perceptually ordered ramp, t in [0, 1].
Rgb ramp_color(double t);

// Minimal SVG canvas in world coordinates (y up).
class SvgCanvas {
public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width_px = 640);

    void cell(double x0, double y0, double x1, double y1, const std::string& fill);
    void dot(double x, double y, double radius_px, const std::string& fill);
    void square(double x, double y, double half_px, const std::string& stroke);
    void polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke, double width_px = 1.5);
    void segment(double x0, double y0, double x1, double y1, const std::string& stroke, double width_px = 1.0);
    void label(double x, double y, const std::string& text);

    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;

    double xmin_, xmax_, ymin_, ymax_;
    int width_, height_;
    std::string body_;
};

// Write text to a file, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace rodrigues
