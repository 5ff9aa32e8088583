#include "hjlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hjlab/errors.hpp"

namespace hjlab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
}

std::string svg_line_plot(const std::vector<std::pair<double, double>>& points,
                          const std::string& x_label, const std::string& y_label, bool loglog) {
    const int w = 480, hgt = 320, margin = 48;
    auto tx = [&](double v) { return loglog ? std::log10(std::max(v, 1e-300)) : v; };
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [x, y] : points) {
        xmin = std::min(xmin, tx(x));
        xmax = std::max(xmax, tx(x));
        ymin = std::min(ymin, tx(y));
        ymax = std::max(ymax, tx(y));
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    auto px = [&](double x) {
        return margin + (tx(x) - xmin) / (xmax - xmin) * (w - 2 * margin);
    };
    auto py = [&](double y) {
        return hgt - margin - (tx(y) - ymin) / (ymax - ymin) * (hgt - 2 * margin);
    };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(w) + "\" height=\"" + std::to_string(hgt) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points)
        svg += format_double(px(x)) + "," + format_double(py(y)) + " ";
    svg += "\"/>\n";
    for (const auto& [x, y] : points)
        svg += "<circle cx=\"" + format_double(px(x)) + "\" cy=\"" + format_double(py(y)) +
               "\" r=\"3\" fill=\"black\"/>\n";
    svg += "<text x=\"" + std::to_string(w / 2) + "\" y=\"" + std::to_string(hgt - 10) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + x_label + "</text>\n";
    svg += "<text x=\"14\" y=\"" + std::to_string(hgt / 2) +
           "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " +
           std::to_string(hgt / 2) + ")\">" + y_label + "</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace hjlab
