#pragma once

#include <string>
#include <vector>

namespace hjlab {

/// Fixed "%.12g" rendering so reruns emit byte-identical reports.
std::string format_double(double x);

std::string csv_line(const std::vector<std::string>& cells);

void write_text_file(const std::string& path, const std::string& content);

/// Minimal SVG 1.1 line plot (log-log when requested); no external deps.
std::string svg_line_plot(const std::vector<std::pair<double, double>>& points,
                          const std::string& x_label, const std::string& y_label, bool loglog);

}  // namespace hjlab
