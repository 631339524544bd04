#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rgflow {

struct ChartOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 720;
    int height = 480;
    bool log_y = false;
    bool scatter = false;  // markers only, no polyline
};

/// Renders one or more named series from a CSV file (as written by
/// CsvWriter) into a self-contained SVG line/scatter chart. The chart is a
/// pure view of the CSV rows: x_column against each y_column.
void write_chart_svg(const std::filesystem::path& csv_path, const std::string& x_column,
                     const std::vector<std::string>& y_columns,
                     const std::filesystem::path& svg_path, const ChartOptions& options);

}  // namespace rgflow
