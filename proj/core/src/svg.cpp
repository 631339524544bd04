#include "rgflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "rgflow/csv.hpp"

namespace rgflow {

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void write_chart_svg(const std::filesystem::path& csv_path, const std::string& x_column,
                     const std::vector<std::string>& y_columns,
                     const std::filesystem::path& svg_path, const ChartOptions& options) {
    const CsvTable table = read_csv(csv_path);
    const int xi = table.column_index(x_column);
    if (xi < 0) throw std::invalid_argument("write_chart_svg: no column " + x_column);
    std::vector<int> yis;
    for (const auto& name : y_columns) {
        const int yi = table.column_index(name);
        if (yi < 0) throw std::invalid_argument("write_chart_svg: no column " + name);
        yis.push_back(yi);
    }
    if (yis.empty()) throw std::invalid_argument("write_chart_svg: no series requested");

    auto y_value = [&](double y) {
        return options.log_y ? std::log10(std::max(y, 1e-300)) : y;
    };

    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool first = true;
    for (const auto& row : table.rows) {
        const double x = row[static_cast<std::size_t>(xi)];
        for (int yi : yis) {
            const double y = y_value(row[static_cast<std::size_t>(yi)]);
            if (first) {
                x_min = x_max = x;
                y_min = y_max = y;
                first = false;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (first) throw std::invalid_argument("write_chart_svg: CSV has no data rows");
    if (x_max == x_min) x_max = x_min + 1;
    if (y_max == y_min) y_max = y_min + 1;

    const double margin_left = 64, margin_right = 16, margin_top = 34, margin_bottom = 46;
    const double plot_w = options.width - margin_left - margin_right;
    const double plot_h = options.height - margin_top - margin_bottom;
    auto sx = [&](double x) { return margin_left + plot_w * (x - x_min) / (x_max - x_min); };
    auto sy = [&](double y) {
        return margin_top + plot_h * (1.0 - (y_value(y) - y_min) / (y_max - y_min));
    };

    if (svg_path.has_parent_path()) std::filesystem::create_directories(svg_path.parent_path());
    const std::filesystem::path tmp = svg_path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("write_chart_svg: cannot open " + tmp.string());

        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
            << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << " "
            << options.height << "\">\n";
        out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

        // axes frame and ticks
        out << "<rect x=\"" << fmt(margin_left) << "\" y=\"" << fmt(margin_top) << "\" width=\""
            << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
            << "\" fill=\"none\" stroke=\"#333\"/>\n";
        const int ticks = 5;
        for (int t = 0; t <= ticks; ++t) {
            const double fx = x_min + (x_max - x_min) * t / ticks;
            const double px = sx(fx);
            out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(margin_top + plot_h) << "\" x2=\""
                << fmt(px) << "\" y2=\"" << fmt(margin_top + plot_h + 5)
                << "\" stroke=\"#333\"/>\n";
            out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(margin_top + plot_h + 18)
                << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx) << "</text>\n";

            const double fy = y_min + (y_max - y_min) * t / ticks;
            const double py = margin_top + plot_h * (1.0 - static_cast<double>(t) / ticks);
            out << "<line x1=\"" << fmt(margin_left - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
                << fmt(margin_left) << "\" y2=\"" << fmt(py) << "\" stroke=\"#333\"/>\n";
            const double label = options.log_y ? std::pow(10.0, fy) : fy;
            out << "<text x=\"" << fmt(margin_left - 8) << "\" y=\"" << fmt(py + 4)
                << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(label) << "</text>\n";
        }

        for (std::size_t s = 0; s < yis.size(); ++s) {
            const char* color = kSeriesColors[s % (sizeof kSeriesColors / sizeof *kSeriesColors)];
            if (!options.scatter) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"1.5\" points=\"";
                for (const auto& row : table.rows)
                    out << fmt(sx(row[static_cast<std::size_t>(xi)])) << ","
                        << fmt(sy(row[static_cast<std::size_t>(yis[s])])) << " ";
                out << "\"/>\n";
            } else {
                for (const auto& row : table.rows)
                    out << "<circle cx=\"" << fmt(sx(row[static_cast<std::size_t>(xi)]))
                        << "\" cy=\"" << fmt(sy(row[static_cast<std::size_t>(yis[s])]))
                        << "\" r=\"2.2\" fill=\"" << color << "\"/>\n";
            }
            // legend entry
            const double ly = margin_top + 14 + 16 * static_cast<double>(s);
            out << "<rect x=\"" << fmt(margin_left + 8) << "\" y=\"" << fmt(ly - 8)
                << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
            out << "<text x=\"" << fmt(margin_left + 22) << "\" y=\"" << fmt(ly + 1)
                << "\" font-size=\"11\">" << xml_escape(y_columns[s]) << "</text>\n";
        }

        out << "<text x=\"" << fmt(options.width / 2.0) << "\" y=\"18\" font-size=\"14\" "
            << "text-anchor=\"middle\">" << xml_escape(options.title) << "</text>\n";
        out << "<text x=\"" << fmt(margin_left + plot_w / 2.0) << "\" y=\""
            << fmt(options.height - 8.0) << "\" font-size=\"12\" text-anchor=\"middle\">"
            << xml_escape(options.x_label) << "</text>\n";
        out << "<text x=\"14\" y=\"" << fmt(margin_top + plot_h / 2.0)
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << fmt(margin_top + plot_h / 2.0) << ")\">" << xml_escape(options.y_label)
            << "</text>\n";
        out << "</svg>\n";
        if (!out) throw std::runtime_error("write_chart_svg: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, svg_path);
}

}  // namespace rgflow
