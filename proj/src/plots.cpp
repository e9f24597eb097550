#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lagbench/csv.hpp"
#include "lagbench/errors.hpp"
#include "lagbench/suite.hpp"

namespace lagbench {

namespace fs = std::filesystem;

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

enum class Metric { tpr, fdr, shd };

double metric_value(const EvalReport& r, Metric m) {
    switch (m) {
        case Metric::tpr: return r.tpr;
        case Metric::fdr: return r.fdr;
        case Metric::shd: return static_cast<double>(r.shd);
    }
    return 0.0;
}

std::string bar_chart_svg(const ResultsTable& table, Metric metric, std::string_view title) {
    const double group_width = 18.0 * static_cast<double>(std::max<std::size_t>(1, table.algorithms.size())) + 14.0;
    const double left = 60, top = 40, plot_h = 260, bottom = 120;
    const double plot_w = group_width * static_cast<double>(table.rows.size());
    const double width = left + plot_w + 160, height = top + plot_h + bottom;

    double ymax = 1.0;
    if (metric == Metric::shd) {
        for (const auto& row : table.rows) {
            for (const auto& cell : row.cells) {
                if (cell.report) ymax = std::max(ymax, metric_value(*cell.report, metric));
            }
        }
        ymax = std::ceil(ymax * 1.1);
    }

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
       << "</text>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = ymax * tick / 4.0;
        const double y = top + plot_h - plot_h * tick / 4.0;
        os << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
           << num(y) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4)
           << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const double gx = left + group_width * static_cast<double>(r) + 7;
        for (std::size_t a = 0; a < row.cells.size(); ++a) {
            if (!row.cells[a].report) continue;
            const double v = metric_value(*row.cells[a].report, metric);
            const double h = ymax > 0 ? plot_h * v / ymax : 0.0;
            os << "<rect x=\"" << num(gx + 18.0 * static_cast<double>(a)) << "\" y=\"" << num(top + plot_h - h)
               << "\" width=\"16\" height=\"" << num(h) << "\" fill=\"" << kPalette[a % 10] << "\"><title>"
               << escape(row.dataset_id) << ' ' << escape(table.algorithms[a]) << ": " << num(v)
               << "</title></rect>\n";
        }
        const double lx = gx + (group_width - 14) / 2;
        const double ly = top + plot_h + 10;
        os << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" font-family=\"sans-serif\" font-size=\"10\" "
           << "transform=\"rotate(60 " << num(lx) << ' ' << num(ly) << ")\">" << escape(row.dataset_id) << "</text>\n";
    }
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(left + plot_w)
       << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"black\"/>\n";
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
        const double y = top + 16.0 * static_cast<double>(a);
        os << "<rect x=\"" << num(left + plot_w + 20) << "\" y=\"" << num(y) << "\" width=\"10\" height=\"10\" fill=\""
           << kPalette[a % 10] << "\"/>\n";
        os << "<text x=\"" << num(left + plot_w + 36) << "\" y=\"" << num(y + 9)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(table.algorithms[a]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace

std::string series_svg(const Dataset& data, std::string_view title) {
    const double left = 60, top = 40, plot_w = 800, plot_h = 300;
    const double width = left + plot_w + 80, height = top + plot_h + 40;
    double tmin = data.timestamps.empty() ? 0.0 : data.timestamps.front();
    double tmax = data.timestamps.empty() ? 1.0 : data.timestamps.back();
    if (tmax <= tmin) tmax = tmin + 1.0;
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (std::size_t t = 0; t < data.rows(); ++t) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (!data.observed(t, j)) continue;
            const double v = data.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
            vmin = first ? v : std::min(vmin, v);
            vmax = first ? v : std::max(vmax, v);
            first = false;
        }
    }
    if (vmax <= vmin) vmax = vmin + 1.0;
    auto px = [&](double t) { return left + plot_w * (t - tmin) / (tmax - tmin); };
    auto py = [&](double v) { return top + plot_h - plot_h * (v - vmin) / (vmax - vmin); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(left) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << escape(title)
       << "</text>\n";
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\""
       << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + 4)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << num(vmax) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + plot_h)
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << num(vmin) << "</text>\n";
    for (std::size_t j = 0; j < data.cols(); ++j) {
        // Missing cells split the trace into separate polylines.
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                os << "<polyline fill=\"none\" stroke-width=\"0.8\" stroke=\"" << kPalette[j % 10] << "\" points=\""
                   << points << "\"/>\n";
            }
            points.clear();
        };
        for (std::size_t t = 0; t < data.rows(); ++t) {
            if (!data.observed(t, j)) {
                flush();
                continue;
            }
            const double v = data.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
            points += num(px(data.timestamps[t])) + "," + num(py(v)) + " ";
        }
        flush();
        os << "<text x=\"" << num(left + plot_w + 10) << "\" y=\"" << num(top + 12 + 14.0 * static_cast<double>(j))
           << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << kPalette[j % 10] << "\">X" << j
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<fs::path> emit_plots(const ResultsTable& results, const std::vector<DatasetEntry>& datasets,
                                 const fs::path& out_dir, std::vector<std::string>* warnings) {
    std::vector<fs::path> written;
    bool any_report = false;
    for (const auto& row : results.rows) {
        for (const auto& cell : row.cells) any_report = any_report || cell.report.has_value();
    }
    if (!any_report) {
        if (warnings) warnings->push_back("no results to plot; nothing written");
        return written;
    }
    {
        const std::pair<Metric, const char*> charts[] = {
            {Metric::tpr, "tpr"}, {Metric::fdr, "fdr"}, {Metric::shd, "shd"}};
        for (const auto& [metric, name] : charts) {
            std::string title = std::string(name);
            std::transform(title.begin(), title.end(), title.begin(), ::toupper);
            const fs::path path = out_dir / (std::string(name) + ".svg");
            write_text_file(path, bar_chart_svg(results, metric, title));
            written.push_back(path);
        }
    }
    for (const auto& d : datasets) {
        const fs::path data_path = d.dir / "data.csv";
        if (!fs::exists(data_path)) {
            if (warnings) warnings->push_back("dataset " + d.dataset_id + " not generated; skipping its line plot");
            continue;
        }
        std::optional<std::string> mask;
        if (fs::exists(d.dir / "mask.csv")) mask = read_text_file(d.dir / "mask.csv");
        const std::string text = read_text_file(data_path);
        const Dataset data = dataset_from_csv(text, mask ? std::optional<std::string_view>(*mask) : std::nullopt);
        const fs::path path = out_dir / "series" / (d.dataset_id + ".svg");
        write_text_file(path, series_svg(data, d.dataset_id));
        written.push_back(path);
    }
    return written;
}

}  // namespace lagbench
