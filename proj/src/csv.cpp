#include "lagbench/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "lagbench/errors.hpp"

namespace lagbench {

namespace {

void append_real(std::string& out, double value) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
    out.append(buf, static_cast<std::size_t>(len));
}

std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

double parse_real(std::string_view cell, std::size_t line) {
    const std::string s(cell);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw DataError("line " + std::to_string(line) + ": cannot parse number '" + s + "'");
    }
    return v;
}

}  // namespace

std::string dataset_to_csv(const Dataset& data, CsvView view) {
    std::string out = "time";
    for (std::size_t j = 0; j < data.cols(); ++j) out += ",X" + std::to_string(j);
    out += '\n';
    for (std::size_t t = 0; t < data.rows(); ++t) {
        append_real(out, data.timestamps[t]);
        for (std::size_t j = 0; j < data.cols(); ++j) {
            out += ',';
            const bool seen = data.observed(t, j);
            switch (view) {
                case CsvView::observed:
                    if (seen) append_real(out, data.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)));
                    break;
                case CsvView::complete:
                    append_real(out, data.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)));
                    break;
                case CsvView::mask:
                    out += seen ? '1' : '0';
                    break;
            }
        }
        out += '\n';
    }
    return out;
}

Dataset dataset_from_csv(std::string_view data_csv, std::optional<std::string_view> mask_csv) {
    const auto lines = split_lines(data_csv);
    if (lines.empty()) throw DataError("empty data CSV");
    const auto header = split_line(lines[0]);
    if (header.size() < 2 || header[0] != "time") throw DataError("data CSV header must start with 'time,X0'");
    const std::size_t n = header.size() - 1;
    const std::size_t rows = lines.size() - 1;

    Dataset out;
    out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
    BoolMatrix mask = BoolMatrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n), true);
    bool any_missing = false;
    out.timestamps.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto cells = split_line(lines[r + 1]);
        if (cells.size() != n + 1) {
            throw DataError("line " + std::to_string(r + 2) + ": expected " + std::to_string(n + 1) + " cells");
        }
        out.timestamps[r] = parse_real(cells[0], r + 2);
        for (std::size_t j = 0; j < n; ++j) {
            if (cells[j + 1].empty()) {
                mask(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = false;
                any_missing = true;
            } else {
                out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = parse_real(cells[j + 1], r + 2);
            }
        }
    }
    if (mask_csv) {
        const auto mlines = split_lines(*mask_csv);
        if (mlines.size() != lines.size()) throw DataError("mask CSV row count differs from data CSV");
        for (std::size_t r = 0; r < rows; ++r) {
            const auto cells = split_line(mlines[r + 1]);
            if (cells.size() != n + 1) throw DataError("mask CSV line " + std::to_string(r + 2) + " has wrong width");
            for (std::size_t j = 0; j < n; ++j) {
                const bool seen = cells[j + 1] == "1";
                if (!seen && cells[j + 1] != "0") throw DataError("mask cells must be 0 or 1");
                mask(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = seen;
                any_missing = any_missing || !seen;
            }
        }
        any_missing = true;
    }
    if (any_missing) out.mask = std::move(mask);
    out.validate();
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace lagbench
