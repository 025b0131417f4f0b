#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "isoembed/core.hpp"

namespace isoembed {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
    cell = trim(cell);
    if (cell.empty()) throw LoadError("line " + std::to_string(line_no) + ": empty cell", line_no);
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
        throw LoadError("line " + std::to_string(line_no) + ": '" + std::string(cell) + "' is not a number",
                        line_no);
    }
    if (!std::isfinite(value)) {
        throw LoadError("line " + std::to_string(line_no) + ": non-finite value '" + std::string(cell) + "'",
                        line_no);
    }
    return value;
}

std::vector<double> split_row(std::string_view line, MatrixFormat format, std::size_t line_no) {
    std::vector<double> row;
    const bool comma = format == MatrixFormat::Csv ||
                       (format == MatrixFormat::Auto && line.find(',') != std::string_view::npos);
    if (comma) {
        std::size_t start = 0;
        while (true) {
            const std::size_t pos = line.find(',', start);
            row.push_back(parse_cell(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start),
                                     line_no));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return row;
    }
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) ++j;
        row.push_back(parse_cell(line.substr(i, j - i), line_no));
        i = j;
    }
    return row;
}

PointSet<double> parse_stream(std::istream& in, const LoadOptions& options) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool header_pending = options.skip_header;
    while (std::getline(in, raw)) {
        ++line_no;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto row = split_row(line, options.format, line_no);
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw LoadError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                " columns, found " + std::to_string(row.size()),
                            line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyInputError("input contains no data rows");

    Matrix<double> m(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return PointSet<double>(std::move(m));
}

}  // namespace

PointSet<double> load_points(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return parse_stream(in, options);
}

PointSet<double> parse_points(const std::string& text, const LoadOptions& options) {
    std::istringstream in(text);
    return parse_stream(in, options);
}

std::string fingerprint_hex(std::uint64_t hash) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return out;
}

}  // namespace isoembed
