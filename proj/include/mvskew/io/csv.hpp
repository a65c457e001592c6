#ifndef MVSKEW_IO_CSV_HPP
#define MVSKEW_IO_CSV_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/moments.hpp"

namespace mvskew::io {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto result = std::from_chars(first, last, out);
    return result.ec == std::errc{} && result.ptr == last;
}

} // namespace detail

/**
 * Read a comma-separated numeric grid. The first row is treated as a header
 * of column names when any of its cells is non-numeric; otherwise it is
 * data. Every data row must have the same number of cells; empty or
 * non-numeric cells are errors (no missing-value support).
 */
inline Eigen::MatrixXd read_numeric_csv(const std::string& path,
                                        std::vector<std::string>* names_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::size_t width = 0;
    std::string line;
    long lineno = 0;
    bool saw_first = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv_line(line);

        if (!saw_first) {
            saw_first = true;
            bool all_numeric = true;
            double tmp;
            for (const auto& c : cells)
                if (!detail::parse_double(c, tmp)) {
                    all_numeric = false;
                    break;
                }
            if (!all_numeric) {
                names.assign(cells.begin(), cells.end());
                width = cells.size();
                continue;
            }
            width = cells.size();
        }

        if (cells.size() != width)
            throw DimensionError("'" + path + "': row " + std::to_string(lineno) +
                                 " has " + std::to_string(cells.size()) +
                                 " cells, expected " + std::to_string(width));

        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c)
            if (!detail::parse_double(cells[c], row[c]))
                throw ParseError("'" + path + "': cell is not a number", lineno,
                                 static_cast<long>(c + 1));
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw ParseError("'" + path + "': no data rows");

    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    if (names_out) *names_out = std::move(names);
    return data;
}

/// Read a returns CSV: rows are periods, columns are assets.
inline ReturnsMatrix read_returns_csv(const std::string& path) {
    ReturnsMatrix out;
    out.data = read_numeric_csv(path, &out.asset_names);
    return out;
}

/// Write a matrix as CSV with 17 significant digits (lossless round trip).
inline void write_numeric_csv(std::ostream& out, const Eigen::MatrixXd& m,
                              const std::vector<std::string>& header = {}) {
    char buf[64];
    if (!header.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << "\n";
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
}

} // namespace mvskew::io

#endif // MVSKEW_IO_CSV_HPP
