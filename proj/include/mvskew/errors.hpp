#ifndef MVSKEW_ERRORS_HPP
#define MVSKEW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mvskew {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape mismatch between operands (vector lengths, matrix dimensions).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// A NaN or infinity showed up where a finite value is required.
class NonFiniteError : public Error {
public:
    explicit NonFiniteError(const std::string& msg) : Error(msg) {}
};

/// Input file could not be parsed; carries a 1-based location when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long row = 0, long column = 0)
        : Error(format(msg, row, column)), row_(row), column_(column) {}

    long row() const { return row_; }
    long column() const { return column_; }

private:
    static std::string format(const std::string& msg, long row, long column) {
        std::string out = msg;
        if (row > 0) {
            out += " (row " + std::to_string(row);
            if (column > 0) out += ", column " + std::to_string(column);
            out += ")";
        }
        return out;
    }

    long row_;
    long column_;
};

/// Invalid solver configuration; collects every problem found, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid configuration:";
        for (const auto& s : issues) out += "\n  - " + s;
        return out;
    }

    std::vector<std::string> issues_;
};

/// Symmetric eigendecomposition failed to converge.
class EigenFailure : public Error {
public:
    explicit EigenFailure(const std::string& msg) : Error(msg) {}
};

} // namespace mvskew

#endif // MVSKEW_ERRORS_HPP
