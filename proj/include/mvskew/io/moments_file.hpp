#ifndef MVSKEW_IO_MOMENTS_FILE_HPP
#define MVSKEW_IO_MOMENTS_FILE_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mvskew/errors.hpp"
#include "mvskew/io/csv.hpp"
#include "mvskew/moments.hpp"

namespace mvskew::io {

/**
 * Moments artifact: a structured, diff-friendly text file holding mu, Sigma
 * and the coskewness matrix at 17 significant digits (lossless round trip).
 *
 * Layout:
 *
 *   mvskew-moments 1
 *   n <N>
 *   assets <name1>,<name2>,...        (optional)
 *   mu
 *   <N values on one line>
 *   sigma
 *   <N lines of N values>
 *   phi <j>                            (for j = 0..N-1)
 *   <N lines of N values>              (block j = columns j*N .. j*N+N-1)
 *
 * Block j of phi holds the slab of third central moments with middle index
 * j: entry (i, k) of the block is E[(r_i - mu_i)(r_j - mu_j)(r_k - mu_k)].
 */
struct MomentsFile {
    MomentSet moments;
    std::vector<std::string> asset_names;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<double> parse_row(const std::string& line, long lineno,
                                     const std::string& path) {
    std::vector<double> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        double v;
        if (!io::detail::parse_double(tok, v))
            throw ParseError("'" + path + "': expected a number, got '" + tok + "'",
                             lineno);
        out.push_back(v);
    }
    return out;
}

struct LineReader {
    std::ifstream in;
    std::string path;
    long lineno = 0;

    explicit LineReader(const std::string& p) : in(p), path(p) {
        if (!in) throw ParseError("cannot open '" + p + "'");
    }

    bool next(std::string& line) {
        while (std::getline(in, line)) {
            ++lineno;
            line = io::detail::trim(line);
            if (!line.empty() && line[0] != '#') return true;
        }
        return false;
    }

    std::string expect(const std::string& what) {
        std::string line;
        if (!next(line))
            throw ParseError("'" + path + "': unexpected end of file, expected " + what,
                             lineno);
        return line;
    }
};

} // namespace detail

inline void save_moments(std::ostream& out, const MomentSet& m,
                         const std::vector<std::string>& asset_names = {}) {
    const Eigen::Index n = m.n;
    out << "mvskew-moments 1\n";
    out << "# phi block j holds columns j*n .. j*n+n-1 (middle index j)\n";
    out << "n " << n << "\n";
    if (!asset_names.empty()) {
        out << "assets ";
        for (std::size_t i = 0; i < asset_names.size(); ++i)
            out << (i ? "," : "") << asset_names[i];
        out << "\n";
    }
    out << "mu\n";
    for (Eigen::Index i = 0; i < n; ++i)
        out << (i ? " " : "") << detail::fmt17(m.mu(i));
    out << "\nsigma\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j)
            out << (j ? " " : "") << detail::fmt17(m.sigma(i, j));
        out << "\n";
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        out << "phi " << j << "\n";
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < n; ++k)
                out << (k ? " " : "") << detail::fmt17(m.phi(i, j * n + k));
            out << "\n";
        }
    }
}

/**
 * Load and validate a moments artifact. The covariance must be symmetric
 * within 1e-12 (absolute, relative to its largest entry) and PSD within
 * rounding; it is exactly symmetrized on load. A hand-written coskewness
 * block is symmetrized by averaging the six index permutations; files
 * produced by save_moments come back bit-identical.
 */
inline MomentsFile load_moments(const std::string& path) {
    detail::LineReader reader(path);

    std::string line = reader.expect("header 'mvskew-moments 1'");
    if (line != "mvskew-moments 1")
        throw ParseError("'" + path + "': bad header '" + line + "'", reader.lineno);

    line = reader.expect("'n <count>'");
    if (line.rfind("n ", 0) != 0)
        throw ParseError("'" + path + "': expected 'n <count>'", reader.lineno);
    const long n_long = std::strtol(line.c_str() + 2, nullptr, 10);
    if (n_long < 1)
        throw ParseError("'" + path + "': asset count must be >= 1", reader.lineno);
    const Eigen::Index n = static_cast<Eigen::Index>(n_long);

    MomentsFile out;
    out.moments.n = n;

    line = reader.expect("'assets' or 'mu'");
    if (line.rfind("assets ", 0) == 0) {
        const auto cells = io::detail::split_csv_line(line.substr(7));
        if (static_cast<Eigen::Index>(cells.size()) != n)
            throw ParseError("'" + path + "': expected " + std::to_string(n) +
                                 " asset names, got " + std::to_string(cells.size()),
                             reader.lineno);
        out.asset_names = cells;
        line = reader.expect("'mu'");
    }

    if (line != "mu")
        throw ParseError("'" + path + "': expected 'mu'", reader.lineno);
    auto row = detail::parse_row(reader.expect("mu values"), reader.lineno, path);
    if (static_cast<Eigen::Index>(row.size()) != n)
        throw DimensionError("'" + path + "': mu has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(n));
    out.moments.mu = Eigen::Map<Eigen::VectorXd>(row.data(), n);

    line = reader.expect("'sigma'");
    if (line != "sigma")
        throw ParseError("'" + path + "': expected 'sigma'", reader.lineno);
    out.moments.sigma.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        row = detail::parse_row(reader.expect("sigma row"), reader.lineno, path);
        if (static_cast<Eigen::Index>(row.size()) != n)
            throw DimensionError("'" + path + "': sigma row " + std::to_string(i) +
                                 " has " + std::to_string(row.size()) +
                                 " entries, expected " + std::to_string(n));
        for (Eigen::Index j = 0; j < n; ++j) out.moments.sigma(i, j) = row[j];
    }

    out.moments.phi.resize(n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        line = reader.expect("'phi " + std::to_string(j) + "'");
        if (line != "phi " + std::to_string(j))
            throw ParseError("'" + path + "': expected 'phi " + std::to_string(j) + "'",
                             reader.lineno);
        for (Eigen::Index i = 0; i < n; ++i) {
            row = detail::parse_row(reader.expect("phi row"), reader.lineno, path);
            if (static_cast<Eigen::Index>(row.size()) != n)
                throw DimensionError("'" + path + "': phi block " + std::to_string(j) +
                                     " row " + std::to_string(i) + " has " +
                                     std::to_string(row.size()) + " entries, expected " +
                                     std::to_string(n));
            for (Eigen::Index k = 0; k < n; ++k) out.moments.phi(i, j * n + k) = row[k];
        }
    }

    MomentSet& m = out.moments;
    if (!m.mu.allFinite() || !m.sigma.allFinite() || !m.phi.allFinite())
        throw NonFiniteError("'" + path + "': moments contain NaN or Inf");

    const double scale = std::max(1.0, m.sigma.cwiseAbs().maxCoeff());
    const double asym = (m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale)
        throw ParseError("'" + path + "': sigma is not symmetric (defect " +
                         detail::fmt17(asym) + ")");
    m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.sigma);
    if (es.info() != Eigen::Success)
        throw EigenFailure("'" + path + "': sigma eigendecomposition failed");
    const double spectral = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -1e-10 * spectral)
        throw ParseError("'" + path + "': sigma is not positive semidefinite");

    m.phi = symmetrize_coskewness(m.phi, n);
    return out;
}

inline void save_moments_file(const std::string& path, const MomentSet& m,
                              const std::vector<std::string>& asset_names = {}) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    save_moments(out, m, asset_names);
}

} // namespace mvskew::io

#endif // MVSKEW_IO_MOMENTS_FILE_HPP
