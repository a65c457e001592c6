#ifndef MVSKEW_IO_CONFIG_HPP
#define MVSKEW_IO_CONFIG_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mvskew/errors.hpp"
#include "mvskew/io/csv.hpp"
#include "mvskew/sca.hpp"

namespace mvskew::io {

/**
 * Parse a flat key = value solver configuration.
 *
 * Required keys: lambda1, lambda2, lambda3, lambda4.
 * Optional keys (with defaults): max_outer_iters (200), outer_tol (1e-8),
 * inner_max_iters (2000), inner_tol (1e-10), epsilon_floor (0), seed (1),
 * init (random_uniform | zeros).
 *
 * Blank lines and lines starting with '#' are ignored. Unknown keys,
 * missing required keys, unparsable values and out-of-range values are all
 * collected and reported together in one ConfigError.
 */
inline SolverConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::map<std::string, std::string> kv;
    std::vector<std::string> issues;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) +
                             ": expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (kv.count(key))
            issues.push_back("duplicate key '" + key + "'");
        kv[key] = value;
    }

    SolverConfig config;

    auto take = [&](const char* key) -> std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto require_double = [&](const char* key, double& out, bool nonneg) {
        std::string* v = take(key);
        if (!v) {
            issues.push_back(std::string("missing required key '") + key + "'");
            return;
        }
        double parsed;
        if (!detail::parse_double(*v, parsed)) {
            issues.push_back(std::string("key '") + key + "': '" + *v +
                             "' is not a number");
            return;
        }
        if (nonneg && !(parsed >= 0.0)) {
            issues.push_back(std::string("key '") + key + "' must be >= 0");
            return;
        }
        out = parsed;
    };
    auto optional_double = [&](const char* key, double& out, bool positive) {
        std::string* v = take(key);
        if (!v) return;
        double parsed;
        if (!detail::parse_double(*v, parsed)) {
            issues.push_back(std::string("key '") + key + "': '" + *v +
                             "' is not a number");
            return;
        }
        if (positive ? !(parsed > 0.0) : !(parsed >= 0.0)) {
            issues.push_back(std::string("key '") + key + "' must be " +
                             (positive ? "> 0" : ">= 0"));
            return;
        }
        out = parsed;
    };
    auto optional_int = [&](const char* key, int& out) {
        std::string* v = take(key);
        if (!v) return;
        try {
            std::size_t pos = 0;
            const long parsed = std::stol(*v, &pos);
            if (pos != v->size() || parsed < 1) throw std::invalid_argument("");
            out = static_cast<int>(parsed);
        } catch (const std::exception&) {
            issues.push_back(std::string("key '") + key +
                             "' must be a positive integer, got '" + *v + "'");
        }
    };

    require_double("lambda1", config.lambda1, true);
    require_double("lambda2", config.lambda2, true);
    require_double("lambda3", config.lambda3, true);
    require_double("lambda4", config.lambda4, true);
    optional_int("max_outer_iters", config.max_outer_iters);
    optional_double("outer_tol", config.outer_tol, true);
    optional_int("inner_max_iters", config.inner.max_iters);
    optional_double("inner_tol", config.inner.tol, true);
    optional_double("epsilon_floor", config.epsilon_floor, false);

    if (std::string* v = take("seed")) {
        try {
            std::size_t pos = 0;
            // stoull would silently wrap a negative value around.
            if (!v->empty() && (*v)[0] == '-') throw std::invalid_argument("");
            const unsigned long long parsed = std::stoull(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            config.seed = parsed;
        } catch (const std::exception&) {
            issues.push_back("key 'seed' must be an unsigned integer, got '" + *v + "'");
        }
    }
    if (std::string* v = take("init")) {
        if (*v == "random_uniform") config.init = InitMode::random_uniform;
        else if (*v == "zeros") config.init = InitMode::zeros;
        else
            issues.push_back("key 'init' must be 'random_uniform' or 'zeros', got '" +
                             *v + "'");
    }

    static const char* known[] = {"lambda1",         "lambda2",    "lambda3",
                                  "lambda4",         "max_outer_iters", "outer_tol",
                                  "inner_max_iters", "inner_tol",  "epsilon_floor",
                                  "seed",            "init"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok) issues.push_back("unknown key '" + key + "'");
    }

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return config;
}

/// Render the effective (defaults-filled) configuration, re-parsable by parse_config.
inline std::string render_config(const SolverConfig& config) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "lambda1 = " << num(config.lambda1) << "\n";
    out << "lambda2 = " << num(config.lambda2) << "\n";
    out << "lambda3 = " << num(config.lambda3) << "\n";
    out << "lambda4 = " << num(config.lambda4) << "\n";
    out << "max_outer_iters = " << config.max_outer_iters << "\n";
    out << "outer_tol = " << num(config.outer_tol) << "\n";
    out << "inner_max_iters = " << config.inner.max_iters << "\n";
    out << "inner_tol = " << num(config.inner.tol) << "\n";
    out << "epsilon_floor = " << num(config.epsilon_floor) << "\n";
    out << "seed = " << config.seed << "\n";
    out << "init = "
        << (config.init == InitMode::zeros ? "zeros" : "random_uniform") << "\n";
    return out.str();
}

} // namespace mvskew::io

#endif // MVSKEW_IO_CONFIG_HPP
