#ifndef MVSKEW_IO_COMMANDS_HPP
#define MVSKEW_IO_COMMANDS_HPP

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mvskew/errors.hpp"
#include "mvskew/io/config.hpp"
#include "mvskew/io/csv.hpp"
#include "mvskew/io/moments_file.hpp"
#include "mvskew/io/svg.hpp"
#include "mvskew/sca.hpp"

namespace mvskew::io {

namespace fs = std::filesystem;

// Solve/sweep exit codes, stable across releases.
inline constexpr int kExitTolerance = 0;
inline constexpr int kExitMaxIters = 2;
inline constexpr int kExitDiverged = 3;

namespace detail {

/// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ParseError("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

inline std::vector<std::string> effective_names(const std::vector<std::string>& names,
                                                Eigen::Index n) {
    if (static_cast<Eigen::Index>(names.size()) == n) return names;
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        out.push_back("asset_" + std::to_string(i + 1));
    return out;
}

inline std::string render_trace_csv(const ConvergenceTrace& trace) {
    std::ostringstream out;
    out << "t,objective,grad_l2,gamma,nnz,inner_iters\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : trace.records)
        out << r.t << "," << num(r.objective_total) << "," << num(r.smooth_grad_norm)
            << "," << num(r.gamma) << "," << r.nnz << "," << r.subproblem_iters << "\n";
    return out.str();
}

inline std::string render_weights_json(const Eigen::VectorXd& w,
                                       const std::vector<std::string>& names) {
    nlohmann::ordered_json j;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        j[names[static_cast<std::size_t>(i)]] = w(i);
    return j.dump(2) + "\n";
}

} // namespace detail

/// Estimate moments from a returns CSV and write the moments artifact.
inline void cmd_estimate(const std::string& returns_csv_path,
                         const std::string& out_path) {
    const ReturnsMatrix returns = read_returns_csv(returns_csv_path);
    const MomentSet moments = estimate_moments(returns);
    std::ostringstream buf;
    save_moments(buf, moments, returns.asset_names);
    detail::atomic_write(out_path, buf.str());
}

struct SolveInputs {
    std::string returns_path; // exactly one of these two is set
    std::string moments_path;
};

struct SolveOutcome {
    int exit_code = kExitTolerance;
    RunResult result;
    double stationarity = 0.0;
    double wall_seconds = 0.0;
    fs::path out_dir;
};

namespace detail {

inline MomentsFile load_inputs(const SolveInputs& inputs) {
    if (!inputs.returns_path.empty()) {
        const ReturnsMatrix returns = read_returns_csv(inputs.returns_path);
        MomentsFile mf;
        mf.moments = estimate_moments(returns);
        mf.asset_names = returns.asset_names;
        return mf;
    }
    return load_moments(inputs.moments_path);
}

inline std::string render_summary(const SolverConfig& config, const SolveOutcome& o,
                                  const Eigen::VectorXd& w) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    const auto& trace = o.result.trace;
    std::ostringstream out;
    out << "termination = "
        << (trace.terminated_by == Termination::tolerance ? "tolerance" : "max_iters")
        << "\n";
    out << "iterations = " << (trace.records.empty() ? 0 : trace.records.back().t)
        << "\n";
    out << "wall_time_seconds = " << num(o.wall_seconds) << "\n";
    if (!trace.records.empty()) {
        const auto& last = trace.records.back();
        out << "final_objective = " << num(last.objective_total) << "\n";
        out << "final_grad_l2 = " << num(last.smooth_grad_norm) << "\n";
        out << "final_nnz = " << last.nnz << "\n";
    }
    out << "stationarity_residual = " << num(o.stationarity) << "\n";
    out << "weights_sum = " << num(w.sum()) << "\n";
    out << "weights_l1_norm = " << num(w.lpNorm<1>()) << "\n";
    out << "weights_l2_norm = " << num(w.norm()) << "\n";
    out << "\n[config]\n" << render_config(config);
    return out.str();
}

} // namespace detail

/// cmd_solve with pre-parsed inputs; also the per-point worker for sweeps.
inline SolveOutcome solve_to_dir(const SolverConfig& config, const MomentsFile& mf,
                                 const std::string& out_dir) {
    SolveOutcome outcome;
    outcome.out_dir = out_dir;
    fs::create_directories(outcome.out_dir);

    const auto started = std::chrono::steady_clock::now();
    try {
        outcome.result = run(config, mf.moments);
    } catch (const NonFiniteError& e) {
        std::cerr << "solve: " << e.what() << "\n";
        outcome.exit_code = kExitDiverged;
        return outcome;
    }
    outcome.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();

    ObjectiveParams params;
    params.lambda1 = config.lambda1;
    params.lambda2 = config.lambda2;
    params.lambda3 = config.lambda3;
    params.lambda4 = config.lambda4;
    params.moments = mf.moments;
    outcome.stationarity = stationarity_residual(params, outcome.result.w_final);

    if (outcome.result.trace.terminated_by == Termination::max_iters)
        outcome.exit_code = kExitMaxIters;

    const auto names = detail::effective_names(mf.asset_names, mf.moments.n);
    const auto& trace = outcome.result.trace;

    std::vector<double> ts, objectives, grad_norms;
    ts.reserve(trace.records.size());
    for (const auto& r : trace.records) {
        ts.push_back(static_cast<double>(r.t));
        objectives.push_back(r.objective_total);
        grad_norms.push_back(r.smooth_grad_norm);
    }

    detail::atomic_write(outcome.out_dir / "weights.json",
                         detail::render_weights_json(outcome.result.w_final, names));
    detail::atomic_write(outcome.out_dir / "trace.csv", detail::render_trace_csv(trace));
    detail::atomic_write(outcome.out_dir / "fig1.svg",
                         render_line_chart(ts, objectives,
                                           "objective value in terms of successive iterations",
                                           "iteration t", "objective value"));
    detail::atomic_write(outcome.out_dir / "fig2.svg",
                         render_line_chart(ts, grad_norms,
                                           "L2 norm of gradient of objective function in "
                                           "terms of successive iterations",
                                           "iteration t", "gradient L2 norm"));
    detail::atomic_write(outcome.out_dir / "summary.txt",
                         detail::render_summary(config, outcome, outcome.result.w_final));
    return outcome;
}

/**
 * Full pipeline: load or estimate moments, run the solver, write weights,
 * trace, both convergence figures and a summary into out_dir.
 *
 * Exit codes: 0 tolerance termination, 2 iteration cap, 3 divergence
 * (non-finite objective).
 */
inline SolveOutcome cmd_solve(const SolveInputs& inputs, const std::string& config_path,
                              const std::string& out_dir) {
    const SolverConfig config = parse_config(config_path);
    const MomentsFile mf = detail::load_inputs(inputs);
    return solve_to_dir(config, mf, out_dir);
}

struct SweepPoint {
    double lambda4 = 0.0;
    int exit_code = 0;
    int nnz = 0;
    double objective = 0.0;
    double residual = 0.0;
};

/**
 * Re-solve over a grid of lambda4 values (same base seed per point), one
 * subdirectory per point plus a sweep.csv summary. A failing point is
 * recorded with its exit code and NaN metrics rather than aborting the
 * sweep. Warns on stderr if the nnz column is not non-increasing: the outer
 * problem is nonconvex, so strict monotonicity can break.
 */
inline std::vector<SweepPoint> cmd_sweep(const SolveInputs& inputs,
                                         const std::string& config_path,
                                         const std::vector<double>& lambda4_grid,
                                         const std::string& out_dir) {
    if (lambda4_grid.empty())
        throw ConfigError({"sweep: lambda4 grid must be nonempty"});
    for (std::size_t i = 0; i < lambda4_grid.size(); ++i) {
        if (!(lambda4_grid[i] >= 0.0))
            throw ConfigError({"sweep: lambda4 grid values must be >= 0"});
        if (i > 0 && !(lambda4_grid[i] > lambda4_grid[i - 1]))
            throw ConfigError({"sweep: lambda4 grid must be strictly increasing"});
    }

    SolverConfig config = parse_config(config_path);
    const MomentsFile mf = detail::load_inputs(inputs);
    fs::create_directories(fs::path(out_dir));

    std::vector<SweepPoint> points;
    char buf[64];
    for (std::size_t i = 0; i < lambda4_grid.size(); ++i) {
        SolverConfig point_config = config;
        point_config.lambda4 = lambda4_grid[i];

        std::snprintf(buf, sizeof(buf), "l4_%02zu", i);
        const fs::path sub = fs::path(out_dir) / buf;

        SweepPoint p;
        p.lambda4 = lambda4_grid[i];
        try {
            const SolveOutcome o = solve_to_dir(point_config, mf, sub.string());
            p.exit_code = o.exit_code;
            if (o.exit_code == kExitDiverged) {
                p.nnz = -1;
                p.objective = std::numeric_limits<double>::quiet_NaN();
                p.residual = std::numeric_limits<double>::quiet_NaN();
            } else {
                p.nnz = o.result.trace.records.back().nnz;
                p.objective = o.result.trace.records.back().objective_total;
                p.residual = o.stationarity;
            }
        } catch (const Error& e) {
            std::cerr << "sweep point lambda4=" << p.lambda4 << " failed: " << e.what()
                      << "\n";
            p.exit_code = 1;
            p.nnz = -1;
            p.objective = std::numeric_limits<double>::quiet_NaN();
            p.residual = std::numeric_limits<double>::quiet_NaN();
        }
        points.push_back(p);
    }

    std::ostringstream csv;
    csv << "lambda4,nnz,objective,residual\n";
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& p : points)
        csv << num(p.lambda4) << "," << p.nnz << "," << num(p.objective) << ","
            << num(p.residual) << "\n";
    detail::atomic_write(fs::path(out_dir) / "sweep.csv", csv.str());

    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].nnz > points[i - 1].nnz && points[i - 1].nnz >= 0)
            std::cerr << "sweep: warning: nnz increased from lambda4=" << points[i - 1].lambda4
                      << " to lambda4=" << points[i].lambda4
                      << " (nonconvexity can break monotonicity)\n";
    return points;
}

/// Load an ordered weights mapping written by cmd_solve.
inline Eigen::VectorXd read_weights_json(const std::string& path,
                                         std::vector<std::string>* names_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ParseError("'" + path + "': expected a JSON object");

    Eigen::VectorXd w(static_cast<Eigen::Index>(j.size()));
    std::vector<std::string> names;
    Eigen::Index i = 0;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number())
            throw ParseError("'" + path + "': weight '" + key + "' is not a number");
        names.push_back(key);
        w(i++) = value.get<double>();
    }
    if (names_out) *names_out = std::move(names);
    return w;
}

struct BoundReport {
    double bound = 0.0;
    double actual = 0.0;
    bool pass = false;
};

/**
 * Check the covariance-perturbation risk bound for matrices stored as
 * numeric CSV grids and weights stored as a weights.json mapping (entry
 * order aligns with matrix rows/columns).
 */
inline BoundReport cmd_check_bound(const std::string& sigma_hat_path,
                                   const std::string& sigma_path,
                                   const std::string& weights_path,
                                   std::ostream& out) {
    const Eigen::MatrixXd sigma_hat = read_numeric_csv(sigma_hat_path);
    const Eigen::MatrixXd sigma = read_numeric_csv(sigma_path);
    const Eigen::VectorXd w = read_weights_json(weights_path);
    if (sigma_hat.rows() != sigma_hat.cols())
        throw DimensionError("'" + sigma_hat_path + "': matrix is not square");
    if (sigma.rows() != sigma.cols())
        throw DimensionError("'" + sigma_path + "': matrix is not square");

    const RiskErrorBound r = risk_error_bound(sigma_hat, sigma, w);
    BoundReport report{r.bound, r.actual, r.actual <= r.bound + 1e-12};
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "bound = " << num(report.bound) << "\n";
    out << "actual = " << num(report.actual) << "\n";
    out << (report.pass ? "PASS" : "FAIL") << ": actual <= bound\n";
    return report;
}

} // namespace mvskew::io

#endif // MVSKEW_IO_COMMANDS_HPP
