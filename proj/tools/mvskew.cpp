// Command-line front end for the sparse mean-variance-skewness portfolio
// solver: moment estimation, solving, lambda4 sweeps and the covariance
// risk-bound check.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvskew/io/commands.hpp"

namespace {

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto comma = csv.find(',', start);
        const std::string tok =
            csv.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
        double v;
        if (!mvskew::io::detail::parse_double(mvskew::io::detail::trim(tok), v))
            throw mvskew::ConfigError({"--lambda4: '" + tok + "' is not a number"});
        grid.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return grid;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse mean-variance-skewness portfolio solver"};
    app.require_subcommand(1);

    // estimate <returns.csv> -o <moments.txt>
    std::string est_returns, est_out;
    CLI::App* estimate = app.add_subcommand(
        "estimate", "estimate mean, covariance and coskewness from a returns CSV");
    estimate->add_option("returns", est_returns, "returns CSV (rows = periods)")
        ->required();
    estimate->add_option("-o,--output", est_out, "moments artifact path")->required();

    // solve (--returns | --moments) --config <cfg> -o <dir>
    std::string solve_returns, solve_moments, solve_config, solve_out;
    CLI::App* solve = app.add_subcommand("solve", "run the solver and write artifacts");
    CLI::Option* opt_returns =
        solve->add_option("--returns", solve_returns, "returns CSV input");
    CLI::Option* opt_moments =
        solve->add_option("--moments", solve_moments, "moments artifact input");
    opt_returns->excludes(opt_moments);
    solve->add_option("--config", solve_config, "solver configuration file")->required();
    solve->add_option("-o,--output", solve_out, "output directory")->required();

    // sweep (--returns | --moments) --config <cfg> --lambda4 v1,v2,... -o <dir>
    std::string sweep_returns, sweep_moments, sweep_config, sweep_out, sweep_grid;
    CLI::App* sweep =
        app.add_subcommand("sweep", "re-solve over a grid of lambda4 values");
    CLI::Option* sopt_returns =
        sweep->add_option("--returns", sweep_returns, "returns CSV input");
    CLI::Option* sopt_moments =
        sweep->add_option("--moments", sweep_moments, "moments artifact input");
    sopt_returns->excludes(sopt_moments);
    sweep->add_option("--config", sweep_config, "solver configuration file")->required();
    sweep->add_option("--lambda4", sweep_grid, "comma-separated grid, strictly increasing")
        ->required();
    sweep->add_option("-o,--output", sweep_out, "output directory")->required();

    // check-bound --sigma-hat <f> --sigma <f> --weights <f>
    std::string cb_sigma_hat, cb_sigma, cb_weights;
    CLI::App* check = app.add_subcommand(
        "check-bound", "verify the covariance-perturbation risk bound");
    check->add_option("--sigma-hat", cb_sigma_hat, "estimated covariance CSV")
        ->required();
    check->add_option("--sigma", cb_sigma, "reference covariance CSV")->required();
    check->add_option("--weights", cb_weights, "weights.json mapping")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*estimate) {
            mvskew::io::cmd_estimate(est_returns, est_out);
            return 0;
        }
        if (*solve) {
            if (solve_returns.empty() && solve_moments.empty()) {
                std::cerr << "solve: one of --returns or --moments is required\n";
                return 1;
            }
            const mvskew::io::SolveOutcome outcome = mvskew::io::cmd_solve(
                {solve_returns, solve_moments}, solve_config, solve_out);
            return outcome.exit_code;
        }
        if (*sweep) {
            if (sweep_returns.empty() && sweep_moments.empty()) {
                std::cerr << "sweep: one of --returns or --moments is required\n";
                return 1;
            }
            const auto points = mvskew::io::cmd_sweep(
                {sweep_returns, sweep_moments}, sweep_config, parse_grid(sweep_grid),
                sweep_out);
            for (const auto& p : points)
                if (p.exit_code == 1) return 1;
            return 0;
        }
        if (*check) {
            const auto report =
                mvskew::io::cmd_check_bound(cb_sigma_hat, cb_sigma, cb_weights, std::cout);
            return report.pass ? 0 : 1;
        }
    } catch (const mvskew::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
