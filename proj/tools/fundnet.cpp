// fundnet: transient equilibrium of a two-node infinite-server pensions network.
//
//   fundnet validate --scenario s.json
//   fundnet compute  --scenario s.json [--out profile.csv]
//   fundnet simulate --scenario s.json [--reps N] [--seed S] [--out sim.csv]
//   fundnet sweep    --scenario s.json --param p --from 0 --to 1 --steps 11

#include "fundnet/commands.hpp"
#include "fundnet/error.hpp"
#include "fundnet/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace
{
    struct CommonOptions
    {
        std::string scenario;
        std::string out;
        std::optional<double> t_max;
        std::optional<int> t_steps;
        std::optional<std::uint64_t> reps;
        std::optional<std::uint64_t> seed;
        std::optional<double> quad_tol;
    };

    void add_common(CLI::App* cmd, CommonOptions& o)
    {
        cmd->add_option("--scenario", o.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--out", o.out, "Output CSV path (default: standard output)");
        cmd->add_option("--t-max", o.t_max, "Override the grid end time");
        cmd->add_option("--t-steps", o.t_steps, "Override the number of grid steps");
        cmd->add_option("--reps", o.reps, "Override simulation replications");
        cmd->add_option("--seed", o.seed, "Override simulation master seed");
        cmd->add_option("--quad-tol", o.quad_tol, "Absolute quadrature tolerance");
    }

    fundnet::Scenario load(const CommonOptions& o)
    {
        fundnet::Scenario s = fundnet::load_scenario(o.scenario);
        fundnet::apply_overrides(s, fundnet::ScenarioOverrides{o.t_max, o.t_steps, o.reps, o.seed, o.quad_tol});
        return s;
    }

    // CSV goes to --out or stdout; the summary line goes to stdout unless the
    // CSV already does, in which case it moves to stderr.
    template <class Run>
    int emit(const CommonOptions& o, Run&& run)
    {
        std::ostringstream csv;
        std::ostringstream summary;
        const int code = run(csv, summary);
        if (o.out.empty())
        {
            std::cout << csv.str();
            std::cerr << summary.str();
        }
        else
        {
            std::ofstream file(o.out, std::ios::binary);
            if (!file)
            {
                std::cerr << "error: cannot write " << o.out << '\n';
                return fundnet::kExitInvalid;
            }
            file << csv.str();
            std::cout << summary.str();
        }
        return code;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Transient and long-run equilibrium of a two-node infinite-server pensions fund network"};
    app.require_subcommand(1);

    CommonOptions validate_opt, compute_opt, simulate_opt, sweep_opt;
    fundnet::SweepSpec sweep;

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario and report degenerate arches");
    add_common(validate_cmd, validate_opt);
    auto* compute_cmd = app.add_subcommand("compute", "Analytic occupancies, ratios and excess function");
    add_common(compute_cmd, compute_opt);
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimates with z-scores vs analytic");
    add_common(simulate_cmd, simulate_opt);
    auto* sweep_cmd = app.add_subcommand("sweep", "Long-run and horizon ratios across a parameter range");
    add_common(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--param", sweep.parameter, "lambda_a, lambda_b, p, mean_a or mean_b")->required();
    sweep_cmd->add_option("--from", sweep.from, "First parameter value")->required();
    sweep_cmd->add_option("--to", sweep.to, "Last parameter value")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "Number of values (>= 1)")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (validate_cmd->parsed())
        {
            const auto s = load(validate_opt);
            return fundnet::run_validate(s, std::cout);
        }
        if (compute_cmd->parsed())
        {
            const auto s = load(compute_opt);
            return emit(compute_opt, [&](std::ostream& csv, std::ostream& sum) {
                return fundnet::run_compute(s, csv, sum);
            });
        }
        if (simulate_cmd->parsed())
        {
            const auto s = load(simulate_opt);
            return emit(simulate_opt, [&](std::ostream& csv, std::ostream& sum) {
                return fundnet::run_simulate(s, csv, sum);
            });
        }
        if (sweep_cmd->parsed())
        {
            const auto s = load(sweep_opt);
            return emit(sweep_opt, [&](std::ostream& csv, std::ostream& sum) {
                return fundnet::run_sweep(s, sweep, csv, sum);
            });
        }
    }
    catch (const fundnet::Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return fundnet::exit_code_for(e);
    }
    return fundnet::kExitOk;
}
