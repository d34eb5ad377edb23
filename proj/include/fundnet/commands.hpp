#pragma once

#include "fundnet/error.hpp"
#include "fundnet/scenario.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace fundnet
{
    enum ExitCode : int
    {
        kExitOk = 0,
        kExitInvalid = 1,
        kExitNonConvergence = 2,
        kExitStatisticalAlarm = 3,
    };

    int exit_code_for(const Error& e) noexcept;

    /// Validates a scenario and writes `valid` followed by notices.
    /// Throws ParseError / ValidationError.
    int run_validate(const Scenario& scenario, std::ostream& out);

    /// Analytic profile. CSV header:
    ///   t,e_n_a,e_n_b,ratio,ratio_eq3,ratio_eq4,ratio_eq5,h,method
    int run_compute(const Scenario& scenario, std::ostream& csv, std::ostream& summary);

    /// Monte Carlo profile with z-scores against the analytic values. CSV header:
    ///   t,mean_n_a,se_n_a,mean_n_b,se_n_b,z_n_a,z_n_b[,contrib_rate,pension_rate]
    /// Returns kExitStatisticalAlarm if any |z| > 4.
    int run_simulate(const Scenario& scenario, std::ostream& csv, std::ostream& summary);

    struct SweepSpec
    {
        std::string parameter;
        double from = 0.0;
        double to = 0.0;
        int steps = 1;
    };

    /// Parameter names accepted by run_sweep.
    const std::vector<std::string>& sweep_parameters();

    /// One row per parameter value. CSV header:
    ///   param_value,long_run_ratio,ratio_at_tmax,settling_time
    int run_sweep(const Scenario& scenario, const SweepSpec& sweep, std::ostream& csv, std::ostream& summary);
}
