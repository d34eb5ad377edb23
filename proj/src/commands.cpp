#include "fundnet/commands.hpp"

#include "fundnet/equilibrium.hpp"
#include "fundnet/format.hpp"
#include "fundnet/simulator.hpp"
#include "fundnet/transient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fundnet
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        double long_run_or_nan(const NetworkConfig& cfg)
        {
            try
            {
                return long_run_ratio(cfg);
            }
            catch (const Error& e)
            {
                if (e.kind() != ErrorKind::NoPensionInflow)
                    throw;
                return kNaN;
            }
        }

        // Re-raises quadrature failures with the grid time attached.
        template <class F>
        auto at_time(double t, F&& f)
        {
            try
            {
                return f();
            }
            catch (const Error& e)
            {
                if (e.kind() != ErrorKind::QuadratureNonConvergence)
                    throw;
                throw Error(ErrorKind::QuadratureNonConvergence,
                            std::string(e.what()) + " (while evaluating t = " + format_number(t) + ")");
            }
        }

        void write_row(std::ostream& os, std::initializer_list<double> values)
        {
            bool first = true;
            for (double v : values)
            {
                if (!first)
                    os << ',';
                os << format_number(v);
                first = false;
            }
        }
    }

    int exit_code_for(const Error& e) noexcept
    {
        switch (e.kind())
        {
        case ErrorKind::QuadratureNonConvergence: return kExitNonConvergence;
        default: return kExitInvalid;
        }
    }

    int run_validate(const Scenario& scenario, std::ostream& out)
    {
        scenario.validate();
        out << "valid\n";
        const auto notices = scenario.notices();
        if (notices.empty())
        {
            out << "notes: none\n";
        }
        for (const auto& n : notices)
        {
            out << "notice: " << n << '\n';
        }
        return kExitOk;
    }

    int run_compute(const Scenario& scenario, std::ostream& csv, std::ostream& summary)
    {
        scenario.validate();
        const NetworkConfig& cfg = scenario.network;
        const OccupancyMethod how = scenario.occupancy_method();
        const MeanValueFunction m_a = scenario.m_a.value_or(MeanValueFunction{});
        const MeanValueFunction m_b = scenario.m_b.value_or(MeanValueFunction{});

        const double eq3 = long_run_or_nan(cfg);
        const double eq4 = std::isnan(eq3) ? kNaN : approx_ratio_long(cfg);
        const double eq5 = approx_ratio_short(cfg).as_double();

        csv << "t,e_n_a,e_n_b,ratio,ratio_eq3,ratio_eq4,ratio_eq5,h,method\n";
        for (double t : scenario.grid.points())
        {
            at_time(t, [&] {
                const double e_a = occupancy_a(cfg, t);
                const OccupancyB e_b = occupancy_b_detailed(cfg, t, how);
                const Ratio ratio = t == 0.0 ? equilibrium_ratio(cfg, t, how) : Ratio::of(e_a, e_b.value);
                // Same expression as excess_function, reusing the occupancies.
                const double pension_scale = scenario.excess_form == ExcessForm::Printed ? m_b(t) : m_a(t);
                const double h = std::isnan(eq3) ? kNaN : pension_scale * eq3 * e_b.value - m_a(t) * e_a;
                write_row(csv, {t, e_a, e_b.value, ratio.as_double(), eq3, eq4, eq5, h});
                csv << ',' << to_string(e_b.evaluation) << '\n';
                return 0;
            });
        }

        summary << "long_run_ratio=" << format_number(eq3) << " settling_time=" << format_number(settling_time(cfg))
                << " closed_form=" << (has_closed_form(cfg) ? "yes" : "no") << '\n';
        return kExitOk;
    }

    int run_simulate(const Scenario& scenario, std::ostream& csv, std::ostream& summary)
    {
        scenario.validate();
        if (!scenario.simulation)
        {
            throw Error(ErrorKind::ValidationError, "simulate needs a simulation block (or --reps and --seed)");
        }
        SimulationPlan plan;
        plan.network = scenario.network;
        plan.grid = scenario.grid.points();
        plan.horizon = *std::max_element(plan.grid.begin(), plan.grid.end());
        plan.replications = scenario.simulation->replications;
        plan.master_seed = scenario.simulation->seed;
        plan.marks = scenario.simulation->marks;
        plan.m_a = scenario.m_a;
        plan.m_b = scenario.m_b;

        const bool cash_flows = plan.m_a.has_value();
        const SimulationEstimate est = cash_flows ? simulate_cash_flows(plan) : simulate(plan);

        std::vector<double> analytic_a;
        std::vector<double> analytic_b;
        const OccupancyMethod how = scenario.occupancy_method();
        for (const auto& p : est.points)
        {
            at_time(p.t, [&] {
                analytic_a.push_back(occupancy_a(plan.network, p.t));
                analytic_b.push_back(occupancy_b(plan.network, p.t, how));
                return 0;
            });
        }
        const CoverageReport report = compare_with_analytic(est, analytic_a, analytic_b);

        csv << "t,mean_n_a,se_n_a,mean_n_b,se_n_b,z_n_a,z_n_b";
        if (cash_flows)
            csv << ",contrib_rate,pension_rate";
        csv << '\n';
        for (std::size_t i = 0; i < est.points.size(); ++i)
        {
            const auto& p = est.points[i];
            write_row(csv, {p.t, p.mean_n_a, p.se_n_a, p.mean_n_b, p.se_n_b, report.z_n_a[i], report.z_n_b[i]});
            if (cash_flows)
            {
                csv << ',';
                write_row(csv, {*p.mean_contribution, *p.mean_pension});
            }
            csv << '\n';
        }

        summary << "replications=" << est.replications << " seed=" << est.master_seed
                << " max_abs_z=" << format_number(report.max_abs_z)
                << " fraction_within_3=" << format_number(report.fraction_within_3)
                << (report.alarm ? " ALARM: |z| > 4" : "") << '\n';
        return report.alarm ? kExitStatisticalAlarm : kExitOk;
    }

    const std::vector<std::string>& sweep_parameters()
    {
        static const std::vector<std::string> names{"lambda_a", "lambda_b", "p", "mean_a", "mean_b"};
        return names;
    }

    int run_sweep(const Scenario& scenario, const SweepSpec& sweep, std::ostream& csv, std::ostream& summary)
    {
        const auto& names = sweep_parameters();
        if (std::find(names.begin(), names.end(), sweep.parameter) == names.end())
        {
            throw Error(ErrorKind::UnknownParameter,
                        "'" + sweep.parameter + "' (expected lambda_a, lambda_b, p, mean_a or mean_b)");
        }
        if (sweep.steps < 1 || !std::isfinite(sweep.from) || !std::isfinite(sweep.to))
        {
            throw Error(ErrorKind::ValidationError, "sweep needs finite bounds and steps >= 1");
        }
        scenario.validate();

        const auto grid = scenario.grid.points();
        const double t_max = grid.back();
        const OccupancyMethod how = scenario.occupancy_method();

        csv << "param_value,long_run_ratio,ratio_at_tmax,settling_time\n";
        for (int k = 0; k < sweep.steps; ++k)
        {
            const double value =
                sweep.steps == 1 ? sweep.from
                                 : (k == sweep.steps - 1 ? sweep.to
                                                         : sweep.from + (sweep.to - sweep.from) * k / (sweep.steps - 1));
            Scenario s = scenario;
            NetworkConfig& cfg = s.network;
            if (sweep.parameter == "lambda_a")
                cfg.lambda_a = value;
            else if (sweep.parameter == "lambda_b")
                cfg.lambda_b = value;
            else if (sweep.parameter == "p")
                cfg.p = value;
            else if (sweep.parameter == "mean_a")
                cfg.service_a = cfg.service_a.with_mean(value);
            else
                cfg.service_b = cfg.service_b.with_mean(value);

            try
            {
                s.validate();
            }
            catch (const Error& e)
            {
                throw Error(ErrorKind::ValidationError,
                            sweep.parameter + " = " + format_number(value) + " is out of range: " + e.what());
            }

            const double ratio_t = at_time(t_max, [&] { return equilibrium_ratio(cfg, t_max, how).as_double(); });
            write_row(csv, {value, long_run_or_nan(cfg), ratio_t, settling_time(cfg)});
            csv << '\n';
        }
        summary << "sweep " << sweep.parameter << " rows=" << sweep.steps << " t_max=" << format_number(t_max)
                << '\n';
        return kExitOk;
    }
}
