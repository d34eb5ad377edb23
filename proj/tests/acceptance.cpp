// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fundnet/commands.hpp"
#include "fundnet/distributions.hpp"
#include "fundnet/equilibrium.hpp"
#include "fundnet/format.hpp"
#include "fundnet/quadrature.hpp"
#include "fundnet/scenario.hpp"
#include "fundnet/simulator.hpp"
#include "fundnet/transient.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fundnet;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;
    };

    int failures = 0;

    void report(const char* id, const char* title, const std::function<Outcome()>& check)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = check();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass)
            ++failures;
        std::printf("[%s] %s %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
        std::fflush(stdout);
    }

    std::string fmt(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return buf;
    }

    NetworkConfig make(double la, double lb, double p, ServiceDistribution a, ServiceDistribution b)
    {
        NetworkConfig cfg{la, lb, p, std::move(a), std::move(b)};
        cfg.validate();
        return cfg;
    }

    struct Draw
    {
        std::mt19937_64 rng;
        double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
        double mean() { return uniform(0.2, 20.0); }
        double rate() { return uniform(0.1, 5.0); }
        double prob() { return uniform(0.0, 1.0); }
        SpecialFamily special()
        {
            SpecialFamily d;
            d.gamma = uniform(0.2, 3.0);
            d.rho = uniform(0.2, 4.0);
            d.beta = uniform(-0.95 * d.gamma, special_family_beta_upper(d.gamma, d.rho));
            return d;
        }
    };

    double reference_b(const NetworkConfig& cfg, double t)
    {
        return occupancy_b_quadrature(cfg, t, 1e-12);
    }

    std::vector<std::vector<std::string>> parse_csv(const std::string& text)
    {
        std::vector<std::vector<std::string>> rows;
        std::stringstream in(text);
        std::string line;
        while (std::getline(in, line))
        {
            std::vector<std::string> cells;
            std::stringstream ls(line);
            std::string cell;
            while (std::getline(ls, cell, ','))
                cells.push_back(cell);
            rows.push_back(cells);
        }
        return rows;
    }

    Scenario shipped(const char* name)
    {
        return load_scenario(std::string(FUNDNET_SCENARIO_DIR) + "/" + name);
    }

    Outcome ac1()
    {
        Draw d{std::mt19937_64(101)};
        double worst = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            const double mean_a = d.mean();
            // Every fifth config exercises the equal-means branch.
            const double mean_b = i % 5 == 0 ? mean_a : d.mean();
            const auto cfg = make(d.rate(), d.rate(), d.prob(), exponential(mean_a), exponential(mean_b));
            for (int k = 0; k < 20; ++k)
            {
                const double t = d.uniform(0.0, 5.0 * std::max(mean_a, mean_b));
                worst = std::max(worst, std::abs(occupancy_b(cfg, t, method::ClosedForm{}) - reference_b(cfg, t)));
            }
        }
        return {worst <= 1e-8, "max |closed form - quadrature| = " + fmt(worst) + " over 1000 points (tol 1e-8)"};
    }

    // Routed term for alpha_b < alpha_a in 2 alpha_b <= t < 2 alpha_a with the
    // sign of the t term flipped, as it commonly appears in print.
    double flipped_regime_ii(double a, double b, double t) { return -b * b / (3 * a) - t * b / (2 * a); }

    Outcome ac2()
    {
        Draw d{std::mt19937_64(202)};
        double worst = 0.0;
        int points = 0;
        auto check = [&](const NetworkConfig& cfg, double t) {
            if (t < 0.0)
                return;
            worst = std::max(worst, std::abs(occupancy_b(cfg, t, method::ClosedForm{}) - reference_b(cfg, t)));
            ++points;
        };
        for (int i = 0; i < 50; ++i)
        {
            const double a = d.mean();
            const double b = i % 10 == 0 ? a : d.mean();
            const auto cfg =
                make(d.rate(), d.rate(), d.prob(), uniform_on_double_mean(a), uniform_on_double_mean(b));
            for (double edge : {2 * b, 2 * a, 2 * a + 2 * b})
                for (double t : {edge - 1e-6, edge, edge + 1e-6})
                    check(cfg, t);
            for (int k = 0; k < 10; ++k)
                check(cfg, d.uniform(0.0, 1.2 * (2 * a + 2 * b)));
        }

        // Evidence for the middle-regime sign: routed term pλ_A ∫ G_A (1 - G_B(t - v)) dv.
        const double a = 2.0, b = 0.7;
        const auto routed_only = make(1.0, 0.0, 1.0, uniform_on_double_mean(a), uniform_on_double_mean(b));
        double flipped_gap = std::numeric_limits<double>::infinity();
        double derived_gap = 0.0;
        for (double t : {1.6, 2.5, 3.9})
        {
            const double q = reference_b(routed_only, t);
            flipped_gap = std::min(flipped_gap, std::abs(flipped_regime_ii(a, b, t) - q));
            derived_gap = std::max(derived_gap, std::abs(t * b / (2 * a) - b * b / (3 * a) - q));
        }
        const bool pass = worst <= 1e-8 && derived_gap <= 1e-8 && flipped_gap > 0.1;
        return {pass, "max |closed form - quadrature| = " + fmt(worst) + " over " + std::to_string(points) +
                          " points incl. regime edges +-1e-6; middle regime: +t sign off by " + fmt(derived_gap) +
                          ", -t sign off by >= " + fmt(flipped_gap)};
    }

    Outcome ac3()
    {
        Draw d{std::mt19937_64(303)};
        double worst_s = 0.0;
        double worst_tail = 0.0;
        double min_i = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 50; ++i)
        {
            const ServiceDistribution g(d.special());
            const auto bps = g.breakpoints();
            QuadratureOptions tight;
            tight.abs_tol = 1e-13;
            tight.rel_tol = 0.0;
            for (int k = 0; k < 10; ++k)
            {
                const double t = d.uniform(0.0, 5.0 * g.mean() + 1.0);
                const double q = integrate([&](double v) { return g.survival(v); }, 0.0, t, bps, tight);
                worst_s = std::max(worst_s, std::abs(g.survival_integral(t) - q));
            }
            const auto& law = std::get<SpecialFamily>(g.law());
            worst_tail = std::max(worst_tail,
                                  std::abs(g.survival_integral(g.quantile(1.0 - 1e-9)) - law.rho / law.gamma));

            const auto cfg = make(d.rate(), d.rate(), d.prob(), g, ServiceDistribution(d.special()));
            for (int k = 0; k < 10; ++k)
                min_i = std::min(min_i, special_family_I(cfg, d.uniform(0.0, 30.0), 1e-11));
        }
        const bool pass = worst_s <= 1e-8 && worst_tail <= 1e-6 && min_i >= 0.0;
        return {pass, "ln-form vs quadrature " + fmt(worst_s) + " (tol 1e-8); tail gap " + fmt(worst_tail) +
                          " (tol 1e-6); min I(t) = " + fmt(min_i)};
    }

    Outcome ac4()
    {
        Draw d{std::mt19937_64(404)};
        double worst_exp = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            const auto cfg = make(d.rate(), d.rate(), d.prob(), exponential(d.mean()), exponential(d.mean()));
            const double t = 50.0 * std::max(cfg.service_a.mean(), cfg.service_b.mean());
            const double lr = long_run_ratio(cfg);
            worst_exp = std::max(worst_exp, std::abs(equilibrium_ratio(cfg, t).value - lr) / lr);
        }
        double worst_bounded = 0.0;
        for (int i = 0; i < 50; ++i)
        {
            auto law = [&](int k) -> ServiceDistribution {
                return k == 0 ? uniform_on_double_mean(d.mean()) : deterministic(d.mean());
            };
            const auto cfg = make(d.rate(), d.rate(), d.prob(), law(i % 2), law((i / 2) % 2));
            const double s = settling_time(cfg);
            const double lr = long_run_ratio(cfg);
            for (double t : {s, s + 1e-6, s * 1.01, s + d.uniform(0.0, 50.0), 3 * s})
                worst_bounded = std::max(worst_bounded, std::abs(equilibrium_ratio(cfg, t).value - lr));
        }
        const bool pass = worst_exp < 1e-3 && worst_bounded <= 1e-8;
        return {pass, "exponential rel gap at 50 max(mean) " + fmt(worst_exp) +
                          " (tol 1e-3); uniform/deterministic gap for t >= a + b " + fmt(worst_bounded) +
                          " (tol 1e-8)"};
    }

    Outcome ac5()
    {
        Draw d{std::mt19937_64(505)};
        double worst = 0.0;
        for (int i = 0; i < 80; ++i)
        {
            auto law = [&](int k) -> ServiceDistribution {
                switch (k)
                {
                case 0: return exponential(d.mean());
                case 1: return uniform_on_double_mean(d.mean());
                case 2: return deterministic(d.mean());
                default:
                {
                    SpecialFamily s = d.special();
                    s.beta = special_family_beta_upper(s.gamma, s.rho);
                    return ServiceDistribution(s);
                }
                }
            };
            const auto cfg = make(d.rate(), d.rate(), d.prob(), law(i % 4), law((i / 4) % 4));
            const double t = 1e-4 * std::min(cfg.service_a.mean(), cfg.service_b.mean());
            const double target = cfg.lambda_a / cfg.lambda_b;
            worst = std::max(worst, std::abs(equilibrium_ratio(cfg, t).value - target) / target);
        }
        return {worst < 1e-3, "max relative gap to lambda_a/lambda_b " + fmt(worst) + " (tol 1e-3)"};
    }

    std::vector<double> fixture_grid()
    {
        std::vector<double> g;
        for (int i = 1; i <= 10; ++i)
            g.push_back(0.5 * i);
        return g;
    }

    Outcome ac6()
    {
        const auto cfg = make(1.0, 0.0, 1.0, exponential(1.0), exponential(1.0));
        SimulationPlan plan;
        plan.network = cfg;
        plan.grid = fixture_grid();
        plan.horizon = 5.0;
        plan.replications = 100'000;
        plan.master_seed = 2012;
        const auto est = simulate(plan);
        const auto rep = compare_with_analytic(est, cfg);
        const double at_one = occupancy_b(cfg, 1.0);
        const bool anchor = std::abs(at_one - (1.0 - 2.0 * std::exp(-1.0))) < 1e-12;
        const bool pass = !rep.alarm && rep.fraction_within_3 >= 0.9 && anchor;
        return {pass, "max |z| = " + fmt(rep.max_abs_z) + ", within 3: " + fmt(100 * rep.fraction_within_3) +
                          "%, E[N_B](1) = " + format_number(at_one)};
    }

    Outcome ac7()
    {
        const auto cfg = make(1.0, 0.0, 1.0, exponential(1.0), exponential(1.0));
        const auto grid = fixture_grid();
        TabulatedValue m_b;
        for (double t : grid)
            m_b.knots.emplace_back(t, equilibrium_pair(cfg, ConstantValue{1.0}, t).m_b);
        SimulationPlan plan;
        plan.network = cfg;
        plan.grid = grid;
        plan.horizon = 5.0;
        plan.replications = 100'000;
        plan.master_seed = 7007;
        plan.m_a = ConstantValue{1.0};
        plan.m_b = m_b;
        plan.marks = MarkLaw::Exponential;
        double worst = 0.0;
        for (const auto& p : simulate_cash_flows(plan).points)
        {
            const double se = std::hypot(*p.se_contribution, *p.se_pension);
            worst = std::max(worst, std::abs(*p.mean_contribution - *p.mean_pension) / se);
        }
        return {worst <= 3.0, "max |contribution - pension| / combined se = " + fmt(worst) + " (tol 3)"};
    }

    Outcome ac8()
    {
        Draw d{std::mt19937_64(808)};
        int checked = 0;
        int violations = 0;
        while (checked < 100)
        {
            auto law = [&](int k) -> ServiceDistribution {
                switch (k)
                {
                case 0: return exponential(d.mean());
                case 1: return uniform_on_double_mean(d.mean());
                case 2: return ServiceDistribution(d.special());
                default: return deterministic(d.mean());
                }
            };
            std::uniform_int_distribution<int> family(0, 3);
            const auto cfg = make(d.rate(), d.rate(), d.prob(), law(family(d.rng)), law(family(d.rng)));
            const double t = d.uniform(0.01, 60.0);
            const auto pair = equilibrium_pair(cfg, ExponentialGrowth{1.0, d.uniform(-0.05, 0.05)}, t);
            if (!(pair.e_n_a < pair.e_n_b))
                continue;
            ++checked;
            violations += !(pair.m_a > pair.m_b);
        }
        return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checked) +
                                     " pairs with E[N_A] < E[N_B]"};
    }

    template <class F>
    std::string run_to_string(F&& f)
    {
        std::ostringstream csv;
        std::ostringstream summary;
        f(csv, summary);
        return csv.str();
    }

    Outcome ac9()
    {
        int identical = 0;
        int runs = 0;
        for (const char* name : {"exponential.json", "uniform.json", "special.json"})
        {
            const Scenario s = shipped(name);
            auto compute = [&](std::ostream& c, std::ostream& m) { return run_compute(s, c, m); };
            auto sim = [&](std::ostream& c, std::ostream& m) { return run_simulate(s, c, m); };
            identical += run_to_string(compute) == run_to_string(compute);
            identical += run_to_string(sim) == run_to_string(sim);
            runs += 2;
        }
        return {identical == runs,
                std::to_string(identical) + "/" + std::to_string(runs) + " compute/simulate pairs byte-identical"};
    }

    Outcome ac10()
    {
        std::vector<std::string> problems;
        auto base = shipped("special.json");
        base.simulation->replications = 20'000;

        auto run = [&](const Scenario& s, const char* label) {
            std::ostringstream csv, summary, sim_csv, sim_summary;
            const int c = run_compute(s, csv, summary);
            const int m = run_simulate(s, sim_csv, sim_summary);
            if (c != kExitOk || m != kExitOk)
                problems.push_back(std::string(label) + ": exit " + std::to_string(c) + "/" + std::to_string(m));
            return parse_csv(csv.str());
        };

        // p = 0: E[N_B] is the external M/G/inf occupancy, bit for bit.
        Scenario p0 = base;
        p0.network.p = 0.0;
        const auto rows0 = run(p0, "p=0");
        for (std::size_t i = 1; i < rows0.size(); ++i)
        {
            const double t = parse_number(rows0[i][0], "t");
            const double expected = p0.network.lambda_b * p0.network.service_b.survival_integral(t);
            if (parse_number(rows0[i][2], "e_n_b") != expected)
                problems.push_back("p=0: E[N_B] differs at t = " + rows0[i][0]);
        }

        // p = 1: every completion at A moves to B.
        Scenario p1 = base;
        p1.network.p = 1.0;
        run(p1, "p=1");
        SimulationPlan plan;
        plan.network = p1.network;
        plan.grid = {5.0, 20.0};
        plan.horizon = 20.0;
        plan.replications = 2000;
        plan.master_seed = 10;
        const auto counts1 = simulate(plan).events;
        if (counts1.routed_to_b != counts1.completions_a)
            problems.push_back("p=1: routed != completions at A");

        // lambda_b = 0: B is fed only from A; no external arrivals, ratio tends to
        // alpha_a / (p alpha_b).
        Scenario lb0 = base;
        lb0.network.lambda_b = 0.0;
        const auto rows_lb0 = run(lb0, "lambda_b=0");
        plan.network = lb0.network;
        const auto counts_lb0 = simulate(plan).events;
        if (counts_lb0.arrivals_b_external != 0)
            problems.push_back("lambda_b=0: external arrivals at B");
        const double expected_lr =
            lb0.network.service_a.mean() / (lb0.network.p * lb0.network.service_b.mean());
        if (std::abs(long_run_ratio(lb0.network) - expected_lr) > 1e-12 * expected_lr)
            problems.push_back("lambda_b=0: long-run ratio");
        for (std::size_t i = 2; i < rows_lb0.size(); ++i)
        {
            const double t = parse_number(rows_lb0[i][0], "t");
            if (std::abs(parse_number(rows_lb0[i][2], "e_n_b") - reference_b(lb0.network, t)) > 1e-8)
                problems.push_back("lambda_b=0: E[N_B] differs from quadrature at t = " + rows_lb0[i][0]);
        }

        std::string detail = "p=0, p=1, lambda_b=0 through compute and simulate";
        if (!problems.empty())
            detail += "; " + std::to_string(problems.size()) + " problem(s), first: " + problems.front();
        return {problems.empty(), detail};
    }
}

int main()
{
    report("AC1", "exponential closed form", ac1);
    report("AC2", "uniform closed form", ac2);
    report("AC3", "special family", ac3);
    report("AC4", "long-run ratio", ac4);
    report("AC5", "short-horizon ratio", ac5);
    report("AC6", "simulator coverage", ac6);
    report("AC7", "equilibrium cash flows", ac7);
    report("AC8", "contribution exceeds pension", ac8);
    report("AC9", "reproducibility", ac9);
    report("AC10", "degenerate arches", ac10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
