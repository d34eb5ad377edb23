#pragma once

#include "fundnet/equilibrium.hpp"
#include "fundnet/transient.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fundnet
{
    /// Law of the unitary contribution/pension marks around their means.
    enum class MarkLaw
    {
        Degenerate,  // every mark equals m(t)
        Exponential, // marks exponential with mean m(t)
    };

    struct SimulationPlan
    {
        NetworkConfig network;
        double horizon = 1.0;
        std::vector<double> grid;
        std::uint64_t replications = 1;
        std::uint64_t master_seed = 0;
        std::optional<MeanValueFunction> m_a;
        std::optional<MeanValueFunction> m_b;
        MarkLaw marks = MarkLaw::Degenerate;
        /// Worker threads; 0 picks hardware concurrency. Output does not
        /// depend on this value.
        unsigned threads = 0;

        std::vector<std::string> violations() const;
        void validate() const;
    };

    struct GridEstimate
    {
        double t = 0.0;
        double mean_n_a = 0.0;
        double se_n_a = 0.0;
        double mean_n_b = 0.0;
        double se_n_b = 0.0;
        // Only filled by simulate_cash_flows.
        std::optional<double> mean_contribution;
        std::optional<double> se_contribution;
        std::optional<double> mean_pension;
        std::optional<double> se_pension;
        /// mean_contribution - m_A(t) mean_n_a (Wald diagnostic).
        std::optional<double> wald_gap_contribution;
        std::optional<double> wald_gap_pension;
    };

    /// Totals over all replications of events processed up to the horizon.
    struct EventCounts
    {
        std::uint64_t arrivals_a = 0;
        std::uint64_t completions_a = 0;
        std::uint64_t routed_to_b = 0;
        std::uint64_t arrivals_b_external = 0;
        std::uint64_t completions_b = 0;
    };

    struct SimulationEstimate
    {
        std::vector<GridEstimate> points;
        std::uint64_t replications = 0;
        std::uint64_t master_seed = 0;
        EventCounts events;
    };

    /// Monte Carlo estimate of E[N_A(t)], E[N_B(t)] on the plan grid.
    ///
    /// Replication i draws from sub-stream i of master_seed, so results are
    /// bit-identical for a given plan whatever the thread count.
    SimulationEstimate simulate(const SimulationPlan& plan);

    /// As simulate, additionally estimating E[sum of contributions at A] and
    /// E[sum of pensions at B] with marks of mean m_A(t), m_B(t). Marks come
    /// from a separate sub-stream, so occupancy estimates match simulate().
    SimulationEstimate simulate_cash_flows(const SimulationPlan& plan);

    struct CoverageReport
    {
        std::vector<double> z_n_a;
        std::vector<double> z_n_b;
        /// Some |z| > 4.
        bool alarm = false;
        /// Fraction of all z-scores (both nodes) with |z| <= 3.
        double fraction_within_3 = 1.0;
        double max_abs_z = 0.0;
    };

    /// z = (analytic - simulated) / se per grid point and node; z = 0 when
    /// se = 0 and the difference is 0.
    CoverageReport compare_with_analytic(const SimulationEstimate& est, std::span<const double> analytic_n_a,
                                         std::span<const double> analytic_n_b);
    CoverageReport compare_with_analytic(const SimulationEstimate& est, const NetworkConfig& cfg,
                                         const OccupancyMethod& how = method::Auto{});

    double z_score(double analytic, double simulated, double se);
}
