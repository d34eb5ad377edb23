#pragma once

#include "fundnet/distributions.hpp"

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fundnet
{
    /// Two infinite-server nodes. Contributors enter A at rate lambda_a, are
    /// served by service_a, then move to B with probability p (or leave).
    /// B also receives an external Poisson stream at rate lambda_b and serves
    /// everyone by service_b. The system starts empty at t = 0.
    ///
    /// p = 0, p = 1 and lambda_b = 0 switch off one arch each; they are legal.
    struct NetworkConfig
    {
        double lambda_a = 0.0;
        double lambda_b = 0.0;
        double p = 0.0;
        ServiceDistribution service_a;
        ServiceDistribution service_b;

        std::vector<std::string> violations() const;
        void validate() const;

        /// p * lambda_a + lambda_b, the long-run arrival rate into B.
        double pension_inflow_rate() const { return p * lambda_a + lambda_b; }
    };

    namespace method
    {
        struct Quadrature
        {
            double abs_tol = 1e-10;
            double rel_tol = 1e-9;
        };
        /// Closed form when one exists, otherwise quadrature with `fallback`.
        struct Auto
        {
            Quadrature fallback{};
        };
        struct ClosedForm
        {
        };
    }
    using OccupancyMethod = std::variant<method::Auto, method::ClosedForm, method::Quadrature>;

    enum class Evaluation
    {
        ClosedForm,
        Quadrature,
    };
    std::string_view to_string(Evaluation e) noexcept;

    struct OccupancyB
    {
        double value = 0.0;
        Evaluation evaluation = Evaluation::Quadrature;
    };

    /// E[N_A(t)] = lambda_a * int_0^t (1 - G_A(v)) dv.
    double occupancy_a(const NetworkConfig& cfg, double t);

    /// Poisson intensity of arrivals into B at time t: p lambda_a G_A(t) + lambda_b.
    double arrival_intensity_b(const NetworkConfig& cfg, double t);

    /// True when occupancy_b has a closed form for this configuration: both
    /// services exponential, both uniform, both special family, or no routed
    /// traffic (p * lambda_a == 0).
    bool has_closed_form(const NetworkConfig& cfg);

    /// E[N_B(t)] = int_0^t (p lambda_a G_A(v) + lambda_b)(1 - G_B(t - v)) dv.
    OccupancyB occupancy_b_detailed(const NetworkConfig& cfg, double t, const OccupancyMethod& how = method::Auto{});
    double occupancy_b(const NetworkConfig& cfg, double t, const OccupancyMethod& how = method::Auto{});

    /// Direct quadrature of the occupancy integrand, split at the support and
    /// table breakpoints of both services. Independent of every closed form.
    double occupancy_b_quadrature(const NetworkConfig& cfg, double t, double abs_tol = 1e-10);

    /// Cross term I(t) = int_0^t (1 - G_A(v))(1 - G_B(t - v)) dv for two
    /// special-family services, by quadrature. With it,
    ///   E[N_B(t)] = (p lambda_a + lambda_b) S_B(t) - p lambda_a I(t).
    double special_family_I(const NetworkConfig& cfg, double t, double abs_tol = 1e-10);

    namespace closed_form
    {
        /// I(t) for exponential services with means a and b.
        double exponential_cross_term(double a, double b, double t);
        /// I(t) for services uniform on [0, 2a] and [0, 2b]; exact for every t.
        double uniform_cross_term(double a, double b, double t);
    }
}
