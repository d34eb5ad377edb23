#pragma once

#include "fundnet/transient.hpp"

#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace fundnet
{
    struct ConstantValue
    {
        double value = 1.0;
    };

    /// initial * e^{r t}
    struct ExponentialGrowth
    {
        double initial = 1.0;
        double r = 0.0;
    };

    /// Linear interpolation between (time, value) knots, flat outside them.
    struct TabulatedValue
    {
        std::vector<std::pair<double, double>> knots;
    };

    /// Mean unitary contribution m_A(t) or mean unitary pension m_B(t).
    class MeanValueFunction
    {
    public:
        using Form = std::variant<ConstantValue, ExponentialGrowth, TabulatedValue>;

        MeanValueFunction() = default;
        MeanValueFunction(Form form) : form_(std::move(form)) {}
        template <class T>
            requires std::is_constructible_v<Form, T> && (!std::is_same_v<std::decay_t<T>, Form>)
        MeanValueFunction(T form) : form_(Form(std::move(form)))
        {
        }

        const Form& form() const noexcept { return form_; }

        std::vector<std::string> violations() const;
        void validate() const;

        double operator()(double t) const;

    private:
        Form form_ = ConstantValue{};
    };

    enum class RatioKind
    {
        Defined,
        Undefined, // 0 / 0
        Unbounded, // positive / 0
    };

    struct Ratio
    {
        RatioKind kind = RatioKind::Undefined;
        double value = 0.0;

        static Ratio of(double numerator, double denominator);

        bool defined() const noexcept { return kind == RatioKind::Defined; }
        /// value, +inf or NaN.
        double as_double() const noexcept;
    };

    /// One solution of m_A E[N_A] = m_B E[N_B] at time t.
    struct EquilibriumPair
    {
        double t = 0.0;
        double m_a = 0.0;
        double m_b = 0.0;
        double e_n_a = 0.0;
        double e_n_b = 0.0;
    };

    /// m_B(t) / m_A(t) = E[N_A(t)] / E[N_B(t)], the pension-to-contribution
    /// ratio that balances expected inflow and outflow at time t.
    ///
    /// At t = 0 both occupancies vanish; the t -> 0+ limit is returned instead,
    /// lambda_a (1 - G_A(0)) / ((p lambda_a G_A(0) + lambda_b)(1 - G_B(0))),
    /// which is lambda_a / lambda_b for atom-free services.
    Ratio equilibrium_ratio(const NetworkConfig& cfg, double t, const OccupancyMethod& how = method::Auto{});

    /// m_A is free; m_B follows from the ratio. Throws RatioUndefined or
    /// RatioUnbounded when the ratio does not exist.
    EquilibriumPair equilibrium_pair(const NetworkConfig& cfg, const MeanValueFunction& m_a, double t,
                                     const OccupancyMethod& how = method::Auto{});

    /// m_A(t) = e^{rt} E[N_B(t)] / E[N_A(t)] when pensions grow as m_B(t) = e^{rt}.
    double indexed_contribution(const NetworkConfig& cfg, double r, double t,
                                const OccupancyMethod& how = method::Auto{});

    /// lambda_a alpha_a / ((p lambda_a + lambda_b) alpha_b).
    double long_run_ratio(const NetworkConfig& cfg);

    /// Sum of both support upper bounds; +inf if either law is unbounded.
    /// From this time on the transient ratio equals long_run_ratio.
    double settling_time(const NetworkConfig& cfg);

    /// Large-t approximation; same value as long_run_ratio.
    double approx_ratio_long(const NetworkConfig& cfg);

    /// Small-t approximation lambda_a / lambda_b.
    Ratio approx_ratio_short(const NetworkConfig& cfg);

    enum class ExcessForm
    {
        /// m_B(t) C E[N_B(t)] - m_A(t) E[N_A(t)]
        Printed,
        /// m_A(t) C E[N_B(t)] - m_A(t) E[N_A(t)]
        ConstantRatio,
    };

    /// Excess h(t) of the constant-ratio pension flow over the contribution
    /// flow, with C = long_run_ratio(cfg). Throws NoPensionInflow when C does
    /// not exist.
    double excess_function(const NetworkConfig& cfg, const MeanValueFunction& m_b, const MeanValueFunction& m_a,
                           double t, ExcessForm form = ExcessForm::Printed,
                           const OccupancyMethod& how = method::Auto{});
}
