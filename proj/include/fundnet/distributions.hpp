#pragma once

#include "fundnet/random.hpp"

#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

namespace fundnet
{
    /// Exponential service with the given mean.
    struct Exponential
    {
        double mean = 1.0;
    };

    /// Uniform on [0, 2 * mean].
    struct UniformOnDoubleMean
    {
        double mean = 1.0;
    };

    /// Rational-exponential family
    ///
    ///   G(v) = 1 - (1 - e^-rho)(gamma + beta) / (gamma e^-rho (e^{(gamma+beta) v} - 1) + gamma)
    ///
    /// with gamma > 0, rho > 0 and -gamma <= beta <= gamma / (e^rho - 1). The
    /// law has mean rho / gamma and, unless beta sits on its upper bound, an
    /// atom at the origin of mass G(0).
    struct SpecialFamily
    {
        double gamma = 1.0;
        double beta = 0.0;
        double rho = 1.0;
    };

    /// Point mass at `value`.
    struct Deterministic
    {
        double value = 0.0;
    };

    struct Knot
    {
        double time = 0.0;
        double probability = 0.0;
    };

    /// Piecewise-linear CDF through the knots. An implicit (0, 0) knot is
    /// prepended when the first knot lies after the origin; a first knot at
    /// time 0 with positive probability is an atom.
    struct EmpiricalTable
    {
        std::vector<Knot> knots;
    };

    /// A service-time law for one node of the network.
    ///
    /// Values are immutable once built. Construction does not validate;
    /// `validate()` (or `violations()`) must be consulted before use, as the
    /// scenario loader does.
    class ServiceDistribution
    {
    public:
        using Law = std::variant<Exponential, UniformOnDoubleMean, SpecialFamily, Deterministic, EmpiricalTable>;

        ServiceDistribution() = default;
        ServiceDistribution(Law law);
        template <class T>
            requires std::is_constructible_v<Law, T> && (!std::is_same_v<std::decay_t<T>, Law>)
        ServiceDistribution(T law) : ServiceDistribution(Law(std::move(law)))
        {
        }

        const Law& law() const noexcept { return law_; }
        std::string_view kind_name() const noexcept;

        template <class T>
        bool is() const noexcept
        {
            return std::holds_alternative<T>(law_);
        }

        /// Human-readable descriptions of every violated parameter constraint.
        std::vector<std::string> violations() const;
        /// Throws ParameterOutOfRange naming the first violated constraint.
        void validate() const;

        double cdf(double v) const;
        /// 1 - cdf(v), evaluated without cancellation where the law allows.
        double survival(double v) const;
        /// Integral of the survival function over [0, t].
        double survival_integral(double t) const;
        double mean() const;
        /// inf { v >= 0 : cdf(v) >= u } for u in [0, 1).
        double quantile(double u) const;
        /// Right end of the support, or +inf.
        double support_upper() const;
        /// Interior points where the CDF has a kink or a jump.
        std::vector<double> breakpoints() const;

        double sample(RandomStream& rng) const;

        /// Same law with time rescaled so the mean becomes `new_mean`.
        ServiceDistribution with_mean(double new_mean) const;

        /// Unchecked evaluation for v >= 0; used on hot paths.
        double cdf_unchecked(double v) const;
        double survival_unchecked(double v) const;

    private:
        Law law_ = Exponential{};
        // Normalized table knots with the implicit origin knot included.
        std::vector<Knot> table_;
    };

    ServiceDistribution exponential(double mean);
    ServiceDistribution uniform_on_double_mean(double mean);
    ServiceDistribution special_family(double gamma, double beta, double rho);
    ServiceDistribution deterministic(double value);
    ServiceDistribution empirical_table(std::vector<Knot> knots);

    /// Largest beta admitted by the special family: gamma / (e^rho - 1).
    double special_family_beta_upper(double gamma, double rho);
}
