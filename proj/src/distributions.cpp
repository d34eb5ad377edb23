#include "fundnet/distributions.hpp"

#include "fundnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fundnet
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        template <class... Ts>
        struct Overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        Overloaded(Ts...) -> Overloaded<Ts...>;

        bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

        std::string describe(double x)
        {
            std::ostringstream os;
            os.precision(17);
            os << x;
            return os.str();
        }

        // Pieces of the special family written so that nothing overflows for
        // large (gamma + beta) v.
        double special_survival(const SpecialFamily& d, double v)
        {
            const double c = d.gamma + d.beta;
            if (c <= 0.0)
            {
                return 0.0;
            }
            const double k = -std::expm1(-d.rho) * c;
            const double denom = d.gamma * (std::exp(-d.rho) * std::expm1(c * v) + 1.0);
            return std::clamp(k / denom, 0.0, 1.0);
        }

        double special_survival_integral(const SpecialFamily& d, double t)
        {
            const double c = d.gamma + d.beta;
            if (c <= 0.0)
            {
                return 0.0;
            }
            // (1/gamma) ln( e^{ct} / (e^{-rho}(e^{ct} - 1) + 1) )
            const double x = c * t;
            if (x <= d.rho + 1.0)
            {
                return (x - std::log1p(std::exp(-d.rho) * std::expm1(x))) / d.gamma;
            }
            return (d.rho - std::log1p(std::expm1(d.rho) * std::exp(-x))) / d.gamma;
        }

        double special_quantile(const SpecialFamily& d, double u)
        {
            const double c = d.gamma + d.beta;
            if (c <= 0.0)
            {
                return 0.0;
            }
            const double k_over_gamma = -std::expm1(-d.rho) * c / d.gamma;
            const double atom = 1.0 - k_over_gamma;
            if (u <= atom)
            {
                return 0.0;
            }
            const double ratio = k_over_gamma / (1.0 - u);
            return std::log1p(std::exp(d.rho) * (ratio - 1.0)) / c;
        }

        std::vector<Knot> normalize_table(const std::vector<Knot>& knots)
        {
            std::vector<Knot> out;
            if (knots.empty())
            {
                return out;
            }
            if (knots.front().time > 0.0)
            {
                out.push_back(Knot{0.0, 0.0});
            }
            out.insert(out.end(), knots.begin(), knots.end());
            return out;
        }

        double table_cdf(const std::vector<Knot>& table, double v)
        {
            if (table.empty() || v >= table.back().time)
            {
                return 1.0;
            }
            auto hi = std::upper_bound(table.begin(), table.end(), v,
                                       [](double x, const Knot& k) { return x < k.time; });
            auto lo = hi - 1;
            const double w = (v - lo->time) / (hi->time - lo->time);
            return lo->probability + w * (hi->probability - lo->probability);
        }

        double table_survival_integral(const std::vector<Knot>& table, double t)
        {
            double total = 0.0;
            for (std::size_t i = 1; i < table.size(); ++i)
            {
                const double a = table[i - 1].time;
                if (t <= a)
                {
                    break;
                }
                const double b = std::min(t, table[i].time);
                const double fa = table[i - 1].probability;
                const double fb = table_cdf(table, b);
                total += (b - a) * (1.0 - 0.5 * (fa + fb));
            }
            return total;
        }

        double table_quantile(const std::vector<Knot>& table, double u)
        {
            auto it = std::lower_bound(table.begin(), table.end(), u,
                                       [](const Knot& k, double x) { return k.probability < x; });
            if (it == table.begin())
            {
                return table.front().time;
            }
            if (it == table.end())
            {
                return table.back().time;
            }
            auto lo = it - 1;
            const double w = (u - lo->probability) / (it->probability - lo->probability);
            return lo->time + w * (it->time - lo->time);
        }
    }

    double special_family_beta_upper(double gamma, double rho)
    {
        return gamma / std::expm1(rho);
    }

    ServiceDistribution::ServiceDistribution(Law law) : law_(std::move(law))
    {
        if (auto* t = std::get_if<EmpiricalTable>(&law_))
        {
            table_ = normalize_table(t->knots);
        }
    }

    std::string_view ServiceDistribution::kind_name() const noexcept
    {
        return std::visit(Overloaded{
                              [](const Exponential&) { return std::string_view("exponential"); },
                              [](const UniformOnDoubleMean&) { return std::string_view("uniform"); },
                              [](const SpecialFamily&) { return std::string_view("special"); },
                              [](const Deterministic&) { return std::string_view("deterministic"); },
                              [](const EmpiricalTable&) { return std::string_view("table"); },
                          },
                          law_);
    }

    std::vector<std::string> ServiceDistribution::violations() const
    {
        std::vector<std::string> out;
        std::visit(Overloaded{
                       [&](const Exponential& d) {
                           if (!finite_positive(d.mean))
                               out.push_back("exponential mean must be finite and > 0, got " + describe(d.mean));
                       },
                       [&](const UniformOnDoubleMean& d) {
                           if (!finite_positive(d.mean))
                               out.push_back("uniform mean must be finite and > 0, got " + describe(d.mean));
                       },
                       [&](const SpecialFamily& d) {
                           if (!finite_positive(d.gamma))
                               out.push_back("special gamma must be finite and > 0, got " + describe(d.gamma));
                           if (!finite_positive(d.rho))
                               out.push_back("special rho must be finite and > 0, got " + describe(d.rho));
                           if (!std::isfinite(d.beta))
                           {
                               out.push_back("special beta must be finite, got " + describe(d.beta));
                               return;
                           }
                           if (!out.empty())
                               return;
                           if (d.beta < -d.gamma)
                               out.push_back("special beta must satisfy beta >= -gamma (" + describe(-d.gamma) +
                                             "), got " + describe(d.beta));
                           const double upper = special_family_beta_upper(d.gamma, d.rho);
                           if (d.beta > upper * (1.0 + 1e-12) + 1e-300)
                               out.push_back("special beta must satisfy beta <= gamma/(e^rho - 1) (" +
                                             describe(upper) + "), got " + describe(d.beta));
                       },
                       [&](const Deterministic& d) {
                           if (!std::isfinite(d.value) || d.value < 0.0)
                               out.push_back("deterministic value must be finite and >= 0, got " +
                                             describe(d.value));
                       },
                       [&](const EmpiricalTable& d) {
                           if (d.knots.empty())
                           {
                               out.push_back("table needs at least one knot");
                               return;
                           }
                           double prev_t = -1.0;
                           double prev_p = 0.0;
                           for (std::size_t i = 0; i < d.knots.size(); ++i)
                           {
                               const auto& k = d.knots[i];
                               const std::string where = "table knot " + std::to_string(i);
                               if (!std::isfinite(k.time) || k.time < 0.0)
                                   out.push_back(where + ": time must be finite and >= 0");
                               else if (k.time <= prev_t)
                                   out.push_back(where + ": times must be strictly increasing");
                               if (!(k.probability >= 0.0 && k.probability <= 1.0))
                                   out.push_back(where + ": probability must lie in [0, 1]");
                               else if (k.probability < prev_p)
                                   out.push_back(where + ": probabilities must be nondecreasing");
                               prev_t = k.time;
                               prev_p = k.probability;
                           }
                           if (d.knots.back().probability != 1.0)
                               out.push_back("table: last knot probability must be 1");
                       },
                   },
                   law_);
        return out;
    }

    void ServiceDistribution::validate() const
    {
        auto v = violations();
        if (!v.empty())
        {
            throw Error(ErrorKind::ParameterOutOfRange, v.front());
        }
    }

    double ServiceDistribution::cdf(double v) const
    {
        require_nonnegative_time(v);
        return cdf_unchecked(v);
    }

    double ServiceDistribution::survival(double v) const
    {
        require_nonnegative_time(v);
        return survival_unchecked(v);
    }

    double ServiceDistribution::cdf_unchecked(double v) const
    {
        return std::visit(Overloaded{
                              [&](const Exponential& d) { return -std::expm1(-v / d.mean); },
                              [&](const UniformOnDoubleMean& d) { return std::min(v / (2.0 * d.mean), 1.0); },
                              [&](const SpecialFamily& d) { return 1.0 - special_survival(d, v); },
                              [&](const Deterministic& d) { return v >= d.value ? 1.0 : 0.0; },
                              [&](const EmpiricalTable&) { return table_cdf(table_, v); },
                          },
                          law_);
    }

    double ServiceDistribution::survival_unchecked(double v) const
    {
        return std::visit(Overloaded{
                              [&](const Exponential& d) { return std::exp(-v / d.mean); },
                              [&](const UniformOnDoubleMean& d) { return std::max(0.0, 1.0 - v / (2.0 * d.mean)); },
                              [&](const SpecialFamily& d) { return special_survival(d, v); },
                              [&](const Deterministic& d) { return v >= d.value ? 0.0 : 1.0; },
                              [&](const EmpiricalTable&) { return 1.0 - table_cdf(table_, v); },
                          },
                          law_);
    }

    double ServiceDistribution::survival_integral(double t) const
    {
        require_nonnegative_time(t);
        return std::visit(Overloaded{
                              [&](const Exponential& d) { return -d.mean * std::expm1(-t / d.mean); },
                              [&](const UniformOnDoubleMean& d) {
                                  return t < 2.0 * d.mean ? t - t * t / (4.0 * d.mean) : d.mean;
                              },
                              [&](const SpecialFamily& d) { return special_survival_integral(d, t); },
                              [&](const Deterministic& d) { return std::min(t, d.value); },
                              [&](const EmpiricalTable&) { return table_survival_integral(table_, t); },
                          },
                          law_);
    }

    double ServiceDistribution::mean() const
    {
        return std::visit(Overloaded{
                              [](const Exponential& d) { return d.mean; },
                              [](const UniformOnDoubleMean& d) { return d.mean; },
                              [](const SpecialFamily& d) { return d.gamma + d.beta > 0.0 ? d.rho / d.gamma : 0.0; },
                              [](const Deterministic& d) { return d.value; },
                              [&](const EmpiricalTable&) { return table_survival_integral(table_, kInf); },
                          },
                          law_);
    }

    double ServiceDistribution::quantile(double u) const
    {
        if (!(u >= 0.0 && u < 1.0))
        {
            throw Error(ErrorKind::ParameterOutOfRange, "quantile level must lie in [0, 1), got " + describe(u));
        }
        return std::visit(Overloaded{
                              [&](const Exponential& d) { return -d.mean * std::log1p(-u); },
                              [&](const UniformOnDoubleMean& d) { return 2.0 * d.mean * u; },
                              [&](const SpecialFamily& d) { return special_quantile(d, u); },
                              [&](const Deterministic& d) { return d.value; },
                              [&](const EmpiricalTable&) { return table_quantile(table_, u); },
                          },
                          law_);
    }

    double ServiceDistribution::support_upper() const
    {
        return std::visit(Overloaded{
                              [](const Exponential&) { return kInf; },
                              [](const UniformOnDoubleMean& d) { return 2.0 * d.mean; },
                              [](const SpecialFamily& d) { return d.gamma + d.beta > 0.0 ? kInf : 0.0; },
                              [](const Deterministic& d) { return d.value; },
                              [](const EmpiricalTable& d) { return d.knots.empty() ? 0.0 : d.knots.back().time; },
                          },
                          law_);
    }

    std::vector<double> ServiceDistribution::breakpoints() const
    {
        return std::visit(Overloaded{
                              [](const Exponential&) { return std::vector<double>{}; },
                              [](const UniformOnDoubleMean& d) { return std::vector<double>{2.0 * d.mean}; },
                              [](const SpecialFamily&) { return std::vector<double>{}; },
                              [](const Deterministic& d) {
                                  return d.value > 0.0 ? std::vector<double>{d.value} : std::vector<double>{};
                              },
                              [&](const EmpiricalTable&) {
                                  std::vector<double> out;
                                  for (const auto& k : table_)
                                  {
                                      if (k.time > 0.0)
                                          out.push_back(k.time);
                                  }
                                  return out;
                              },
                          },
                          law_);
    }

    double ServiceDistribution::sample(RandomStream& rng) const
    {
        if (const auto* d = std::get_if<Deterministic>(&law_))
        {
            return d->value;
        }
        return quantile(rng.uniform());
    }

    ServiceDistribution ServiceDistribution::with_mean(double new_mean) const
    {
        const double current = mean();
        if (!(current > 0.0) || !(new_mean > 0.0) || !std::isfinite(new_mean))
        {
            throw Error(ErrorKind::ParameterOutOfRange,
                        "cannot rescale a " + std::string(kind_name()) + " law with mean " + describe(current) +
                            " to mean " + describe(new_mean));
        }
        const double k = new_mean / current;
        return std::visit(Overloaded{
                              [&](const Exponential&) { return ServiceDistribution(Exponential{new_mean}); },
                              [&](const UniformOnDoubleMean&) {
                                  return ServiceDistribution(UniformOnDoubleMean{new_mean});
                              },
                              [&](const SpecialFamily& d) {
                                  return ServiceDistribution(SpecialFamily{d.gamma / k, d.beta / k, d.rho});
                              },
                              [&](const Deterministic&) { return ServiceDistribution(Deterministic{new_mean}); },
                              [&](const EmpiricalTable& d) {
                                  EmpiricalTable scaled = d;
                                  for (auto& knot : scaled.knots)
                                      knot.time *= k;
                                  return ServiceDistribution(std::move(scaled));
                              },
                          },
                          law_);
    }

    namespace
    {
        ServiceDistribution checked(ServiceDistribution d)
        {
            d.validate();
            return d;
        }
    }

    ServiceDistribution exponential(double mean) { return checked(Exponential{mean}); }
    ServiceDistribution uniform_on_double_mean(double mean) { return checked(UniformOnDoubleMean{mean}); }
    ServiceDistribution special_family(double gamma, double beta, double rho)
    {
        return checked(SpecialFamily{gamma, beta, rho});
    }
    ServiceDistribution deterministic(double value) { return checked(Deterministic{value}); }
    ServiceDistribution empirical_table(std::vector<Knot> knots) { return checked(EmpiricalTable{std::move(knots)}); }
}
