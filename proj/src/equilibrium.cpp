#include "fundnet/equilibrium.hpp"

#include "fundnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fundnet
{
    namespace
    {
        template <class... Ts>
        struct Overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        Overloaded(Ts...) -> Overloaded<Ts...>;
    }

    std::vector<std::string> MeanValueFunction::violations() const
    {
        std::vector<std::string> out;
        std::visit(Overloaded{
                       [&](const ConstantValue& c) {
                           if (!std::isfinite(c.value) || c.value < 0.0)
                               out.push_back("constant mean value must be finite and >= 0");
                       },
                       [&](const ExponentialGrowth& g) {
                           if (!std::isfinite(g.initial) || g.initial <= 0.0)
                               out.push_back("exponential_growth initial must be finite and > 0");
                           if (!std::isfinite(g.r))
                               out.push_back("exponential_growth r must be finite");
                       },
                       [&](const TabulatedValue& tab) {
                           if (tab.knots.empty())
                               out.push_back("tabulated mean value needs at least one knot");
                           for (std::size_t i = 0; i < tab.knots.size(); ++i)
                           {
                               const auto [t, v] = tab.knots[i];
                               if (!std::isfinite(t) || (i > 0 && t <= tab.knots[i - 1].first))
                                   out.push_back("tabulated knot " + std::to_string(i) +
                                                 ": times must be finite and strictly increasing");
                               if (!std::isfinite(v) || v < 0.0)
                                   out.push_back("tabulated knot " + std::to_string(i) +
                                                 ": value must be finite and >= 0");
                           }
                       },
                   },
                   form_);
        return out;
    }

    void MeanValueFunction::validate() const
    {
        auto v = violations();
        if (!v.empty())
        {
            throw Error(ErrorKind::ParameterOutOfRange, v.front());
        }
    }

    double MeanValueFunction::operator()(double t) const
    {
        return std::visit(Overloaded{
                              [](const ConstantValue& c) { return c.value; },
                              [&](const ExponentialGrowth& g) { return g.initial * std::exp(g.r * t); },
                              [&](const TabulatedValue& tab) {
                                  const auto& k = tab.knots;
                                  if (t <= k.front().first)
                                      return k.front().second;
                                  if (t >= k.back().first)
                                      return k.back().second;
                                  auto hi = std::upper_bound(k.begin(), k.end(), t,
                                                             [](double x, const auto& kn) { return x < kn.first; });
                                  auto lo = hi - 1;
                                  const double w = (t - lo->first) / (hi->first - lo->first);
                                  return lo->second + w * (hi->second - lo->second);
                              },
                          },
                          form_);
    }

    Ratio Ratio::of(double numerator, double denominator)
    {
        if (denominator > 0.0)
        {
            return Ratio{RatioKind::Defined, numerator / denominator};
        }
        if (numerator > 0.0)
        {
            return Ratio{RatioKind::Unbounded, std::numeric_limits<double>::infinity()};
        }
        return Ratio{RatioKind::Undefined, std::numeric_limits<double>::quiet_NaN()};
    }

    double Ratio::as_double() const noexcept
    {
        switch (kind)
        {
        case RatioKind::Defined: return value;
        case RatioKind::Unbounded: return std::numeric_limits<double>::infinity();
        case RatioKind::Undefined: break;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }

    Ratio equilibrium_ratio(const NetworkConfig& cfg, double t, const OccupancyMethod& how)
    {
        require_nonnegative_time(t);
        if (t == 0.0)
        {
            const double atom_a = cfg.service_a.cdf(0.0);
            const double atom_b = cfg.service_b.cdf(0.0);
            const double in_a = cfg.lambda_a * (1.0 - atom_a);
            const double in_b = (cfg.p * cfg.lambda_a * atom_a + cfg.lambda_b) * (1.0 - atom_b);
            return Ratio::of(in_a, in_b);
        }
        return Ratio::of(occupancy_a(cfg, t), occupancy_b(cfg, t, how));
    }

    EquilibriumPair equilibrium_pair(const NetworkConfig& cfg, const MeanValueFunction& m_a, double t,
                                     const OccupancyMethod& how)
    {
        require_nonnegative_time(t);
        const double e_a = occupancy_a(cfg, t);
        const double e_b = occupancy_b(cfg, t, how);
        const Ratio ratio = t == 0.0 ? equilibrium_ratio(cfg, t, how) : Ratio::of(e_a, e_b);
        if (ratio.kind == RatioKind::Undefined)
        {
            throw Error(ErrorKind::RatioUndefined, "both expected occupancies vanish at t = " + std::to_string(t));
        }
        if (ratio.kind == RatioKind::Unbounded)
        {
            throw Error(ErrorKind::RatioUnbounded, "node B is empty in expectation at t = " + std::to_string(t));
        }
        const double contribution = m_a(t);
        return EquilibriumPair{t, contribution, contribution * ratio.value, e_a, e_b};
    }

    double indexed_contribution(const NetworkConfig& cfg, double r, double t, const OccupancyMethod& how)
    {
        require_nonnegative_time(t);
        const double e_a = occupancy_a(cfg, t);
        if (!(e_a > 0.0))
        {
            throw Error(ErrorKind::NoContributors, "E[N_A] = 0 at t = " + std::to_string(t));
        }
        return std::exp(r * t) * occupancy_b(cfg, t, how) / e_a;
    }

    double long_run_ratio(const NetworkConfig& cfg)
    {
        const double inflow = cfg.pension_inflow_rate();
        const double alpha_b = cfg.service_b.mean();
        if (!(inflow > 0.0) || !(alpha_b > 0.0))
        {
            throw Error(ErrorKind::NoPensionInflow, "long-run ratio needs (p lambda_a + lambda_b) alpha_b > 0");
        }
        return cfg.lambda_a * cfg.service_a.mean() / (inflow * alpha_b);
    }

    double settling_time(const NetworkConfig& cfg)
    {
        return cfg.service_a.support_upper() + cfg.service_b.support_upper();
    }

    double approx_ratio_long(const NetworkConfig& cfg)
    {
        return long_run_ratio(cfg);
    }

    Ratio approx_ratio_short(const NetworkConfig& cfg)
    {
        return Ratio::of(cfg.lambda_a, cfg.lambda_b);
    }

    double excess_function(const NetworkConfig& cfg, const MeanValueFunction& m_b, const MeanValueFunction& m_a,
                           double t, ExcessForm form, const OccupancyMethod& how)
    {
        require_nonnegative_time(t);
        const double c = long_run_ratio(cfg);
        const double e_a = occupancy_a(cfg, t);
        const double e_b = occupancy_b(cfg, t, how);
        const double pension_scale = form == ExcessForm::Printed ? m_b(t) : m_a(t);
        return pension_scale * c * e_b - m_a(t) * e_a;
    }
}
