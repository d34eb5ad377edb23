#include "fundnet/transient.hpp"

#include "fundnet/error.hpp"
#include "fundnet/quadrature.hpp"

#include <algorithm>
#include <cmath>

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

        bool same_family(const NetworkConfig& cfg)
        {
            return cfg.service_a.law().index() == cfg.service_b.law().index();
        }

        std::vector<double> convolution_breakpoints(const NetworkConfig& cfg, double t)
        {
            std::vector<double> pts = cfg.service_a.breakpoints();
            for (double x : cfg.service_b.breakpoints())
            {
                pts.push_back(t - x);
            }
            return pts;
        }

        double cross_term_closed(const NetworkConfig& cfg, double t)
        {
            const auto& a = cfg.service_a.law();
            const auto& b = cfg.service_b.law();
            if (const auto* ea = std::get_if<Exponential>(&a))
            {
                return closed_form::exponential_cross_term(ea->mean, std::get<Exponential>(b).mean, t);
            }
            if (const auto* ua = std::get_if<UniformOnDoubleMean>(&a))
            {
                return closed_form::uniform_cross_term(ua->mean, std::get<UniformOnDoubleMean>(b).mean, t);
            }
            const double routed = cfg.p * cfg.lambda_a;
            return special_family_I(cfg, t, 1e-11 / std::max(1.0, routed));
        }

        double occupancy_b_closed(const NetworkConfig& cfg, double t)
        {
            const double routed = cfg.p * cfg.lambda_a;
            const double s_b = cfg.service_b.survival_integral(t);
            if (routed == 0.0)
            {
                return cfg.lambda_b * s_b;
            }
            const double value = (routed + cfg.lambda_b) * s_b - routed * cross_term_closed(cfg, t);
            return std::max(0.0, value);
        }

        double occupancy_b_numeric(const NetworkConfig& cfg, double t, double abs_tol, double rel_tol)
        {
            if (t == 0.0)
            {
                return 0.0;
            }
            const double routed = cfg.p * cfg.lambda_a;
            auto integrand = [&](double v) {
                const double intensity = routed * cfg.service_a.cdf_unchecked(v) + cfg.lambda_b;
                return intensity * cfg.service_b.survival_unchecked(std::max(0.0, t - v));
            };
            const auto pts = convolution_breakpoints(cfg, t);
            QuadratureOptions opt;
            opt.abs_tol = abs_tol;
            opt.rel_tol = rel_tol;
            return integrate(integrand, 0.0, t, pts, opt);
        }
    }

    std::string_view to_string(Evaluation e) noexcept
    {
        return e == Evaluation::ClosedForm ? "ClosedForm" : "Quadrature";
    }

    std::vector<std::string> NetworkConfig::violations() const
    {
        std::vector<std::string> out;
        if (!std::isfinite(lambda_a) || lambda_a < 0.0)
            out.push_back("lambda_a must be finite and >= 0");
        if (!std::isfinite(lambda_b) || lambda_b < 0.0)
            out.push_back("lambda_b must be finite and >= 0");
        if (!(p >= 0.0 && p <= 1.0))
            out.push_back("p must lie in [0, 1]");
        for (auto& v : service_a.violations())
            out.push_back("service_a: " + v);
        for (auto& v : service_b.violations())
            out.push_back("service_b: " + v);
        return out;
    }

    void NetworkConfig::validate() const
    {
        auto v = violations();
        if (!v.empty())
        {
            throw Error(ErrorKind::ParameterOutOfRange, v.front());
        }
    }

    double occupancy_a(const NetworkConfig& cfg, double t)
    {
        require_nonnegative_time(t);
        if (cfg.lambda_a == 0.0)
        {
            return 0.0;
        }
        return cfg.lambda_a * cfg.service_a.survival_integral(t);
    }

    double arrival_intensity_b(const NetworkConfig& cfg, double t)
    {
        require_nonnegative_time(t);
        return cfg.p * cfg.lambda_a * cfg.service_a.cdf(t) + cfg.lambda_b;
    }

    bool has_closed_form(const NetworkConfig& cfg)
    {
        if (cfg.p * cfg.lambda_a == 0.0)
        {
            return true;
        }
        if (!same_family(cfg))
        {
            return false;
        }
        return cfg.service_a.is<Exponential>() || cfg.service_a.is<UniformOnDoubleMean>() ||
               cfg.service_a.is<SpecialFamily>();
    }

    OccupancyB occupancy_b_detailed(const NetworkConfig& cfg, double t, const OccupancyMethod& how)
    {
        require_nonnegative_time(t);
        return std::visit(Overloaded{
                              [&](const method::Auto& a) {
                                  if (has_closed_form(cfg))
                                      return OccupancyB{occupancy_b_closed(cfg, t), Evaluation::ClosedForm};
                                  const method::Quadrature& q = a.fallback;
                                  return OccupancyB{occupancy_b_numeric(cfg, t, q.abs_tol, q.rel_tol),
                                                    Evaluation::Quadrature};
                              },
                              [&](const method::ClosedForm&) {
                                  if (!has_closed_form(cfg))
                                  {
                                      throw Error(ErrorKind::NoClosedForm,
                                                  "no closed form for services (" +
                                                      std::string(cfg.service_a.kind_name()) + ", " +
                                                      std::string(cfg.service_b.kind_name()) + ")");
                                  }
                                  return OccupancyB{occupancy_b_closed(cfg, t), Evaluation::ClosedForm};
                              },
                              [&](const method::Quadrature& q) {
                                  if (!(q.abs_tol > 0.0) || !(q.rel_tol >= 0.0))
                                  {
                                      throw Error(ErrorKind::ParameterOutOfRange,
                                                  "quadrature tolerances must be positive");
                                  }
                                  return OccupancyB{occupancy_b_numeric(cfg, t, q.abs_tol, q.rel_tol),
                                                    Evaluation::Quadrature};
                              },
                          },
                          how);
    }

    double occupancy_b(const NetworkConfig& cfg, double t, const OccupancyMethod& how)
    {
        return occupancy_b_detailed(cfg, t, how).value;
    }

    double occupancy_b_quadrature(const NetworkConfig& cfg, double t, double abs_tol)
    {
        require_nonnegative_time(t);
        if (!(abs_tol > 0.0))
        {
            throw Error(ErrorKind::ParameterOutOfRange, "abs_tol must be > 0");
        }
        return occupancy_b_numeric(cfg, t, abs_tol, 0.0);
    }

    double special_family_I(const NetworkConfig& cfg, double t, double abs_tol)
    {
        if (!cfg.service_a.is<SpecialFamily>() || !cfg.service_b.is<SpecialFamily>())
        {
            throw Error(ErrorKind::WrongDistributionKind, "the I(t) cross term needs two special-family services");
        }
        require_nonnegative_time(t);
        if (t == 0.0)
        {
            return 0.0;
        }
        auto integrand = [&](double v) {
            return cfg.service_a.survival_unchecked(v) * cfg.service_b.survival_unchecked(std::max(0.0, t - v));
        };
        QuadratureOptions opt;
        opt.abs_tol = abs_tol;
        opt.rel_tol = 0.0;
        return integrate(integrand, 0.0, t, {}, opt);
    }

    namespace closed_form
    {
        double exponential_cross_term(double a, double b, double t)
        {
            // int_0^t e^{-v/a} e^{-(t-v)/b} dv is symmetric in (a, b); order the
            // means so the expm1 argument is nonnegative and nothing overflows.
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            if (lo == hi)
            {
                return t * std::exp(-t / lo);
            }
            const double x = t * (1.0 / lo - 1.0 / hi);
            const double phi = x == 0.0 ? 1.0 : -std::expm1(-x) / x;
            return t * std::exp(-t / hi) * phi;
        }

        double uniform_cross_term(double a, double b, double t)
        {
            const double len_a = 2.0 * a;
            const double len_b = 2.0 * b;
            const double lo = std::max(0.0, t - len_b);
            const double hi = std::min(t, len_a);
            if (!(hi > lo))
            {
                return 0.0;
            }
            // On [lo, hi] both survival factors are linear, so the integrand is
            // a quadratic in v and Simpson's rule is exact.
            auto f = [&](double v) { return (1.0 - v / len_a) * (1.0 - (t - v) / len_b); };
            return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
        }
    }
}
