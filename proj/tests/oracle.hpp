#pragma once

// Test-only reference integrals. These go through Boost's adaptive
// Gauss-Kronrod rule, never through fundnet::integrate, so they check the
// library's closed forms and its Simpson path independently.

#include "fundnet/distributions.hpp"
#include "fundnet/transient.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fundnet::oracle
{
    template <class F>
    double integrate(F f, double a, double b, std::vector<double> cuts = {})
    {
        if (!(b > a))
            return 0.0;
        cuts.push_back(a);
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (std::size_t i = 1; i < cuts.size(); ++i)
        {
            const double lo = std::max(a, cuts[i - 1]);
            const double hi = std::min(b, cuts[i]);
            if (hi > lo)
                total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-11);
        }
        return total;
    }

    inline double survival_integral(const ServiceDistribution& d, double t)
    {
        return integrate([&](double v) { return 1.0 - d.cdf(v); }, 0.0, t, d.breakpoints());
    }

    inline double occupancy_b(const NetworkConfig& cfg, double t)
    {
        std::vector<double> cuts = cfg.service_a.breakpoints();
        for (double x : cfg.service_b.breakpoints())
            cuts.push_back(t - x);
        const double routed = cfg.p * cfg.lambda_a;
        return integrate(
            [&](double v) {
                return (routed * cfg.service_a.cdf(v) + cfg.lambda_b) * (1.0 - cfg.service_b.cdf(std::max(0.0, t - v)));
            },
            0.0, t, cuts);
    }

    /// Random valid special-family parameters.
    inline SpecialFamily random_special(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> gamma(0.2, 3.0);
        std::uniform_real_distribution<double> rho(0.2, 4.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        SpecialFamily d;
        d.gamma = gamma(rng);
        d.rho = rho(rng);
        const double lo = -d.gamma * 0.95;
        const double hi = special_family_beta_upper(d.gamma, d.rho);
        d.beta = lo + unit(rng) * (hi - lo);
        return d;
    }
}
