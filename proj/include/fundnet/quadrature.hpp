#pragma once

#include <functional>
#include <span>

namespace fundnet
{
    struct QuadratureOptions
    {
        double abs_tol = 1e-10;
        double rel_tol = 1e-9;
        int max_depth = 60;
        // Every panel is bisected at least this many times before the error
        // estimate is trusted.
        int min_depth = 4;
    };

    /// Adaptive Simpson quadrature of f over [a, b].
    ///
    /// `breakpoints` lists points where f may have a kink or a jump; those
    /// inside (a, b) become panel edges so refinement never has to resolve a
    /// discontinuity. The target error is max(abs_tol, rel_tol * |integral|),
    /// shared between panels in proportion to their width.
    ///
    /// Throws Error(QuadratureNonConvergence) if a subinterval at max_depth
    /// still misses its share of the tolerance.
    double integrate(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints = {}, const QuadratureOptions& options = {});
}
