#include "fundnet/quadrature.hpp"

#include "fundnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace fundnet
{
    namespace
    {
        struct Panel
        {
            double a, fa, m, fm, b, fb, whole;
        };

        double simpson(double a, double fa, double fm, double b, double fb)
        {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }

        class Refiner
        {
        public:
            Refiner(const std::function<double(double)>& f, const QuadratureOptions& opt) : f_(f), opt_(opt) {}

            double run(const Panel& p, double eps, int depth)
            {
                const double lm = 0.5 * (p.a + p.m);
                const double rm = 0.5 * (p.m + p.b);
                const double flm = f_(lm);
                const double frm = f_(rm);
                const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
                const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
                const double delta = left + right - p.whole;

                const bool resolved = depth >= opt_.min_depth && std::abs(delta) <= 15.0 * eps;
                const bool exhausted = depth >= opt_.max_depth || !(p.a < lm && lm < p.m && p.m < rm && rm < p.b);
                if (resolved || exhausted)
                {
                    if (!resolved && !failed_)
                    {
                        failed_ = true;
                        fail_at_ = p.m;
                    }
                    return left + right + delta / 15.0;
                }
                return run(Panel{p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * eps, depth + 1) +
                       run(Panel{p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * eps, depth + 1);
            }

            bool failed() const { return failed_; }
            double fail_at() const { return fail_at_; }

        private:
            const std::function<double(double)>& f_;
            const QuadratureOptions& opt_;
            bool failed_ = false;
            double fail_at_ = 0.0;
        };
    }

    double integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breakpoints,
                     const QuadratureOptions& options)
    {
        if (!(b > a))
        {
            return 0.0;
        }

        std::vector<double> cuts;
        for (double x : breakpoints)
        {
            if (x > a && x < b)
                cuts.push_back(x);
        }
        cuts.push_back(b);
        std::sort(cuts.begin(), cuts.end());

        // Edges a few ulps apart are one edge; the sliver between them cannot be bisected.
        auto close = [](double x, double y) {
            return y - x <= 32.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
        };
        std::vector<double> edges{a};
        for (double x : cuts)
        {
            if (!close(edges.back(), x))
                edges.push_back(x);
            else if (x == b && edges.size() > 1)
                edges.back() = b;
        }
        if (edges.size() == 1)
            edges.push_back(b);

        std::vector<Panel> panels;
        panels.reserve(edges.size() - 1);
        double coarse = 0.0;
        for (std::size_t i = 1; i < edges.size(); ++i)
        {
            const double lo = edges[i - 1];
            const double hi = edges[i];
            const double mid = 0.5 * (lo + hi);
            // Panel edges are sampled a hair inside the panel so a jump sitting
            // on an edge contributes its one-sided limit.
            const double ulp = std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
            const double nudge = std::min(0.25 * (hi - lo), 16.0 * ulp);
            Panel p{lo, f(lo + nudge), mid, f(mid), hi, f(hi - nudge), 0.0};
            p.whole = simpson(p.a, p.fa, p.fm, p.b, p.fb);
            coarse += p.whole;
            panels.push_back(p);
        }

        const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(coarse));
        Refiner refiner(f, options);
        double total = 0.0;
        for (const auto& p : panels)
        {
            total += refiner.run(p, tol * (p.b - p.a) / (b - a), 0);
        }
        if (refiner.failed())
        {
            std::ostringstream os;
            os.precision(17);
            os << "adaptive Simpson did not reach tolerance " << tol << " near x = " << refiner.fail_at()
               << " on [" << a << ", " << b << "]";
            throw Error(ErrorKind::QuadratureNonConvergence, os.str());
        }
        return total;
    }
}
