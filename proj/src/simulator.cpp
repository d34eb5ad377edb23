#include "fundnet/simulator.hpp"

#include "fundnet/error.hpp"
#include "fundnet/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

namespace fundnet
{
    namespace
    {
        constexpr std::uint64_t kPathDomain = 0;
        constexpr std::uint64_t kMarkDomain = 1;
        constexpr std::uint64_t kChunkSize = 1024;

        enum class EventKind : std::uint8_t
        {
            // Completions sort ahead of arrivals at equal timestamps.
            CompletionA = 0,
            CompletionB = 1,
            ArrivalA = 2,
            ArrivalB = 3,
        };

        struct Event
        {
            double time;
            EventKind kind;
            std::uint64_t seq;

            bool operator>(const Event& o) const
            {
                if (time != o.time)
                    return time > o.time;
                if (kind != o.kind)
                    return kind > o.kind;
                return seq > o.seq;
            }
        };

        struct Moments
        {
            double n = 0.0;
            double mean = 0.0;
            double m2 = 0.0;

            void add(double x)
            {
                n += 1.0;
                const double d = x - mean;
                mean += d / n;
                m2 += d * (x - mean);
            }

            void merge(const Moments& o)
            {
                if (o.n == 0.0)
                    return;
                if (n == 0.0)
                {
                    *this = o;
                    return;
                }
                const double total = n + o.n;
                const double d = o.mean - mean;
                mean += d * o.n / total;
                m2 += o.m2 + d * d * n * o.n / total;
                n = total;
            }

            double standard_error() const
            {
                return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0;
            }
        };

        struct GridMoments
        {
            Moments n_a, n_b, contribution, pension;
        };

        struct ChunkResult
        {
            std::vector<GridMoments> grid;
            EventCounts events;
        };

        void add_counts(EventCounts& into, const EventCounts& c)
        {
            into.arrivals_a += c.arrivals_a;
            into.completions_a += c.completions_a;
            into.routed_to_b += c.routed_to_b;
            into.arrivals_b_external += c.arrivals_b_external;
            into.completions_b += c.completions_b;
        }

        class Replicator
        {
        public:
            Replicator(const SimulationPlan& plan, bool with_marks) : plan_(plan), with_marks_(with_marks)
            {
                if (with_marks_)
                {
                    for (double t : plan_.grid)
                    {
                        mark_a_.push_back((*plan_.m_a)(t));
                        mark_b_.push_back((*plan_.m_b)(t));
                    }
                }
            }

            void run(std::uint64_t index, std::vector<GridMoments>& acc, EventCounts& counts) const
            {
                const auto& cfg = plan_.network;
                RandomStream rng = RandomStream::substream(plan_.master_seed, kPathDomain, index);
                RandomStream marks = RandomStream::substream(plan_.master_seed, kMarkDomain, index);

                std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
                std::uint64_t seq = 0;
                auto schedule_stream = [&](double rate, EventKind kind) {
                    if (rate <= 0.0)
                        return;
                    double s = rng.exponential(1.0 / rate);
                    while (s <= plan_.horizon)
                    {
                        queue.push(Event{s, kind, seq++});
                        s += rng.exponential(1.0 / rate);
                    }
                };
                schedule_stream(cfg.lambda_a, EventKind::ArrivalA);
                schedule_stream(cfg.lambda_b, EventKind::ArrivalB);

                std::int64_t n_a = 0;
                std::int64_t n_b = 0;
                std::size_t next_obs = 0;
                const auto& grid = plan_.grid;

                auto observe = [&](std::size_t g) {
                    auto& slot = acc[g];
                    slot.n_a.add(static_cast<double>(n_a));
                    slot.n_b.add(static_cast<double>(n_b));
                    if (with_marks_)
                    {
                        slot.contribution.add(mark_total(marks, n_a, mark_a_[g]));
                        slot.pension.add(mark_total(marks, n_b, mark_b_[g]));
                    }
                };

                auto enter_b = [&](double now) {
                    ++n_b;
                    queue.push(Event{now + cfg.service_b.sample(rng), EventKind::CompletionB, seq++});
                };

                while (!queue.empty() && queue.top().time <= plan_.horizon)
                {
                    const Event ev = queue.top();
                    queue.pop();
                    while (next_obs < grid.size() && grid[next_obs] < ev.time)
                    {
                        observe(next_obs++);
                    }
                    switch (ev.kind)
                    {
                    case EventKind::ArrivalA:
                        ++counts.arrivals_a;
                        ++n_a;
                        queue.push(Event{ev.time + cfg.service_a.sample(rng), EventKind::CompletionA, seq++});
                        break;
                    case EventKind::CompletionA:
                        ++counts.completions_a;
                        --n_a;
                        // Transfer along arch b is instantaneous.
                        if (rng.bernoulli(cfg.p))
                        {
                            ++counts.routed_to_b;
                            enter_b(ev.time);
                        }
                        break;
                    case EventKind::ArrivalB:
                        ++counts.arrivals_b_external;
                        enter_b(ev.time);
                        break;
                    case EventKind::CompletionB:
                        ++counts.completions_b;
                        --n_b;
                        break;
                    }
                    if (n_a < 0 || n_b < 0)
                    {
                        throw std::logic_error("negative occupancy in replication " + std::to_string(index));
                    }
                }
                while (next_obs < grid.size())
                {
                    observe(next_obs++);
                }
            }

        private:
            double mark_total(RandomStream& marks, std::int64_t count, double mean) const
            {
                if (plan_.marks == MarkLaw::Degenerate)
                {
                    return mean * static_cast<double>(count);
                }
                double total = 0.0;
                for (std::int64_t i = 0; i < count; ++i)
                {
                    total += marks.exponential(mean);
                }
                return total;
            }

            const SimulationPlan& plan_;
            bool with_marks_;
            std::vector<double> mark_a_;
            std::vector<double> mark_b_;
        };

        SimulationEstimate run_plan(const SimulationPlan& plan, bool with_marks)
        {
            plan.validate();
            const Replicator replicator(plan, with_marks);
            const std::uint64_t chunks = (plan.replications + kChunkSize - 1) / kChunkSize;
            std::vector<ChunkResult> results(chunks);

            std::atomic<std::uint64_t> next{0};
            std::exception_ptr failure;
            std::atomic<bool> failed{false};
            auto worker = [&] {
                try
                {
                    for (std::uint64_t c = next++; c < chunks && !failed; c = next++)
                    {
                        auto& r = results[c];
                        r.grid.assign(plan.grid.size(), GridMoments{});
                        const std::uint64_t begin = c * kChunkSize;
                        const std::uint64_t end = std::min(plan.replications, begin + kChunkSize);
                        for (std::uint64_t i = begin; i < end; ++i)
                        {
                            replicator.run(i, r.grid, r.events);
                        }
                    }
                }
                catch (...)
                {
                    if (!failed.exchange(true))
                        failure = std::current_exception();
                }
            };

            unsigned threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
            threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
            if (threads <= 1)
            {
                worker();
            }
            else
            {
                std::vector<std::jthread> pool;
                for (unsigned i = 0; i < threads; ++i)
                    pool.emplace_back(worker);
            }
            if (failure)
            {
                std::rethrow_exception(failure);
            }

            std::vector<GridMoments> total(plan.grid.size());
            SimulationEstimate est;
            est.replications = plan.replications;
            est.master_seed = plan.master_seed;
            for (const auto& r : results)
            {
                for (std::size_t g = 0; g < total.size(); ++g)
                {
                    total[g].n_a.merge(r.grid[g].n_a);
                    total[g].n_b.merge(r.grid[g].n_b);
                    total[g].contribution.merge(r.grid[g].contribution);
                    total[g].pension.merge(r.grid[g].pension);
                }
                add_counts(est.events, r.events);
            }

            for (std::size_t g = 0; g < total.size(); ++g)
            {
                GridEstimate p;
                p.t = plan.grid[g];
                p.mean_n_a = total[g].n_a.mean;
                p.se_n_a = total[g].n_a.standard_error();
                p.mean_n_b = total[g].n_b.mean;
                p.se_n_b = total[g].n_b.standard_error();
                if (with_marks)
                {
                    p.mean_contribution = total[g].contribution.mean;
                    p.se_contribution = total[g].contribution.standard_error();
                    p.mean_pension = total[g].pension.mean;
                    p.se_pension = total[g].pension.standard_error();
                    p.wald_gap_contribution = *p.mean_contribution - (*plan.m_a)(p.t) * p.mean_n_a;
                    p.wald_gap_pension = *p.mean_pension - (*plan.m_b)(p.t) * p.mean_n_b;
                }
                est.points.push_back(p);
            }
            return est;
        }
    }

    std::vector<std::string> SimulationPlan::violations() const
    {
        std::vector<std::string> out = network.violations();
        if (!std::isfinite(horizon) || !(horizon > 0.0))
            out.push_back("horizon must be finite and > 0");
        if (grid.empty())
            out.push_back("observation grid must not be empty");
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            if (!(grid[i] >= 0.0 && grid[i] <= horizon))
            {
                out.push_back("grid point " + std::to_string(i) + " lies outside [0, horizon]");
                break;
            }
            if (i > 0 && grid[i] < grid[i - 1])
            {
                out.push_back("grid must be sorted ascending");
                break;
            }
        }
        if (replications < 1)
            out.push_back("replications must be >= 1");
        if (m_a)
            for (auto& v : m_a->violations())
                out.push_back("m_a: " + v);
        if (m_b)
            for (auto& v : m_b->violations())
                out.push_back("m_b: " + v);
        return out;
    }

    void SimulationPlan::validate() const
    {
        auto v = violations();
        if (!v.empty())
        {
            throw Error(ErrorKind::InvalidPlan, v.front());
        }
    }

    SimulationEstimate simulate(const SimulationPlan& plan)
    {
        return run_plan(plan, false);
    }

    SimulationEstimate simulate_cash_flows(const SimulationPlan& plan)
    {
        if (!plan.m_a || !plan.m_b)
        {
            throw Error(ErrorKind::MissingMarkFunctions, "cash-flow simulation needs both m_a and m_b");
        }
        return run_plan(plan, true);
    }

    double z_score(double analytic, double simulated, double se)
    {
        const double delta = analytic - simulated;
        if (se > 0.0)
        {
            return delta / se;
        }
        if (delta == 0.0)
        {
            return 0.0;
        }
        return std::copysign(std::numeric_limits<double>::infinity(), delta);
    }

    CoverageReport compare_with_analytic(const SimulationEstimate& est, std::span<const double> analytic_n_a,
                                         std::span<const double> analytic_n_b)
    {
        if (analytic_n_a.size() != est.points.size() || analytic_n_b.size() != est.points.size())
        {
            throw Error(ErrorKind::GridMismatch, "analytic values do not align with the simulation grid");
        }
        CoverageReport report;
        std::size_t within = 0;
        for (std::size_t i = 0; i < est.points.size(); ++i)
        {
            const auto& p = est.points[i];
            report.z_n_a.push_back(z_score(analytic_n_a[i], p.mean_n_a, p.se_n_a));
            report.z_n_b.push_back(z_score(analytic_n_b[i], p.mean_n_b, p.se_n_b));
            for (double z : {report.z_n_a.back(), report.z_n_b.back()})
            {
                report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
                if (std::abs(z) <= 3.0)
                    ++within;
                if (std::abs(z) > 4.0)
                    report.alarm = true;
            }
        }
        if (!est.points.empty())
        {
            report.fraction_within_3 = static_cast<double>(within) / (2.0 * static_cast<double>(est.points.size()));
        }
        return report;
    }

    CoverageReport compare_with_analytic(const SimulationEstimate& est, const NetworkConfig& cfg,
                                         const OccupancyMethod& how)
    {
        std::vector<double> a;
        std::vector<double> b;
        for (const auto& p : est.points)
        {
            a.push_back(occupancy_a(cfg, p.t));
            b.push_back(occupancy_b(cfg, p.t, how));
        }
        return compare_with_analytic(est, a, b);
    }
}
