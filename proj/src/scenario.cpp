#include "fundnet/scenario.hpp"

#include "fundnet/error.hpp"
#include "fundnet/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace fundnet
{
    namespace
    {
        using nlohmann::json;

        [[noreturn]] void fail(const std::string& path, const std::string& what)
        {
            throw Error(ErrorKind::ParseError, path + ": " + what);
        }

        std::string join(const std::string& path, const std::string& key)
        {
            return path.empty() ? key : path + "." + key;
        }

        void expect_object(const json& j, const std::string& path)
        {
            if (!j.is_object())
                fail(path, "expected an object");
        }

        void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed)
        {
            for (const auto& [key, _] : obj.items())
            {
                const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
                if (!known)
                    fail(join(path, key), "unknown key");
            }
        }

        const json& field(const json& obj, const char* key, const std::string& path)
        {
            auto it = obj.find(key);
            if (it == obj.end())
                fail(join(path, key), "missing");
            return *it;
        }

        double number(const json& j, const std::string& path)
        {
            if (!j.is_number())
                fail(path, "expected a number");
            return j.get<double>();
        }

        double number_field(const json& obj, const char* key, const std::string& path)
        {
            return number(field(obj, key, path), join(path, key));
        }

        std::uint64_t unsigned_field(const json& obj, const char* key, const std::string& path)
        {
            const json& j = field(obj, key, path);
            const std::string where = join(path, key);
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer())
                fail(where, "expected a nonnegative integer");
            if (j.is_number_float())
            {
                const double d = j.get<double>();
                if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d)
                    return static_cast<std::uint64_t>(d);
            }
            fail(where, "expected a nonnegative integer");
        }

        std::string string_field(const json& obj, const char* key, const std::string& path)
        {
            const json& j = field(obj, key, path);
            if (!j.is_string())
                fail(join(path, key), "expected a string");
            return j.get<std::string>();
        }

        std::vector<std::pair<double, double>> pairs(const json& j, const std::string& path)
        {
            if (!j.is_array())
                fail(path, "expected an array of [x, y] pairs");
            std::vector<std::pair<double, double>> out;
            for (std::size_t i = 0; i < j.size(); ++i)
            {
                const std::string where = path + "[" + std::to_string(i) + "]";
                const json& e = j[i];
                if (!e.is_array() || e.size() != 2)
                    fail(where, "expected a two-element array");
                out.emplace_back(number(e[0], where + "[0]"), number(e[1], where + "[1]"));
            }
            return out;
        }

        ServiceDistribution parse_distribution(const json& j, const std::string& path)
        {
            expect_object(j, path);
            const std::string type = string_field(j, "type", path);
            if (type == "exponential")
            {
                check_keys(j, path, {"type", "mean"});
                return Exponential{number_field(j, "mean", path)};
            }
            if (type == "uniform")
            {
                check_keys(j, path, {"type", "mean"});
                return UniformOnDoubleMean{number_field(j, "mean", path)};
            }
            if (type == "deterministic")
            {
                check_keys(j, path, {"type", "mean"});
                return Deterministic{number_field(j, "mean", path)};
            }
            if (type == "special")
            {
                check_keys(j, path, {"type", "gamma", "beta", "rho"});
                return SpecialFamily{number_field(j, "gamma", path), number_field(j, "beta", path),
                                     number_field(j, "rho", path)};
            }
            if (type == "table")
            {
                check_keys(j, path, {"type", "knots"});
                EmpiricalTable table;
                for (auto [t, p] : pairs(field(j, "knots", path), join(path, "knots")))
                    table.knots.push_back(Knot{t, p});
                return table;
            }
            fail(join(path, "type"), "unknown distribution type '" + type + "'");
        }

        MeanValueFunction parse_mean_value(const json& j, const std::string& path)
        {
            expect_object(j, path);
            const std::string type = string_field(j, "type", path);
            if (type == "constant")
            {
                check_keys(j, path, {"type", "value"});
                return ConstantValue{number_field(j, "value", path)};
            }
            if (type == "exponential_growth")
            {
                check_keys(j, path, {"type", "initial", "r"});
                const double initial = j.contains("initial") ? number_field(j, "initial", path) : 1.0;
                return ExponentialGrowth{initial, number_field(j, "r", path)};
            }
            if (type == "tabulated")
            {
                check_keys(j, path, {"type", "knots"});
                return TabulatedValue{pairs(field(j, "knots", path), join(path, "knots"))};
            }
            fail(join(path, "type"), "unknown mean-value type '" + type + "'");
        }

        NetworkConfig parse_network(const json& j, const std::string& path)
        {
            expect_object(j, path);
            check_keys(j, path, {"lambda_a", "lambda_b", "p", "service_a", "service_b"});
            NetworkConfig cfg;
            cfg.lambda_a = number_field(j, "lambda_a", path);
            cfg.lambda_b = number_field(j, "lambda_b", path);
            cfg.p = number_field(j, "p", path);
            cfg.service_a = parse_distribution(field(j, "service_a", path), join(path, "service_a"));
            cfg.service_b = parse_distribution(field(j, "service_b", path), join(path, "service_b"));
            return cfg;
        }

        GridSpec parse_grid(const json& j, const std::string& path)
        {
            expect_object(j, path);
            check_keys(j, path, {"t_max", "steps", "times"});
            GridSpec grid;
            if (j.contains("times"))
            {
                if (j.contains("t_max") || j.contains("steps"))
                    fail(path, "give either times or t_max/steps, not both");
                const json& times = j["times"];
                if (!times.is_array())
                    fail(join(path, "times"), "expected an array of numbers");
                for (std::size_t i = 0; i < times.size(); ++i)
                    grid.times.push_back(number(times[i], join(path, "times") + "[" + std::to_string(i) + "]"));
                return grid;
            }
            grid.t_max = number_field(j, "t_max", path);
            const std::uint64_t steps = unsigned_field(j, "steps", path);
            if (steps > 10'000'000)
                fail(join(path, "steps"), "too many steps");
            grid.steps = static_cast<int>(steps);
            return grid;
        }

        SimulationSettings parse_simulation(const json& j, const std::string& path)
        {
            expect_object(j, path);
            check_keys(j, path, {"replications", "seed", "marks"});
            SimulationSettings s;
            s.replications = unsigned_field(j, "replications", path);
            s.seed = unsigned_field(j, "seed", path);
            if (j.contains("marks"))
            {
                const std::string marks = string_field(j, "marks", path);
                if (marks == "degenerate")
                    s.marks = MarkLaw::Degenerate;
                else if (marks == "exponential")
                    s.marks = MarkLaw::Exponential;
                else
                    fail(join(path, "marks"), "expected 'degenerate' or 'exponential'");
            }
            return s;
        }

        std::string line_and_column(const std::string& text, std::size_t byte)
        {
            std::size_t line = 1;
            std::size_t col = 1;
            for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    col = 1;
                }
                else
                {
                    ++col;
                }
            }
            return "line " + std::to_string(line) + ", column " + std::to_string(col);
        }
    }

    std::vector<double> GridSpec::points() const
    {
        if (!times.empty())
        {
            return times;
        }
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(steps) + 1);
        for (int k = 0; k <= steps; ++k)
        {
            out.push_back(k == steps ? t_max : t_max * k / steps);
        }
        return out;
    }

    Scenario parse_scenario(const std::string& text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error& e)
        {
            throw Error(ErrorKind::ParseError, line_and_column(text, e.byte) + ": malformed JSON");
        }

        expect_object(doc, "scenario");
        check_keys(doc, "", {"network", "mean_values", "grid", "simulation", "quadrature", "excess_form",
                             "initial_state"});
        Scenario s;
        s.network = parse_network(field(doc, "network", ""), "network");
        s.grid = parse_grid(field(doc, "grid", ""), "grid");
        if (doc.contains("mean_values"))
        {
            const json& mv = doc["mean_values"];
            expect_object(mv, "mean_values");
            check_keys(mv, "mean_values", {"m_a", "m_b"});
            if (mv.contains("m_a"))
                s.m_a = parse_mean_value(mv["m_a"], "mean_values.m_a");
            if (mv.contains("m_b"))
                s.m_b = parse_mean_value(mv["m_b"], "mean_values.m_b");
        }
        if (doc.contains("simulation"))
        {
            s.simulation = parse_simulation(doc["simulation"], "simulation");
        }
        if (doc.contains("quadrature"))
        {
            const json& q = doc["quadrature"];
            expect_object(q, "quadrature");
            check_keys(q, "quadrature", {"abs_tol", "rel_tol"});
            if (q.contains("abs_tol"))
                s.quadrature.abs_tol = number_field(q, "abs_tol", "quadrature");
            if (q.contains("rel_tol"))
                s.quadrature.rel_tol = number_field(q, "rel_tol", "quadrature");
        }
        if (doc.contains("excess_form"))
        {
            const std::string form = string_field(doc, "excess_form", "");
            if (form == "printed")
                s.excess_form = ExcessForm::Printed;
            else if (form == "constant_ratio")
                s.excess_form = ExcessForm::ConstantRatio;
            else
                fail("excess_form", "expected 'printed' or 'constant_ratio'");
        }
        if (doc.contains("initial_state"))
        {
            s.initial_state = string_field(doc, "initial_state", "");
        }
        return s;
    }

    Scenario load_scenario(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
        {
            throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_scenario(buf.str());
    }

    std::vector<std::string> Scenario::violations() const
    {
        std::vector<std::string> out;
        for (auto& v : network.violations())
            out.push_back("network: " + v);
        if (m_a)
            for (auto& v : m_a->violations())
                out.push_back("mean_values.m_a: " + v);
        if (m_b)
            for (auto& v : m_b->violations())
                out.push_back("mean_values.m_b: " + v);
        if (m_a.has_value() != m_b.has_value())
            out.push_back("mean_values: give both m_a and m_b or neither");

        if (grid.times.empty())
        {
            if (!std::isfinite(grid.t_max) || !(grid.t_max > 0.0))
                out.push_back("grid.t_max must be finite and > 0");
            if (grid.steps < 1)
                out.push_back("grid.steps must be >= 1");
        }
        else
        {
            for (std::size_t i = 0; i < grid.times.size(); ++i)
            {
                const double t = grid.times[i];
                if (!std::isfinite(t) || t < 0.0)
                    out.push_back("grid.times[" + std::to_string(i) + "] must be finite and >= 0");
                else if (i > 0 && t < grid.times[i - 1])
                    out.push_back("grid.times must be sorted ascending");
            }
            if (!(grid.times.back() > 0.0))
                out.push_back("grid.times must reach past t = 0");
        }

        if (simulation && simulation->replications < 1)
            out.push_back("simulation.replications must be >= 1");
        if (!(quadrature.abs_tol > 0.0))
            out.push_back("quadrature.abs_tol must be > 0");
        if (!(quadrature.rel_tol >= 0.0))
            out.push_back("quadrature.rel_tol must be >= 0");
        if (initial_state != "empty")
            out.push_back("initial_state: only an initially empty system is supported (warm starts are rejected), got '" +
                          initial_state + "'");
        return out;
    }

    std::vector<std::string> Scenario::notices() const
    {
        std::vector<std::string> out;
        if (network.lambda_a == 0.0)
            out.push_back("arch a carries no traffic (lambda_a = 0)");
        if (network.p == 0.0)
            out.push_back("arch b suppressed (p = 0): no contributor moves on to node B");
        if (network.p == 1.0)
            out.push_back("arch c suppressed (p = 1): every contributor moves on to node B");
        if (network.lambda_b == 0.0)
            out.push_back("arch d suppressed (lambda_b = 0): node B is fed only from node A");
        if (network.violations().empty())
        {
            for (const auto& [name, dist] : {std::pair{"service_a", &network.service_a},
                                             std::pair{"service_b", &network.service_b}})
            {
                const double atom = dist->cdf(0.0);
                if (atom > 0.0)
                    out.push_back(std::string(name) + " has an atom of mass " + format_number(atom) +
                                  " at the origin");
            }
        }
        return out;
    }

    void Scenario::validate() const
    {
        const auto v = violations();
        if (v.empty())
        {
            return;
        }
        std::string msg = std::to_string(v.size()) + " violation(s)";
        for (const auto& line : v)
        {
            msg += "\n  - " + line;
        }
        throw Error(ErrorKind::ValidationError, msg);
    }

    void apply_overrides(Scenario& scenario, const ScenarioOverrides& o)
    {
        if (o.t_max || o.t_steps)
        {
            if (!scenario.grid.times.empty())
            {
                scenario.grid.t_max = scenario.grid.times.back();
                scenario.grid.steps = static_cast<int>(scenario.grid.times.size()) - 1;
                scenario.grid.times.clear();
            }
            if (o.t_max)
                scenario.grid.t_max = *o.t_max;
            if (o.t_steps)
                scenario.grid.steps = *o.t_steps;
        }
        if (o.replications || o.seed)
        {
            if (!scenario.simulation)
                scenario.simulation = SimulationSettings{};
            if (o.replications)
                scenario.simulation->replications = *o.replications;
            if (o.seed)
                scenario.simulation->seed = *o.seed;
        }
        if (o.quad_tol)
        {
            scenario.quadrature.abs_tol = *o.quad_tol;
        }
    }
}
