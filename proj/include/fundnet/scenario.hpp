#pragma once

#include "fundnet/equilibrium.hpp"
#include "fundnet/simulator.hpp"
#include "fundnet/transient.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fundnet
{
    /// Either an evenly spaced grid 0, t_max/steps, ..., t_max or an explicit
    /// list of times.
    struct GridSpec
    {
        double t_max = 1.0;
        int steps = 1;
        std::vector<double> times;

        std::vector<double> points() const;
    };

    struct SimulationSettings
    {
        std::uint64_t replications = 1;
        std::uint64_t seed = 0;
        MarkLaw marks = MarkLaw::Degenerate;
    };

    /// One run description as loaded from a scenario file.
    struct Scenario
    {
        NetworkConfig network;
        std::optional<MeanValueFunction> m_a;
        std::optional<MeanValueFunction> m_b;
        GridSpec grid;
        std::optional<SimulationSettings> simulation;
        method::Quadrature quadrature;
        ExcessForm excess_form = ExcessForm::Printed;
        /// Only "empty" is supported; all transient results assume an empty
        /// system at t = 0.
        std::string initial_state = "empty";

        /// Every violated constraint, each prefixed with its field path.
        std::vector<std::string> violations() const;
        /// Informational remarks (suppressed arches, origin atoms).
        std::vector<std::string> notices() const;
        /// Throws Error(ValidationError) listing all violations.
        void validate() const;

        /// Auto dispatch with the scenario's quadrature tolerances.
        OccupancyMethod occupancy_method() const { return method::Auto{quadrature}; }
    };

    /// Command-line overrides applied on top of a loaded scenario.
    struct ScenarioOverrides
    {
        std::optional<double> t_max;
        std::optional<int> t_steps;
        std::optional<std::uint64_t> replications;
        std::optional<std::uint64_t> seed;
        std::optional<double> quad_tol;
    };

    /// Parses a JSON scenario document. Syntax errors report line and column;
    /// missing or mistyped fields report their path. Does not validate ranges.
    Scenario parse_scenario(const std::string& text);
    Scenario load_scenario(const std::filesystem::path& path);

    void apply_overrides(Scenario& scenario, const ScenarioOverrides& overrides);
}
