#pragma once

#include "aggdiff/initial_condition.hpp"
#include "aggdiff/oracle.hpp"
#include "aggdiff/solver_config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aggdiff {

enum class Experiment { single, eps_sweep, blowup, convergence, convcheck };

std::string_view to_string(Experiment e) noexcept;

/// Everything a run needs, as read from a "key = value" document.
struct RunConfigFile {
    // grid and solver
    std::size_t n_nodes = 0;
    double half_width = 0.0;
    double epsilon = 0.0;
    double r_coeff = 1.0;
    double cfl = 0.4;
    double t_end = 0.0;
    double dt_min = 1e-12;
    double grad_blowup_factor = 1e4;
    std::size_t output_stride = 100;

    Experiment experiment = Experiment::single;
    InitialCondition ic;
    std::string output_dir = "out";
    std::vector<double> snapshot_times;
    std::uint64_t seed = 0;

    // experiment knobs
    std::vector<double> sweep_epsilons{1e-2, 5e-3, 2.5e-3};
    std::size_t tracked_particles = 64;
    OracleConfig oracle;
    std::size_t convergence_levels = 3;
    std::size_t convcheck_fields = 100;

    SolverConfig solver_config() const;

    /// Derived blowup-time upper bound 2L e^{2L}/mass for compactly supported
    /// nonnegative presets with positive mass; empty otherwise.
    std::optional<double> derived_blowup_bound() const;

    /// Canonical document; parse_config(echo()) reproduces this config.
    std::string echo() const;
};

/// Parses and validates a configuration document. Unknown keys, missing
/// required keys (n_nodes, half_width, t_end), malformed values and
/// inconsistent settings raise aggdiff::ParseError with the line number.
RunConfigFile parse_config(std::string_view text);

RunConfigFile load_config(const std::filesystem::path& path);

} // namespace aggdiff
