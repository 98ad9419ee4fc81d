#pragma once

#include "aggdiff/grid.hpp"
#include "aggdiff/kernel.hpp"

#include <cstddef>
#include <string_view>

namespace aggdiff {

inline constexpr std::size_t kMinNodes = 8;

struct SolverConfig {
    Grid grid;
    KernelSpec kernel;
    double epsilon = 0.0;             ///< regularising viscosity, >= 0
    double r_coeff = 1.0;             ///< strength of the u^2 diffusion, > 0
    double cfl = 0.4;                 ///< in (0, 1]
    double t_end = 1.0;
    double dt_min = 1e-12;
    double grad_blowup_factor = 1e4;
    std::size_t output_stride = 100;

    explicit SolverConfig(Grid g) : grid(g), kernel(KernelSpec::exponential(g)) {}

    /// Throws aggdiff::Error naming the first violated constraint.
    void validate() const;
};

enum class RunStatus { running, completed, blowup_detected, dt_underflow };

std::string_view to_string(RunStatus status) noexcept;

struct SolverState {
    double t = 0.0;
    double dt = 0.0; ///< last accepted step
    Field u;
    std::size_t step_index = 0;
    RunStatus status = RunStatus::running;

    explicit SolverState(Field initial) : u(std::move(initial)) {}
};

} // namespace aggdiff
