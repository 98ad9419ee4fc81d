#pragma once

#include "aggdiff/characteristics.hpp"
#include "aggdiff/config.hpp"
#include "aggdiff/diagnostics.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aggdiff {

/// Library version, e.g. "0.1.0".
std::string_view version() noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitBoundViolation = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitIoFailure = 4;

struct SingleResult {
    RunReport report;
    Field final_field;
    std::vector<std::pair<double, Field>> snapshots;
};

SingleResult run_single(const RunConfigFile& cfg);

struct SweepResult {
    std::vector<double> epsilons;
    std::vector<RunReport> reports;
    std::vector<Field> finals;
    std::vector<double> distances; ///< ||u^{eps_i} - u^{eps_{i+1}}||_2
    std::vector<double> ratios;    ///< distances[i+1] / distances[i]
    double ratio_low = 0.3;
    double ratio_high = 0.8;

    bool ratios_in_range() const;
};

SweepResult run_eps_sweep(const RunConfigFile& cfg);

struct CharacteristicFrame {
    double t = 0.0;
    std::vector<double> positions;
};

struct CharacteristicsCheck {
    std::vector<CharacteristicFrame> frames; ///< positions at every diagnostics record
    bool ordered = true;
    bool edges_monotone = true;
    bool confined = true;
    double max_left_retreat = 0.0;  ///< largest per-step decrease of the leftmost particle
    double max_right_advance = 0.0; ///< largest per-step increase of the rightmost particle
    double max_excursion = 0.0;     ///< largest distance outside [-L, L]
    BoundarySpeed initial_speed;
    double speed_slack = 0.95;
    std::vector<std::string> failures;

    bool passed() const;
};

inline constexpr double kEdgeStepSlack = 1e-12;
inline constexpr double kNormGrowthGuard = 10.0;

struct BlowupResult {
    RunReport report;
    Field final_field;
    std::vector<std::pair<double, Field>> snapshots;
    CharacteristicsCheck characteristics;
    double initial_sup_norm = 0.0;
    bool blowup_observed = false;
    bool within_bound = false; ///< observed time < derived upper bound
    bool norms_bounded = false;
};

BlowupResult run_blowup(const RunConfigFile& cfg);

struct ConvergenceLevel {
    std::size_t n_nodes = 0;
    double spacing = 0.0;
    double error_l2 = 0.0;
    double relative_error = 0.0; ///< error_l2 / ||u0||_2
    std::optional<double> ratio; ///< relative to the next coarser level
};

struct ConvergenceResult {
    std::vector<ConvergenceLevel> levels;
    std::size_t reference_n_nodes = 0;
};

/// Main solver on n, 2n-1, 4n-3, ... nodes against one reference solve on the
/// finest grid (the coarser grids are nested in it).
ConvergenceResult run_convergence(const RunConfigFile& cfg);

struct ConvcheckSize {
    std::size_t n_nodes = 0;
    std::size_t fields = 0;
    double max_rel_err_k = 0.0;
    double max_rel_err_dk = 0.0;
};

struct QuadratureCheck {
    std::string label;
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;

    bool passed() const;
};

struct ConvcheckResult {
    std::vector<ConvcheckSize> sizes;
    std::vector<QuadratureCheck> quadrature;
    double sweep_tolerance = 1e-12;

    bool passed() const;
};

/// Seeded random fields on 65, 257 and 1025 nodes: sweeps against direct sums,
/// plus a closed-form convolution checked by quadrature and on a 401-node grid.
ConvcheckResult run_convcheck(const RunConfigFile& cfg);

/// Max over nodes of |a - b| divided by max |b| (absolute when b vanishes).
double max_relative_error(const Field& a, const Field& b);

struct ExperimentOptions {
    bool write_outputs = true;
    std::ostream* log = nullptr;
};

/// Runs the configured experiment, writes its outputs under cfg.output_dir and
/// returns the process exit status (kExitOk, kExitBoundViolation,
/// kExitNumericalFailure or kExitIoFailure).
int run_experiment(const RunConfigFile& cfg, const ExperimentOptions& options = {});

} // namespace aggdiff
