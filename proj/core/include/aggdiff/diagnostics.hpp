#pragma once

#include "aggdiff/characteristics.hpp"
#include "aggdiff/solver_config.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aggdiff {

struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double norm_1 = 0.0;
    double norm_2 = 0.0;
    double norm_inf = 0.0;
    double grad_inf = 0.0;
    double min_u = 0.0;
    double support_left = 0.0;
    double support_right = 0.0;
    double l2_bound_ratio = 0.0; ///< norm_2 / (norm_2(0) e^t)
    double va_inf = 0.0;         ///< ||dK*u||_inf

    bool finite() const noexcept;
};

/// Snapshot of every monitored quantity. `initial_norm_2` is ||u0||_2.
DiagnosticsRecord observe(const SolverState& state, const SolverConfig& cfg,
                          double initial_norm_2);

struct BoundViolation {
    std::string bound; ///< "l2_gronwall", "mass_conservation" or "positivity"
    double t = 0.0;
    double measured = 0.0;
    double allowed = 0.0;
};

inline constexpr double kL2BoundSlack = 1.05;
inline constexpr double kMassRelTol = 1e-10;
inline constexpr double kPositivityRelTol = 1e-10;

/// Compares a record against the theorem-backed bounds; the positivity bound
/// applies only when `nonnegative_data` is set.
std::vector<BoundViolation> check_bounds(const DiagnosticsRecord& record,
                                         const DiagnosticsRecord& initial,
                                         bool nonnegative_data = true);

/// Extrapolated blowup time: least-squares line through (t, 1/grad_inf) over the
/// last `window` records, returned when its t-intercept lies beyond the last record.
/// Advisory only.
std::optional<double> fit_blowup_time(std::span<const DiagnosticsRecord> records,
                                      std::size_t window);

/// Largest c with ||u(t)||_p = ||u0||_p exp(c p t) over the records (p >= 1).
struct GrowthFit {
    double p = 2.0;
    double constant = 0.0;
};

struct RunReport {
    std::vector<DiagnosticsRecord> records;
    RunStatus status = RunStatus::running;
    std::optional<BlowupReport> blowup;
    SolverConfig config_echo;
    std::vector<BoundViolation> bound_violations;
    std::vector<GrowthFit> growth_fits;
    std::optional<double> first_threshold_time; ///< first time grad_inf crossed the blowup threshold
    std::optional<double> fitted_blowup_time;
    bool unreliable = false; ///< support reached the outer 5% of the domain
    std::vector<std::string> notes;

    explicit RunReport(SolverConfig cfg) : config_echo(std::move(cfg)) {}
};

} // namespace aggdiff
