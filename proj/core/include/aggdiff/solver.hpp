#pragma once

#include "aggdiff/diagnostics.hpp"
#include "aggdiff/solver_config.hpp"

#include <functional>
#include <vector>

namespace aggdiff {

/// Time derivative of the regularised equation in conservative form,
///     du/dt = dF/dx,   F = (r u^2 + eps) du/dx - u (dK*u),
/// on node-centred control volumes (half cells at the two ends) with zero
/// flux through x = -A and x = +A. The diffusive flux uses the mean of u on
/// each face and a two-point gradient; the advective flux is upwinded on the
/// sign of the face velocity.
Field rhs(const Field& u, const SolverConfig& cfg);

/// Explicit step size from the current diffusion coefficient and attractive speed.
double stable_dt(const Field& u, const SolverConfig& cfg);

/// One SSP-RK3 step; never steps past t_end.
SolverState step(const SolverState& state, const SolverConfig& cfg);

/// One SSP-RK3 step that lands exactly on `t_limit` rather than overshooting it.
/// When t_limit is less than two regular steps away the remaining interval is
/// split in half so no sliver step is produced.
SolverState step_until(const SolverState& state, const SolverConfig& cfg, double t_limit);

/// Stop condition; `grad0` is ||du0/dx||_inf + 1.
RunStatus detect_stop(const SolverState& state, const SolverConfig& cfg, double grad0);

struct RunHooks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    /// Called after every accepted step.
    std::function<void(const Field& before, const Field& after, double t_after, double dt)> on_step;
    /// Times the integrator must hit exactly (sorted ascending); `on_landing` fires at each.
    std::vector<double> landing_times;
    std::function<void(double t, const Field& u)> on_landing;
};

/// Integrates from u0 until the status leaves `running`.
RunReport run(const Field& u0, const SolverConfig& cfg, const RunHooks& hooks = {});

/// || (u_after - u_before)/dt - rhs((u_before + u_after)/2) ||_2
double mild_residual(const Field& u_before, const Field& u_after, double dt,
                     const SolverConfig& cfg);

} // namespace aggdiff
