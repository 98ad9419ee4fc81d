#pragma once

#include "aggdiff/grid.hpp"
#include "aggdiff/kernel.hpp"

#include <optional>
#include <vector>

namespace aggdiff {

/// Particles X(t, alpha) moving with the attractive velocity dK*u.
struct CharacteristicSet {
    std::vector<double> labels;    ///< alpha, strictly increasing
    std::vector<double> positions; ///< X(t, alpha) per label
    double t = 0.0;

    /// `count` labels evenly spaced on [left, right] (inclusive).
    static CharacteristicSet seed_uniform(double left, double right, std::size_t count);

    bool strictly_ordered() const noexcept;
};

/// One midpoint step of dX/dt = (dK*u)(X) across a solver step from u_start to u_end.
///
/// The predictor uses the start velocity; the corrector evaluates the mean of the
/// start and end velocities at the predicted midpoint. Throws
/// "characteristic escaped truncated domain" if a particle leaves [-A, A].
CharacteristicSet advect(const CharacteristicSet& chars, const Field& u_start, const Field& u_end,
                         double dt, const KernelSpec& spec);

/// Same step with the velocity fields already evaluated.
CharacteristicSet advect_with_velocity(const CharacteristicSet& chars, const Field& v_start,
                                       const Field& v_end, double dt);

struct BoundarySpeed {
    double observed_speed = 0.0; ///< (dK*u)(x_left)
    double lower_bound = 0.0;    ///< exp(-2L) * mass
};

/// Observed attractive speed at the left edge against exp(-2L) * mass.
BoundarySpeed boundary_speed_check(const Field& u, double x_left, double support_half_width,
                                   const KernelSpec& spec);

/// Derived upper bound 2L exp(2L) / mass on the gradient blowup time.
double blowup_bound(double support_half_width, double mass);

struct SupportEdges {
    double left = 0.0;
    double right = 0.0;
    bool empty = true;
};

/// Outermost nodes with |u_j| > rel_tol * ||u||_inf.
SupportEdges support_edges(const Field& u, double rel_tol = 1e-10);

struct BlowupReport {
    double support_half_width = 0.0;
    double initial_mass = 0.0;
    double boundary_speed_lower_bound = 0.0;
    double blowup_time_upper_bound = 0.0; ///< derived bound
    std::optional<double> observed_blowup_time;
    double observed_final_grad_inf = 0.0;
    double observed_sup_norm_max = 0.0;

    static BlowupReport from_bound(double support_half_width, double initial_mass);
};

} // namespace aggdiff
