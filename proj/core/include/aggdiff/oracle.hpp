#pragma once

#include "aggdiff/grid.hpp"
#include "aggdiff/solver_config.hpp"

#include <cstddef>
#include <functional>
#include <string_view>

namespace aggdiff {

struct OracleConfig {
    std::size_t quadrature_points = 17; ///< initial Simpson panels + 1 per integration segment
    std::size_t reference_n_nodes = 4097;
    double reference_cfl = 0.1;

    void validate() const;
};

/// Closed-form profiles with known convolution integrals.
struct AnalyticProfile {
    enum class Kind { indicator, exponential, gaussian, bump };

    Kind kind = Kind::indicator;
    double a = -1.0;    ///< indicator left end
    double b = 1.0;     ///< indicator right end
    double sigma = 1.0; ///< gaussian width
    double L = 1.0;     ///< bump half-width

    static AnalyticProfile indicator(double a, double b);
    static AnalyticProfile exponential();
    static AnalyticProfile gaussian(double sigma);
    static AnalyticProfile bump(double L);

    /// Looks up a profile by name ("indicator", "exponential", "gaussian", "bump");
    /// unknown names raise aggdiff::Error.
    static AnalyticProfile named(std::string_view name, double param1 = 0.0, double param2 = 0.0);

    double operator()(double x) const;
};

/// Adaptive Simpson evaluation of (K*u)(x) (order 0) or (dK*u)(x) (order 1)
/// to an absolute tolerance of 1e-10.
double quadrature_conv(const AnalyticProfile& profile, double x, int kernel_derivative_order,
                       const OracleConfig& cfg = {});

/// Forward-Euler, central-difference solve of the nonconservative form
///     du/dt = (r u^2 + eps) u_xx + 2 r u u_x^2 - u_x s_x - u (s - 2u)
/// on a fine grid, where s = K*u is obtained from s - s_xx = 2u with the exact
/// decay conditions s' = +-s at x = -+A. The result is interpolated back onto
/// cfg.grid at t = cfg.t_end.
Field reference_solve(const std::function<double(double)>& u0, const SolverConfig& cfg,
                      const OracleConfig& oracle_cfg = {});

/// Same, starting from a field on the run grid (linearly interpolated onto the fine grid).
Field reference_solve(const Field& u0, const SolverConfig& cfg, const OracleConfig& oracle_cfg = {});

} // namespace aggdiff
