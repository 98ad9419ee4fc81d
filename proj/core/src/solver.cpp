#include "aggdiff/solver.hpp"

#include "aggdiff/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace aggdiff {

namespace {

constexpr double kDtGuard = 1e-14;
constexpr double kOuterBand = 0.05;
constexpr double kSupportRelTol = 1e-13;

} // namespace

std::string_view to_string(RunStatus status) noexcept {
    switch (status) {
    case RunStatus::running: return "running";
    case RunStatus::completed: return "completed";
    case RunStatus::blowup_detected: return "blowup_detected";
    case RunStatus::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (grid.size() < kMinNodes) {
        throw Error("n_nodes must be >= 8");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw Error("epsilon must be >= 0");
    }
    if (!(r_coeff > 0.0) || !std::isfinite(r_coeff)) {
        throw Error("r_coeff must be > 0");
    }
    if (!(cfl > 0.0 && cfl <= 1.0)) {
        throw Error("cfl must lie in (0, 1]");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw Error("t_end must be > 0");
    }
    if (!(dt_min > 0.0)) {
        throw Error("dt_min must be > 0");
    }
    if (!(grad_blowup_factor > 0.0)) {
        throw Error("grad_blowup_factor must be > 0");
    }
    if (output_stride == 0) {
        throw Error("output_stride must be >= 1");
    }
    const KernelSpec expected = KernelSpec::exponential(grid);
    if (kernel.kind != KernelKind::exponential ||
        std::abs(kernel.decay_per_cell - expected.decay_per_cell) > 1e-14) {
        throw Error("kernel spec does not match grid");
    }
}

namespace {

// van Leer limited slope; zero at extrema so the face value stays between neighbours.
double limited_slope(double backward, double forward) {
    const double prod = backward * forward;
    return prod > 0.0 ? 2.0 * prod / (backward + forward) : 0.0;
}

void rhs_with_velocity(const Field& u, const Field& va, const SolverConfig& cfg, Field& out) {
    const std::size_t n = u.size();
    const double h = cfg.grid.spacing();
    const double inv_h = 1.0 / h;

    // face f sits between nodes f and f+1
    double flux_left = 0.0;
    for (std::size_t f = 0; f + 1 < n; ++f) {
        const double ul = u[f];
        const double ur = u[f + 1];
        const double mean = 0.5 * (ul + ur);
        const double diffusive = (cfg.r_coeff * mean * mean + cfg.epsilon) * (ur - ul) * inv_h;
        const double v_face = 0.5 * (va[f] + va[f + 1]);
        double upwind = 0.0;
        if (v_face >= 0.0) {
            upwind = f == 0 ? ul : ul + 0.5 * limited_slope(ul - u[f - 1], ur - ul);
        } else {
            upwind = f + 2 >= n ? ur : ur - 0.5 * limited_slope(ur - ul, u[f + 2] - ur);
        }
        const double advective = v_face * upwind;
        const double flux = diffusive - advective;
        out[f] = (flux - flux_left) * (f == 0 ? 2.0 * inv_h : inv_h);
        flux_left = flux;
    }
    out[n - 1] = -flux_left * 2.0 * inv_h;
}

Field rhs_checked(const Field& u, const SolverConfig& cfg) {
    if (!u.is_finite()) {
        throw Error("non-finite field");
    }
    Field out(u.grid());
    rhs_with_velocity(u, conv_dk(u, cfg.kernel), cfg, out);
    return out;
}

// u + c * du, elementwise
Field axpy(const Field& u, double c, const Field& du) {
    Field out(u.grid());
    for (std::size_t j = 0; j < u.size(); ++j) {
        out[j] = u[j] + c * du[j];
    }
    return out;
}

} // namespace

Field rhs(const Field& u, const SolverConfig& cfg) { return rhs_checked(u, cfg); }

double stable_dt(const Field& u, const SolverConfig& cfg) {
    const double h = cfg.grid.spacing();
    const double umax = lp_norm(u, kInfNorm);
    const double vmax = lp_norm(conv_dk(u, cfg.kernel), kInfNorm);
    const double diffusion = cfg.r_coeff * umax * umax + cfg.epsilon;
    return cfg.cfl * std::min(h * h / (2.0 * diffusion + kDtGuard), h / (vmax + kDtGuard));
}

SolverState step_until(const SolverState& state, const SolverConfig& cfg, double t_limit) {
    if (state.status != RunStatus::running) {
        throw Error("step called on a stopped run");
    }
    SolverState next = state;
    if (!state.u.is_finite()) {
        next.status = RunStatus::dt_underflow;
        return next;
    }
    const double dt_cfl = stable_dt(state.u, cfg);
    if (dt_cfl < cfg.dt_min) {
        next.dt = dt_cfl;
        next.status = RunStatus::dt_underflow;
        return next;
    }

    double dt = dt_cfl;
    bool lands = false;
    const double remaining = t_limit - state.t;
    if (remaining <= dt) {
        dt = remaining;
        lands = true;
    } else if (remaining < 2.0 * dt) {
        dt = 0.5 * remaining;
    }

    const Field& u0 = state.u;
    const Field u1 = axpy(u0, dt, rhs_checked(u0, cfg));
    const Field l1 = rhs_checked(u1, cfg);
    Field u2(u0.grid());
    for (std::size_t j = 0; j < u0.size(); ++j) {
        u2[j] = 0.75 * u0[j] + 0.25 * (u1[j] + dt * l1[j]);
    }
    const Field l2 = rhs_checked(u2, cfg);
    Field u3(u0.grid());
    for (std::size_t j = 0; j < u0.size(); ++j) {
        u3[j] = (1.0 / 3.0) * u0[j] + (2.0 / 3.0) * (u2[j] + dt * l2[j]);
    }

    next.u = std::move(u3);
    next.t = lands ? t_limit : state.t + dt;
    next.dt = dt;
    next.step_index = state.step_index + 1;
    return next;
}

SolverState step(const SolverState& state, const SolverConfig& cfg) {
    return step_until(state, cfg, cfg.t_end);
}

RunStatus detect_stop(const SolverState& state, const SolverConfig& cfg, double grad0) {
    if (state.status != RunStatus::running) {
        return state.status;
    }
    if (!state.u.is_finite()) {
        return RunStatus::dt_underflow;
    }
    if (lp_norm(ddx(state.u), kInfNorm) > cfg.grad_blowup_factor * grad0) {
        return RunStatus::blowup_detected;
    }
    if (state.t >= cfg.t_end) {
        return RunStatus::completed;
    }
    if (state.step_index > 0 && state.dt < cfg.dt_min) {
        return RunStatus::dt_underflow;
    }
    return RunStatus::running;
}

namespace {

class GrowthTracker {
public:
    explicit GrowthTracker(const Field& u0) {
        for (double p : kOrders) {
            initial_.push_back(lp_norm(u0, p));
            best_.push_back(-std::numeric_limits<double>::infinity());
        }
    }

    void add(const Field& u, double t) {
        if (!(t > 0.0)) {
            return;
        }
        for (std::size_t i = 0; i < kOrders.size(); ++i) {
            if (!(initial_[i] > 0.0)) {
                continue;
            }
            const double p = kOrders[i];
            const double scale = std::isinf(p) ? t : p * t;
            best_[i] = std::max(best_[i], std::log(lp_norm(u, p) / initial_[i]) / scale);
        }
    }

    std::vector<GrowthFit> fits() const {
        std::vector<GrowthFit> out;
        for (std::size_t i = 0; i < kOrders.size(); ++i) {
            if (std::isfinite(best_[i])) {
                out.push_back({kOrders[i], best_[i]});
            }
        }
        return out;
    }

private:
    static constexpr std::array<double, 3> kOrders{2.0, 4.0, kInfNorm};
    std::vector<double> initial_;
    std::vector<double> best_;
};

bool touches_outer_band(const Field& u, double threshold) {
    const std::size_t n = u.size();
    const auto band = static_cast<std::size_t>(std::ceil(kOuterBand * static_cast<double>(n)));
    for (std::size_t j = 0; j < band && j < n; ++j) {
        if (std::abs(u[j]) > threshold || std::abs(u[n - 1 - j]) > threshold) {
            return true;
        }
    }
    return false;
}

} // namespace

RunReport run(const Field& u0, const SolverConfig& cfg, const RunHooks& hooks) {
    cfg.validate();
    if (!(u0.grid() == cfg.grid)) {
        throw Error("initial field is not on the configured grid");
    }
    if (!u0.is_finite()) {
        throw Error("non-finite field");
    }

    RunReport report(cfg);
    SolverState state(u0);
    const double grad0 = lp_norm(ddx(u0), kInfNorm) + 1.0;
    const double norm2_0 = lp_norm(u0, 2.0);
    const bool nonnegative = *std::min_element(u0.values().begin(), u0.values().end()) >= 0.0;
    const double support_threshold = kSupportRelTol * lp_norm(u0, kInfNorm);
    GrowthTracker growth(u0);

    auto emit = [&](const SolverState& s) {
        DiagnosticsRecord rec = observe(s, cfg, norm2_0);
        if (!report.records.empty()) {
            auto violations = check_bounds(rec, report.records.front(), nonnegative);
            report.bound_violations.insert(report.bound_violations.end(), violations.begin(),
                                           violations.end());
        }
        growth.add(s.u, s.t);
        report.records.push_back(rec);
        if (hooks.on_record) {
            hooks.on_record(rec);
        }
    };

    emit(state);
    if (touches_outer_band(u0, support_threshold)) {
        report.unreliable = true;
        report.notes.emplace_back("initial support reaches the outer 5% of the domain");
    }

    std::size_t next_landing = 0;
    const auto& landings = hooks.landing_times;
    while (next_landing < landings.size() && landings[next_landing] <= 0.0) {
        if (hooks.on_landing) {
            hooks.on_landing(0.0, state.u);
        }
        ++next_landing;
    }

    while (state.status == RunStatus::running) {
        double t_limit = cfg.t_end;
        if (next_landing < landings.size()) {
            t_limit = std::min(t_limit, landings[next_landing]);
        }

        SolverState next = state;
        bool failed = false;
        try {
            next = step_until(state, cfg, t_limit);
        } catch (const Error& e) {
            next.status = RunStatus::dt_underflow;
            failed = true;
            report.notes.emplace_back(std::string("numerical failure: ") + e.what());
        }
        if (next.status == RunStatus::running && hooks.on_step) {
            hooks.on_step(state.u, next.u, next.t, next.dt);
        }
        next.status = detect_stop(next, cfg, grad0);

        if (next.status == RunStatus::dt_underflow && !next.u.is_finite()) {
            report.notes.emplace_back("non-finite field; last finite state kept");
            state.status = RunStatus::dt_underflow;
            break;
        }
        if (next.status == RunStatus::dt_underflow && next.step_index == state.step_index) {
            // no step was taken; report the rejected step size
            state.dt = next.dt;
            state.status = next.status;
            if (!failed) {
                report.notes.emplace_back("step size fell below dt_min");
            }
            emit(state);
            break;
        }

        state = std::move(next);
        if (!report.unreliable && touches_outer_band(state.u, support_threshold)) {
            report.unreliable = true;
            report.notes.emplace_back("support reached the outer 5% of the domain at t = " +
                                      std::to_string(state.t));
        }
        bool landed = false;
        while (next_landing < landings.size() && state.t >= landings[next_landing]) {
            if (hooks.on_landing) {
                hooks.on_landing(state.t, state.u);
            }
            ++next_landing;
            landed = true;
        }
        if (state.status == RunStatus::blowup_detected) {
            report.first_threshold_time = state.t;
            report.notes.emplace_back(
                "blowup time is the first crossing of the gradient threshold, not a limit");
        }
        if (state.status != RunStatus::running || landed ||
            state.step_index % cfg.output_stride == 0) {
            emit(state);
        }
    }

    report.status = state.status;
    report.growth_fits = growth.fits();
    if (state.status == RunStatus::blowup_detected) {
        report.fitted_blowup_time = fit_blowup_time(report.records, 5);
    }
    return report;
}

double mild_residual(const Field& u_before, const Field& u_after, double dt,
                     const SolverConfig& cfg) {
    if (!(dt > 0.0)) {
        throw Error("mild_residual needs dt > 0");
    }
    Field mid = 0.5 * (u_before + u_after);
    const Field l = rhs(mid, cfg);
    Field res(u_before.grid());
    for (std::size_t j = 0; j < res.size(); ++j) {
        res[j] = (u_after[j] - u_before[j]) / dt - l[j];
    }
    return lp_norm(res, 2.0);
}

} // namespace aggdiff
