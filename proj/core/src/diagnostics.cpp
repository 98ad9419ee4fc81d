#include "aggdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace aggdiff {

bool DiagnosticsRecord::finite() const noexcept {
    for (double v : {t, dt, mass, norm_1, norm_2, norm_inf, grad_inf, min_u, support_left,
                     support_right, l2_bound_ratio, va_inf}) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

DiagnosticsRecord observe(const SolverState& state, const SolverConfig& cfg,
                          double initial_norm_2) {
    const Field& u = state.u;
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.dt = state.dt;
    rec.mass = integral(u);
    rec.norm_1 = lp_norm(u, 1.0);
    rec.norm_2 = lp_norm(u, 2.0);
    rec.norm_inf = lp_norm(u, kInfNorm);
    rec.grad_inf = lp_norm(ddx(u), kInfNorm);
    rec.min_u = *std::min_element(u.values().begin(), u.values().end());
    const SupportEdges edges = support_edges(u);
    rec.support_left = edges.left;
    rec.support_right = edges.right;
    if (initial_norm_2 > 0.0) {
        rec.l2_bound_ratio = rec.norm_2 / (initial_norm_2 * std::exp(state.t));
    } else {
        rec.l2_bound_ratio = rec.norm_2 > 0.0 ? HUGE_VAL : 0.0;
    }
    rec.va_inf = lp_norm(conv_dk(u, cfg.kernel), kInfNorm);
    return rec;
}

std::vector<BoundViolation> check_bounds(const DiagnosticsRecord& record,
                                         const DiagnosticsRecord& initial,
                                         bool nonnegative_data) {
    std::vector<BoundViolation> out;
    if (record.l2_bound_ratio > kL2BoundSlack) {
        out.push_back({"l2_gronwall", record.t, record.l2_bound_ratio, kL2BoundSlack});
    }
    const double mass_tol = kMassRelTol * (1.0 + std::abs(initial.mass));
    const double drift = std::abs(record.mass - initial.mass);
    if (drift > mass_tol) {
        out.push_back({"mass_conservation", record.t, drift, mass_tol});
    }
    if (nonnegative_data) {
        const double floor = -kPositivityRelTol * initial.norm_inf;
        if (record.min_u < floor) {
            out.push_back({"positivity", record.t, record.min_u, floor});
        }
    }
    return out;
}

std::optional<double> fit_blowup_time(std::span<const DiagnosticsRecord> records,
                                      std::size_t window) {
    if (window < 2 || records.size() < window) {
        return std::nullopt;
    }
    const auto tail = records.last(window);
    for (std::size_t i = 1; i < tail.size(); ++i) {
        if (!(tail[i].grad_inf > tail[i - 1].grad_inf) || !(tail[i].t > tail[i - 1].t)) {
            return std::nullopt;
        }
    }
    const double n = static_cast<double>(window);
    double st = 0.0, sy = 0.0;
    for (const auto& r : tail) {
        st += r.t;
        sy += 1.0 / r.grad_inf;
    }
    const double mt = st / n, my = sy / n;
    double stt = 0.0, sty = 0.0;
    for (const auto& r : tail) {
        const double dt = r.t - mt;
        stt += dt * dt;
        sty += dt * (1.0 / r.grad_inf - my);
    }
    if (!(stt > 0.0)) {
        return std::nullopt;
    }
    const double slope = sty / stt;
    if (!(slope < 0.0)) {
        return std::nullopt;
    }
    const double intercept = mt - my / slope;
    if (!(intercept > 0.0) || !(intercept > tail.back().t)) {
        return std::nullopt;
    }
    return intercept;
}

} // namespace aggdiff
