#include "aggdiff/characteristics.hpp"

#include "aggdiff/error.hpp"

#include <cmath>

namespace aggdiff {

CharacteristicSet CharacteristicSet::seed_uniform(double left, double right, std::size_t count) {
    if (count < 2 || !(right > left)) {
        throw Error("seed_uniform needs count >= 2 and right > left");
    }
    CharacteristicSet set;
    set.labels.resize(count);
    const double step = (right - left) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        set.labels[i] = i + 1 == count ? right : left + static_cast<double>(i) * step;
    }
    set.positions = set.labels;
    return set;
}

bool CharacteristicSet::strictly_ordered() const noexcept {
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (!(positions[i] > positions[i - 1])) {
            return false;
        }
    }
    return true;
}

namespace {

double velocity_at(const Field& v, double x) {
    if (!v.grid().contains(x)) {
        throw Error("characteristic escaped truncated domain");
    }
    return interpolate(v, x);
}

} // namespace

CharacteristicSet advect_with_velocity(const CharacteristicSet& chars, const Field& v_start,
                                       const Field& v_end, double dt) {
    if (!(dt > 0.0)) {
        throw Error("advect needs dt > 0");
    }
    CharacteristicSet out = chars;
    for (std::size_t i = 0; i < chars.positions.size(); ++i) {
        const double x = chars.positions[i];
        const double mid = x + 0.5 * dt * velocity_at(v_start, x);
        const double v_mid = 0.5 * (velocity_at(v_start, mid) + velocity_at(v_end, mid));
        const double next = x + dt * v_mid;
        if (!v_start.grid().contains(next)) {
            throw Error("characteristic escaped truncated domain");
        }
        out.positions[i] = next;
    }
    out.t = chars.t + dt;
    return out;
}

CharacteristicSet advect(const CharacteristicSet& chars, const Field& u_start, const Field& u_end,
                         double dt, const KernelSpec& spec) {
    return advect_with_velocity(chars, conv_dk(u_start, spec), conv_dk(u_end, spec), dt);
}

BoundarySpeed boundary_speed_check(const Field& u, double x_left, double support_half_width,
                                   const KernelSpec& spec) {
    const double sup = lp_norm(u, kInfNorm);
    for (double v : u.values()) {
        if (v < -1e-10 * sup) {
            throw Error("boundary_speed_check needs numerically nonnegative data");
        }
    }
    const double mass = integral(u);
    if (mass < 0.0) {
        throw Error("negative mass");
    }
    BoundarySpeed out;
    out.observed_speed = interpolate(conv_dk(u, spec), x_left);
    out.lower_bound = std::exp(-2.0 * support_half_width) * mass;
    return out;
}

double blowup_bound(double support_half_width, double mass) {
    if (!(support_half_width > 0.0) || !(mass > 0.0)) {
        throw Error("blowup_bound needs L > 0 and mass > 0");
    }
    return 2.0 * support_half_width * std::exp(2.0 * support_half_width) / mass;
}

SupportEdges support_edges(const Field& u, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw Error("support rel_tol must lie in (0, 1)");
    }
    const double threshold = rel_tol * lp_norm(u, kInfNorm);
    SupportEdges edges;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (std::abs(u[j]) > threshold) {
            if (edges.empty) {
                edges.left = u.grid().x(j);
                edges.empty = false;
            }
            edges.right = u.grid().x(j);
        }
    }
    return edges;
}

BlowupReport BlowupReport::from_bound(double support_half_width, double initial_mass) {
    BlowupReport report;
    report.support_half_width = support_half_width;
    report.initial_mass = initial_mass;
    report.boundary_speed_lower_bound = std::exp(-2.0 * support_half_width) * initial_mass;
    report.blowup_time_upper_bound = 2.0 * support_half_width / report.boundary_speed_lower_bound;
    return report;
}

} // namespace aggdiff
