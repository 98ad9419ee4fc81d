#include "aggdiff/oracle.hpp"

#include "aggdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace aggdiff {

void OracleConfig::validate() const {
    if (quadrature_points < 3) {
        throw Error("quadrature_points must be >= 3");
    }
    if (reference_n_nodes < kMinNodes) {
        throw Error("reference_n_nodes too small");
    }
    if (!(reference_cfl > 0.0 && reference_cfl <= 0.5)) {
        throw Error("reference_cfl must lie in (0, 0.5]");
    }
}

AnalyticProfile AnalyticProfile::indicator(double a, double b) {
    if (!(b > a)) {
        throw Error("indicator needs a < b");
    }
    AnalyticProfile p;
    p.kind = Kind::indicator;
    p.a = a;
    p.b = b;
    return p;
}

AnalyticProfile AnalyticProfile::exponential() {
    AnalyticProfile p;
    p.kind = Kind::exponential;
    return p;
}

AnalyticProfile AnalyticProfile::gaussian(double sigma) {
    if (!(sigma > 0.0)) {
        throw Error("gaussian needs sigma > 0");
    }
    AnalyticProfile p;
    p.kind = Kind::gaussian;
    p.sigma = sigma;
    return p;
}

AnalyticProfile AnalyticProfile::bump(double L) {
    if (!(L > 0.0)) {
        throw Error("bump needs L > 0");
    }
    AnalyticProfile p;
    p.kind = Kind::bump;
    p.L = L;
    return p;
}

AnalyticProfile AnalyticProfile::named(std::string_view name, double param1, double param2) {
    if (name == "indicator") {
        return indicator(param1, param2);
    }
    if (name == "exponential") {
        return exponential();
    }
    if (name == "gaussian") {
        return gaussian(param1);
    }
    if (name == "bump") {
        return bump(param1);
    }
    throw Error("unknown profile descriptor '" + std::string(name) + "'");
}

double AnalyticProfile::operator()(double x) const {
    switch (kind) {
    case Kind::indicator:
        return (x >= a && x <= b) ? 1.0 : 0.0;
    case Kind::exponential:
        return std::exp(-std::abs(x));
    case Kind::gaussian:
        return std::exp(-0.5 * x * x / (sigma * sigma));
    case Kind::bump: {
        const double s = x / L;
        return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
    }
    }
    throw Error("unknown profile descriptor");
}

namespace {

template <class F>
double simpson_recurse(const F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, std::size_t panels) {
    double total = 0.0;
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + static_cast<double>(i) * width;
        const double hi = i + 1 == panels ? b : lo + width;
        const double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += simpson_recurse(f, lo, hi, flo, fm, fhi, whole,
                                 tol / static_cast<double>(panels), 48);
    }
    return total;
}

} // namespace

double quadrature_conv(const AnalyticProfile& profile, double x, int kernel_derivative_order,
                       const OracleConfig& cfg) {
    cfg.validate();
    if (kernel_derivative_order != 0 && kernel_derivative_order != 1) {
        throw Error("kernel_derivative_order must be 0 or 1");
    }
    constexpr double kTail = 60.0;
    std::vector<double> cuts{x};
    double lo = 0.0, hi = 0.0;
    switch (profile.kind) {
    case AnalyticProfile::Kind::indicator:
        lo = profile.a;
        hi = profile.b;
        break;
    case AnalyticProfile::Kind::bump:
        lo = -profile.L;
        hi = profile.L;
        break;
    case AnalyticProfile::Kind::exponential:
        cuts.push_back(0.0);
        lo = std::min(x, 0.0) - kTail;
        hi = std::max(x, 0.0) + kTail;
        break;
    case AnalyticProfile::Kind::gaussian:
        lo = std::min(x, 0.0) - kTail - 40.0 * profile.sigma;
        hi = std::max(x, 0.0) + kTail + 40.0 * profile.sigma;
        break;
    }
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto integrand = [&](double y) {
        const double d = x - y;
        const double k = std::exp(-std::abs(d));
        const double kern = kernel_derivative_order == 0 ? k : (d > 0 ? -k : (d < 0 ? k : 0.0));
        return kern * profile(y);
    };

    const double tol = 1e-11; // split over segments, below the 1e-10 target
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(cuts[i], lo);
        const double b = std::min(cuts[i + 1], hi);
        if (b <= a) {
            continue;
        }
        // keep endpoint samples strictly inside so the profile's one-sided value is used
        const double shrink = 1e-15 * std::max(1.0, std::abs(b - a));
        total += adaptive_simpson(integrand, a + shrink, b - shrink, tol, cfg.quadrature_points - 1);
    }
    return total;
}

namespace {

// Constant tridiagonal system for s - s_xx = 2u with s'(-A) = s, s'(A) = -s,
// LU-factored once. The first and last rows carry -2/h^2 on their single
// off-diagonal entry (ghost node eliminated through the decay condition).
class HelmholtzSolver {
public:
    HelmholtzSolver(std::size_t n, double h) : n_(n), upper_ratio_(n), inv_pivot_(n), lower_(n) {
        const double ih2 = 1.0 / (h * h);
        const double off = -ih2;
        for (std::size_t j = 0; j < n; ++j) {
            const bool end = j == 0 || j + 1 == n;
            const double diag = end ? 1.0 + 2.0 * ih2 + 2.0 / h : 1.0 + 2.0 * ih2;
            const double lower = j == 0 ? 0.0 : (j + 1 == n ? 2.0 * off : off);
            const double upper = j + 1 == n ? 0.0 : (j == 0 ? 2.0 * off : off);
            const double pivot = diag - (j == 0 ? 0.0 : lower * upper_ratio_[j - 1]);
            inv_pivot_[j] = 1.0 / pivot;
            upper_ratio_[j] = upper / pivot;
            lower_[j] = lower;
        }
    }

    void solve(const std::vector<double>& u, std::vector<double>& s) const {
        s.resize(n_);
        s[0] = 2.0 * u[0] * inv_pivot_[0];
        for (std::size_t j = 1; j < n_; ++j) {
            s[j] = (2.0 * u[j] - lower_[j] * s[j - 1]) * inv_pivot_[j];
        }
        for (std::size_t j = n_ - 1; j-- > 0;) {
            s[j] -= upper_ratio_[j] * s[j + 1];
        }
    }

private:
    std::size_t n_;
    std::vector<double> upper_ratio_, inv_pivot_, lower_;
};

} // namespace

Field reference_solve(const std::function<double(double)>& u0, const SolverConfig& cfg,
                      const OracleConfig& oracle_cfg) {
    cfg.validate();
    oracle_cfg.validate();
    if (oracle_cfg.reference_n_nodes <= cfg.grid.size()) {
        throw Error("reference_n_nodes must exceed the run grid's node count");
    }
    const Grid fine(cfg.grid.half_width(), oracle_cfg.reference_n_nodes);
    const std::size_t n = fine.size();
    const double h = fine.spacing();
    const double half_ih = 0.5 / h, ih2 = 1.0 / (h * h);
    const double r = cfg.r_coeff, eps = cfg.epsilon;

    std::vector<double> u(n), next(n, 0.0), s(n);
    double umax = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        u[j] = u0(fine.x(j));
        umax = std::max(umax, std::abs(u[j]));
    }

    const HelmholtzSolver helmholtz(n, h);
    double t = 0.0;
    while (t < cfg.t_end) {
        helmholtz.solve(u, s);
        // |s_x| <= ||dK||_1 ||u||_inf bounds the advection speed
        double dt = oracle_cfg.reference_cfl *
                    std::min(h * h / (r * umax * umax + eps + 1e-14), h / (2.0 * umax + 1e-14));
        bool last = false;
        if (t + dt >= cfg.t_end) {
            dt = cfg.t_end - t;
            last = true;
        }
        double new_max = 0.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double uj = u[j];
            const double ux = (u[j + 1] - u[j - 1]) * half_ih;
            const double uxx = (u[j + 1] - 2.0 * uj + u[j - 1]) * ih2;
            const double sx = (s[j + 1] - s[j - 1]) * half_ih;
            const double sxx = s[j] - 2.0 * uj;
            const double dudt =
                (r * uj * uj + eps) * uxx + 2.0 * r * uj * ux * ux - ux * sx - uj * sxx;
            const double value = uj + dt * dudt;
            next[j] = value;
            new_max = std::max(new_max, std::abs(value));
        }
        u.swap(next);
        umax = new_max;
        t = last ? cfg.t_end : t + dt;
        if (!std::isfinite(umax)) {
            throw Error("reference diverged; reduce reference_cfl");
        }
    }
    Field fine_u(fine, u);
    if (!fine_u.is_finite()) {
        throw Error("reference diverged; reduce reference_cfl");
    }
    Field out(cfg.grid);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = interpolate(fine_u, cfg.grid.x(j));
    }
    return out;
}

Field reference_solve(const Field& u0, const SolverConfig& cfg, const OracleConfig& oracle_cfg) {
    return reference_solve([&u0](double x) { return interpolate(u0, x); }, cfg, oracle_cfg);
}

} // namespace aggdiff
