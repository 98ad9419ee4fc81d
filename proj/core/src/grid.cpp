#include "aggdiff/grid.hpp"

#include "aggdiff/error.hpp"

#include <algorithm>
#include <cmath>

namespace aggdiff {

Grid::Grid(double half_width, std::size_t n_nodes)
    : half_width_(half_width), n_nodes_(n_nodes), spacing_(0.0) {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw Error("grid half_width must be positive and finite");
    }
    if (n_nodes < 2) {
        throw Error("grid needs at least 2 nodes");
    }
    spacing_ = 2.0 * half_width / static_cast<double>(n_nodes - 1);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(n_nodes_);
    for (std::size_t j = 0; j < n_nodes_; ++j) {
        xs[j] = x(j);
    }
    return xs;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error("field length does not match grid");
    }
}

Field Field::sample(const Grid& grid, const std::function<double(double)>& f) {
    Field out(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out.values_[j] = f(grid.x(j));
    }
    return out;
}

bool Field::is_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
    if (other.size() != size()) {
        throw Error("field size mismatch");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        values_[j] += other.values_[j];
    }
    return *this;
}

Field& Field::operator-=(const Field& other) {
    if (other.size() != size()) {
        throw Error("field size mismatch");
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        values_[j] -= other.values_[j];
    }
    return *this;
}

Field& Field::operator*=(double c) {
    for (double& v : values_) {
        v *= c;
    }
    return *this;
}

namespace {

void require_finite(const Field& f) {
    if (!f.is_finite()) {
        throw Error("non-finite field");
    }
}

} // namespace

double lp_norm(const Field& f, double p) {
    require_finite(f);
    if (!(p >= 1.0)) {
        throw Error("norm order must be >= 1");
    }
    const Grid& g = f.grid();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values()) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double a = std::abs(f[j]);
        const double ap = p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
        sum += g.weight(j) * ap;
    }
    sum *= g.spacing();
    return p == 1.0 ? sum : (p == 2.0 ? std::sqrt(sum) : std::pow(sum, 1.0 / p));
}

double integral(const Field& f) {
    require_finite(f);
    const Grid& g = f.grid();
    double sum = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        sum += g.weight(j) * f[j];
    }
    return sum * g.spacing();
}

Field ddx(const Field& f) {
    const std::size_t n = f.size();
    if (n < 3) {
        throw Error("grid too small");
    }
    const double inv2h = 1.0 / (2.0 * f.grid().spacing());
    Field out(f.grid());
    for (std::size_t j = 1; j + 1 < n; ++j) {
        out[j] = (f[j + 1] - f[j - 1]) * inv2h;
    }
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
    return out;
}

double interpolate(const Field& f, double x) {
    const Grid& g = f.grid();
    if (!(g.contains(x))) {
        throw Error("out of domain");
    }
    const double s = (x + g.half_width()) / g.spacing();
    const auto nearest = std::min(static_cast<std::size_t>(std::llround(s)), g.size() - 1);
    if (g.x(nearest) == x) {
        return f[nearest];
    }
    auto j = static_cast<std::size_t>(std::floor(s));
    if (j >= g.size() - 1) {
        j = g.size() - 2;
    }
    const double theta = (x - g.x(j)) / g.spacing();
    return (1.0 - theta) * f[j] + theta * f[j + 1];
}

} // namespace aggdiff
