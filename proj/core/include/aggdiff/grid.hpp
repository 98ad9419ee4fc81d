#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace aggdiff {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Uniform node-centred mesh on [-A, A] with N nodes.
///
/// Node j sits at x_j = -A + j*dx with dx = 2A/(N-1); the last node is pinned
/// to +A exactly. Quadrature over the grid uses trapezoid weights (half weight
/// on the two end nodes), which matches the half-cell control volumes the
/// solver uses at the boundary.
class Grid {
public:
    Grid(double half_width, std::size_t n_nodes);

    double half_width() const noexcept { return half_width_; }
    std::size_t size() const noexcept { return n_nodes_; }
    double spacing() const noexcept { return spacing_; }

    double x(std::size_t j) const noexcept {
        return j + 1 == n_nodes_ ? half_width_
                                 : -half_width_ + static_cast<double>(j) * spacing_;
    }

    /// Trapezoid weight of node j (1 in the interior, 1/2 at the ends).
    double weight(std::size_t j) const noexcept {
        return (j == 0 || j + 1 == n_nodes_) ? 0.5 : 1.0;
    }

    std::vector<double> nodes() const;

    bool contains(double x) const noexcept { return x >= -half_width_ && x <= half_width_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double half_width_;
    std::size_t n_nodes_;
    double spacing_;
};

/// Real values sampled at the nodes of a Grid.
class Field {
public:
    explicit Field(Grid grid);
    Field(Grid grid, std::vector<double> values);

    /// Samples `f` at every node.
    static Field sample(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }

    /// False if any value is NaN or infinite.
    bool is_finite() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double c, Field a) { return a *= c; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Discrete L^p norm with trapezoid weights; p = kInfNorm gives max |u_j|.
/// Throws aggdiff::Error("non-finite field") for invalid fields; p < 1 is rejected.
double lp_norm(const Field& f, double p);

/// Trapezoid-weighted signed sum  sum_j w_j u_j dx.
double integral(const Field& f);

/// First derivative: central differences inside, second-order one-sided at the ends.
Field ddx(const Field& f);

/// Piecewise-linear interpolation. Throws "out of domain" outside [-A, A].
double interpolate(const Field& f, double x);

} // namespace aggdiff
