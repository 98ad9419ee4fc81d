#pragma once

#include "aggdiff/grid.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace testgen {

// Seeded value generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }

    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    aggdiff::Field noise(const aggdiff::Grid& grid, double lo = -1.0, double hi = 1.0) {
        aggdiff::Field f(grid);
        for (std::size_t j = 0; j < f.size(); ++j) {
            f[j] = uniform(lo, hi);
        }
        return f;
    }

    // Noise that vanishes outside the central `fraction` of the nodes.
    aggdiff::Field compact_noise(const aggdiff::Grid& grid, double fraction = 0.5) {
        aggdiff::Field f(grid);
        const auto n = grid.size();
        const auto pad = static_cast<std::size_t>(0.5 * (1.0 - fraction) * static_cast<double>(n));
        for (std::size_t j = pad; j + pad < n; ++j) {
            f[j] = uniform(-1.0, 1.0);
        }
        return f;
    }

    // Sum of a few smooth compactly supported bumps inside [-reach, reach].
    aggdiff::Field smooth_mixture(const aggdiff::Grid& grid, double reach, bool signed_weights = false) {
        const int terms = static_cast<int>(index(1, 4));
        double c[4], w[4], h[4];
        for (int k = 0; k < terms; ++k) {
            w[k] = uniform(0.15, 0.4) * reach;
            c[k] = uniform(-reach + w[k], reach - w[k]);
            h[k] = signed_weights ? uniform(-1.0, 1.0) : uniform(0.1, 1.0);
        }
        return aggdiff::Field::sample(grid, [&](double x) {
            double v = 0.0;
            for (int k = 0; k < terms; ++k) {
                const double s = (x - c[k]) / w[k];
                if (std::abs(s) < 1.0) {
                    v += h[k] * std::exp(-1.0 / (1.0 - s * s));
                }
            }
            return v;
        });
    }

    // Random field with u(x_j) = u(x_{N-1-j}).
    aggdiff::Field even_noise(const aggdiff::Grid& grid) {
        aggdiff::Field f(grid);
        const auto n = grid.size();
        for (std::size_t j = 0; j <= (n - 1) / 2; ++j) {
            f[j] = f[n - 1 - j] = uniform(-1.0, 1.0);
        }
        return f;
    }

    aggdiff::Field odd_noise(const aggdiff::Grid& grid) {
        aggdiff::Field f(grid);
        const auto n = grid.size();
        for (std::size_t j = 0; j < n / 2; ++j) {
            f[j] = uniform(-1.0, 1.0);
            f[n - 1 - j] = -f[j];
        }
        return f;
    }

private:
    std::mt19937_64 rng_;
};

inline double max_abs(const aggdiff::Field& f) {
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        m = std::max(m, std::abs(f[j]));
    }
    return m;
}

inline double max_abs_diff(const aggdiff::Field& a, const aggdiff::Field& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        m = std::max(m, std::abs(a[j] - b[j]));
    }
    return m;
}

// Indicator of [a, b] with value 1/2 at nodes on a jump.
inline aggdiff::Field sampled_indicator(const aggdiff::Grid& grid, double a, double b) {
    const double tol = 1e-9 * grid.spacing();
    return aggdiff::Field::sample(grid, [=](double x) {
        if (std::abs(x - a) < tol || std::abs(x - b) < tol) {
            return 0.5;
        }
        return (x > a && x < b) ? 1.0 : 0.0;
    });
}

} // namespace testgen
