#pragma once

#include "aggdiff/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace aggdiff {

enum class InitialKind { zero, bump, gaussian_truncated, indicator_smoothed, custom_csv };

std::string_view to_string(InitialKind kind) noexcept;
std::optional<InitialKind> initial_kind_from(std::string_view name) noexcept;

/// Initial datum presets.
///
///  bump               amplitude * exp(-1/(1 - (x/L)^2)) on |x| < L
///  gaussian_truncated amplitude * exp(-x^2 / (2 sigma^2)) on |x| < L
///  indicator_smoothed amplitude on |x| <= L - ramp, C-infinity transition to 0 at |x| = L
///  custom_csv         piecewise-linear through the (x, u) rows of a CSV file, 0 outside
///
/// When `mass` is set the sampled field is rescaled so its trapezoid mass matches.
struct InitialCondition {
    InitialKind kind = InitialKind::bump;
    double L = 1.0;
    double amplitude = 1.0;
    std::optional<double> mass = 1.0;
    double sigma = 0.25;
    double ramp = 0.2;
    std::string path;

    /// Unscaled profile (amplitude applied, mass scaling not).
    std::function<double(double)> profile() const;

    /// Profile with the mass scaling that `sample(grid)` would apply.
    std::function<double(double)> scaled_profile(const Grid& grid) const;

    Field sample(const Grid& grid) const;

    /// True for the presets that are nonnegative with support inside [-L, L].
    bool compactly_supported_nonnegative() const noexcept;
};

} // namespace aggdiff
