#include "aggdiff/initial_condition.hpp"

#include "aggdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace aggdiff {

std::string_view to_string(InitialKind kind) noexcept {
    switch (kind) {
    case InitialKind::zero: return "zero";
    case InitialKind::bump: return "bump";
    case InitialKind::gaussian_truncated: return "gaussian_truncated";
    case InitialKind::indicator_smoothed: return "indicator_smoothed";
    case InitialKind::custom_csv: return "custom_csv";
    }
    return "unknown";
}

std::optional<InitialKind> initial_kind_from(std::string_view name) noexcept {
    for (auto k : {InitialKind::zero, InitialKind::bump, InitialKind::gaussian_truncated,
                   InitialKind::indicator_smoothed, InitialKind::custom_csv}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

namespace {

double smooth_step(double tau) {
    // exp(-1/tau) / (exp(-1/tau) + exp(-1/(1-tau))), 0 at tau <= 0, 1 at tau >= 1
    if (tau <= 0.0) {
        return 0.0;
    }
    if (tau >= 1.0) {
        return 1.0;
    }
    const double a = std::exp(-1.0 / tau);
    const double b = std::exp(-1.0 / (1.0 - tau));
    return a / (a + b);
}

struct CsvTable {
    std::vector<double> x, u;

    double operator()(double at) const {
        if (x.empty() || at < x.front() || at > x.back()) {
            return 0.0;
        }
        const auto it = std::upper_bound(x.begin(), x.end(), at);
        if (it == x.end()) {
            return u.back();
        }
        const auto i = static_cast<std::size_t>(it - x.begin());
        const double theta = (at - x[i - 1]) / (x[i] - x[i - 1]);
        return (1.0 - theta) * u[i - 1] + theta * u[i];
    }
};

std::shared_ptr<const CsvTable> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open initial condition file '" + path + "'");
    }
    auto table = std::make_shared<CsvTable>();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#' || (lineno == 1 && line.rfind("x", 0) == 0)) {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double x = 0.0, u = 0.0;
        if (!(row >> x >> u)) {
            throw Error(path + ":" + std::to_string(lineno) + ": expected 'x,u'");
        }
        if (!table->x.empty() && !(x > table->x.back())) {
            throw Error(path + ":" + std::to_string(lineno) + ": x must be strictly increasing");
        }
        table->x.push_back(x);
        table->u.push_back(u);
    }
    return table;
}

} // namespace

std::function<double(double)> InitialCondition::profile() const {
    const double amp = amplitude;
    const double half = L;
    switch (kind) {
    case InitialKind::zero:
        return [](double) { return 0.0; };
    case InitialKind::bump:
        return [amp, half](double x) {
            const double s = x / half;
            return std::abs(s) < 1.0 ? amp * std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        };
    case InitialKind::gaussian_truncated: {
        const double sg = sigma;
        return [amp, half, sg](double x) {
            return std::abs(x) < half ? amp * std::exp(-0.5 * x * x / (sg * sg)) : 0.0;
        };
    }
    case InitialKind::indicator_smoothed: {
        const double width = ramp;
        return [amp, half, width](double x) {
            return amp * smooth_step((half - std::abs(x)) / width);
        };
    }
    case InitialKind::custom_csv: {
        auto table = read_csv(path);
        return [table, amp](double x) { return amp * (*table)(x); };
    }
    }
    throw Error("unknown initial condition kind");
}

std::function<double(double)> InitialCondition::scaled_profile(const Grid& grid) const {
    auto base = profile();
    double scale = 1.0;
    if (mass && kind != InitialKind::zero) {
        const double sampled = integral(Field::sample(grid, base));
        if (*mass == 0.0) {
            scale = 0.0;
        } else {
            if (!(std::abs(sampled) > 0.0)) {
                throw Error("cannot rescale an initial condition with zero mass");
            }
            scale = *mass / sampled;
        }
    }
    return [base, scale](double x) { return scale * base(x); };
}

Field InitialCondition::sample(const Grid& grid) const {
    return Field::sample(grid, scaled_profile(grid));
}

bool InitialCondition::compactly_supported_nonnegative() const noexcept {
    const bool positive_scale = amplitude >= 0.0 && (!mass || *mass >= 0.0);
    switch (kind) {
    case InitialKind::bump:
    case InitialKind::gaussian_truncated:
    case InitialKind::indicator_smoothed:
        return positive_scale;
    case InitialKind::zero:
        return true;
    case InitialKind::custom_csv:
        return false;
    }
    return false;
}

} // namespace aggdiff
