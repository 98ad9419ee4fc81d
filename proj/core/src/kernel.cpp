#include "aggdiff/kernel.hpp"

#include "aggdiff/error.hpp"

#include <cmath>
#include <vector>

namespace aggdiff {

KernelSpec KernelSpec::exponential(const Grid& grid) {
    KernelSpec spec;
    spec.kind = KernelKind::exponential;
    spec.decay_per_cell = std::exp(-grid.spacing());
    return spec;
}

namespace {

void check(const Field& u, const KernelSpec& spec) {
    if (!u.is_finite()) {
        throw Error("non-finite field");
    }
    if (!(spec.decay_per_cell > 0.0 && spec.decay_per_cell < 1.0)) {
        throw Error("kernel decay_per_cell must lie in (0, 1)");
    }
    const double expected = std::exp(-u.grid().spacing());
    if (std::abs(spec.decay_per_cell - expected) > 1e-14 * expected) {
        throw Error("kernel spec was built for a different grid");
    }
}

} // namespace

KernelConvolutions convolve(const Field& u, const KernelSpec& spec) {
    check(u, spec);
    const Grid& g = u.grid();
    const std::size_t n = u.size();
    const double r = spec.decay_per_cell;
    const double h = g.spacing();

    std::vector<double> own(n);
    for (std::size_t j = 0; j < n; ++j) {
        own[j] = g.weight(j) * u[j] * h;
    }

    // forward[j] collects nodes k <= j, backward[j] nodes k >= j.
    std::vector<double> forward(n), backward(n);
    forward[0] = own[0];
    for (std::size_t j = 1; j < n; ++j) {
        forward[j] = r * forward[j - 1] + own[j];
    }
    backward[n - 1] = own[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
        backward[j] = r * backward[j + 1] + own[j];
    }

    KernelConvolutions out{Field(g), Field(g)};
    for (std::size_t j = 0; j < n; ++j) {
        out.k[j] = forward[j] + backward[j] - own[j];
        out.dk[j] = backward[j] - forward[j];
    }
    return out;
}

Field conv_k(const Field& u, const KernelSpec& spec) { return convolve(u, spec).k; }

Field conv_dk(const Field& u, const KernelSpec& spec) { return convolve(u, spec).dk; }

Field conv_ddk(const Field& u, const KernelSpec& spec) {
    Field out = conv_k(u, spec);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] -= 2.0 * u[j];
    }
    return out;
}

namespace {

std::vector<double> decay_table(const Grid& g) {
    std::vector<double> table(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) {
        table[m] = std::exp(-static_cast<double>(m) * g.spacing());
    }
    return table;
}

} // namespace

Field conv_k_direct(const Field& u, const KernelSpec& spec) {
    check(u, spec);
    const Grid& g = u.grid();
    const auto table = decay_table(g);
    Field out(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const std::size_t m = j > k ? j - k : k - j;
            sum += g.weight(k) * table[m] * u[k];
        }
        out[j] = sum * g.spacing();
    }
    return out;
}

Field conv_dk_direct(const Field& u, const KernelSpec& spec) {
    check(u, spec);
    const Grid& g = u.grid();
    const auto table = decay_table(g);
    Field out(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (k < j) {
                sum -= g.weight(k) * table[j - k] * u[k];
            } else if (k > j) {
                sum += g.weight(k) * table[k - j] * u[k];
            }
        }
        out[j] = sum * g.spacing();
    }
    return out;
}

} // namespace aggdiff
