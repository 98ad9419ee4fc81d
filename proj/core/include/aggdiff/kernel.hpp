#pragma once

#include "aggdiff/grid.hpp"

namespace aggdiff {

enum class KernelKind { exponential };

/// The attraction kernel K(x) = exp(-|x|) specialised to one grid.
struct KernelSpec {
    KernelKind kind = KernelKind::exponential;
    double decay_per_cell = 0.0; ///< exp(-dx), strictly inside (0, 1)

    /// ||dK/dx||_{L^1} for the exponential kernel.
    static constexpr double kDerivativeL1 = 2.0;

    static KernelSpec exponential(const Grid& grid);
};

/// K*u and dK*u from one pair of sweeps.
struct KernelConvolutions {
    Field k;
    Field dk;
};

// The fast routines evaluate the trapezoid sum
//     v_j = sum_k w_k K(x_j - x_k) u_k dx
// through the recursions a_j = r a_{j-1} + w_j u_j dx (left to right) and
// b_j = r b_{j+1} + w_j u_j dx (right to left), which are exact because
// exp(-(x_{j+1} - y)) = r exp(-(x_j - y)) for y <= x_j.

KernelConvolutions convolve(const Field& u, const KernelSpec& spec);

/// K*u in O(N).
Field conv_k(const Field& u, const KernelSpec& spec);

/// (dK/dx)*u in O(N), with dK/dx(x) = -sign(x) exp(-|x|) and sign(0) = 0.
Field conv_dk(const Field& u, const KernelSpec& spec);

/// (d2K/dx2)*u through the identity d2K/dx2 = -2 delta + K, i.e. -2u + K*u.
Field conv_ddk(const Field& u, const KernelSpec& spec);

/// O(N^2) direct trapezoid sums with the same weights; used as oracles.
Field conv_k_direct(const Field& u, const KernelSpec& spec);
Field conv_dk_direct(const Field& u, const KernelSpec& spec);

} // namespace aggdiff
