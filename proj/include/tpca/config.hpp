// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace tpca {

/// Numerical tolerances. Every field can be overridden at runtime; the
/// defaults below are the contract values the test suite pins.
struct Tolerances {
    /// Eigen-residual acceptance bound, relative to ||A||_F.
    double tol_eig = 1e-9;
    /// Orthonormality deviation bound for basis Gram matrices.
    double tol_orth = 1e-10;
    /// Self-adjointness bound: max |A[i,j] - A[j,i]| <= sym_tol_factor * max |A|.
    double sym_tol_factor = 1e-8;
    /// Relative spectral cutoff for numerical rank decisions.
    double eps_rank = 1e-10;
    /// Components smaller than this are skipped when fixing eigenvector signs.
    double sign_eps = 1e-12;
    /// SVD residual/orthogonality acceptance bound, relative to ||D||_F.
    double tol_svd = 1e-9;
    /// Jacobi sweep limit before giving up.
    int max_sweeps = 64;
};

struct Config {
    Tolerances tol;
    /// Largest single tensor/matrix allocation, in bytes.
    std::uint64_t memory_cap = std::uint64_t{1} << 31;
    /// Largest flattened dimension accepted by the dense eigensolver.
    std::size_t eig_cap = 4096;
};

/// Mutable process-wide configuration.
Config& config();

/// Throws CapacityError if `bytes` exceeds the configured memory cap.
/// `what` names the allocation in the error message.
void check_allocation(std::uint64_t bytes, const char* what);

} // namespace tpca
