// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

// Dense inner-loop kernels. Every kernel has a scalar reference
// implementation and, on x86-64 hardware with AVX2, a vectorized variant.
// The active variant is picked once at startup: AVX2 when the CPU supports
// it, overridable with the TPCA_KERNELS environment variable
// ("scalar", "avx2", "auto") or kernels::select().
//
// Contract between variants:
//   * axpy, scale, rotate and add_outer are elementwise and use the exact
//     same per-element expression in both variants (multiply then add,
//     never fused), so scalar and AVX2 results are bitwise identical.
//   * dot is a reduction; the AVX2 variant uses four fused accumulators
//     and therefore agrees with the scalar variant only to rounding.
// All kernels tolerate n == 0 and aliasing-free buffers only.

namespace tpca::kernels {

enum class Variant { scalar, avx2 };

/// Variant used by the dispatching kernels below.
Variant active() noexcept;

const char* variant_name(Variant v) noexcept;

/// True when the running CPU can execute the AVX2 variant.
bool avx2_available() noexcept;

/// Force a variant (throws ArgumentError if unsupported on this CPU).
void select(Variant v);

/// Re-run the startup selection (CPU probe + TPCA_KERNELS).
void select_auto();

/// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n) noexcept;

/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;

/// x[i] *= a
void scale(double a, double* x, std::size_t n) noexcept;

/// Plane rotation: (x[i], y[i]) <- (c*x[i] - s*y[i], s*x[i] + c*y[i])
void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept;

/// Rank-1 update of a row-major matrix: out[i*ny + j] += a * x[i] * y[j]
void add_outer(double a, const double* x, std::size_t nx,
               const double* y, std::size_t ny, double* out) noexcept;

inline double sum_squares(const double* x, std::size_t n) noexcept {
    return dot(x, x, n);
}

namespace scalar {
double dot(const double* x, const double* y, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void scale(double a, double* x, std::size_t n) noexcept;
void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept;
void add_outer(double a, const double* x, std::size_t nx,
               const double* y, std::size_t ny, double* out) noexcept;
} // namespace scalar

namespace avx2 {
// Present only when the library was built with AVX2 support; calling
// these on a CPU without AVX2 is undefined. Guard with avx2_available().
double dot(const double* x, const double* y, std::size_t n) noexcept;
void axpy(double a, const double* x, double* y, std::size_t n) noexcept;
void scale(double a, double* x, std::size_t n) noexcept;
void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept;
void add_outer(double a, const double* x, std::size_t nx,
               const double* y, std::size_t ny, double* out) noexcept;
} // namespace avx2

} // namespace tpca::kernels
