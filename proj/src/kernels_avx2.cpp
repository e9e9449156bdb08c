// SPDX-License-Identifier: Apache-2.0
// AVX2 kernel variants. Compiled with -mavx2 -mfma in its own translation
// unit; nothing here runs unless the dispatcher checked CPU support first.
#include <immintrin.h>

#include <cstddef>

#include "tpca/kernels.hpp"

namespace tpca::kernels::avx2 {

double dot(const double* x, const double* y, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    __m256d acc2 = _mm256_setzero_pd();
    __m256d acc3 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
        acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
        acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    const __m256d sum = _mm256_add_pd(_mm256_add_pd(acc0, acc1),
                                      _mm256_add_pd(acc2, acc3));
    double lanes[4];
    _mm256_storeu_pd(lanes, sum);
    double r = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale(double a, double* x, std::size_t n) noexcept {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] = a * x[i];
}

void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vx = _mm256_loadu_pd(x + i);
        const __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, vx),
                                              _mm256_mul_pd(vs, vy)));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, vx),
                                              _mm256_mul_pd(vc, vy)));
    }
    for (; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

void add_outer(double a, const double* x, std::size_t nx,
               const double* y, std::size_t ny, double* out) noexcept {
    for (std::size_t i = 0; i < nx; ++i) {
        const double axi = a * x[i];
        const __m256d vaxi = _mm256_set1_pd(axi);
        double* row = out + i * ny;
        std::size_t j = 0;
        for (; j + 4 <= ny; j += 4) {
            const __m256d prod = _mm256_mul_pd(vaxi, _mm256_loadu_pd(y + j));
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), prod));
        }
        for (; j < ny; ++j) row[j] = row[j] + axi * y[j];
    }
}

} // namespace tpca::kernels::avx2
