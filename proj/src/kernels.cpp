// SPDX-License-Identifier: Apache-2.0
#include "tpca/kernels.hpp"

#include <cstdlib>
#include <string>

#include "tpca/errors.hpp"

namespace tpca::kernels {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void scale(double a, double* x, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) x[i] = a * x[i];
}

void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
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
        double* row = out + i * ny;
        for (std::size_t j = 0; j < ny; ++j) row[j] = row[j] + axi * y[j];
    }
}

} // namespace scalar

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*scale)(double, double*, std::size_t) noexcept;
    void (*rotate)(double, double, double*, double*, std::size_t) noexcept;
    void (*add_outer)(double, const double*, std::size_t, const double*,
                      std::size_t, double*) noexcept;
};

constexpr Table kScalarTable{scalar::dot, scalar::axpy, scalar::scale,
                             scalar::rotate, scalar::add_outer};

#if TPCA_BUILD_AVX2
constexpr Table kAvx2Table{avx2::dot, avx2::axpy, avx2::scale, avx2::rotate,
                           avx2::add_outer};
#endif

Variant g_variant = Variant::scalar;
const Table* g_table = &kScalarTable;

void apply_variant(Variant v) {
#if TPCA_BUILD_AVX2
    if (v == Variant::avx2) {
        g_variant = Variant::avx2;
        g_table = &kAvx2Table;
        return;
    }
#endif
    g_variant = Variant::scalar;
    g_table = &kScalarTable;
}

struct Init {
    Init() { select_auto(); }
};

Init g_init;

} // namespace

bool avx2_available() noexcept {
#if TPCA_BUILD_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void select(Variant v) {
    if (v == Variant::avx2 && !avx2_available()) {
        throw ArgumentError("AVX2 kernels are not available on this CPU/build");
    }
    apply_variant(v);
}

void select_auto() {
    apply_variant(avx2_available() ? Variant::avx2 : Variant::scalar);
    if (const char* env = std::getenv("TPCA_KERNELS")) {
        const std::string choice(env);
        if (choice == "scalar") {
            apply_variant(Variant::scalar);
        } else if (choice == "avx2") {
            select(Variant::avx2);
        } else if (!choice.empty() && choice != "auto") {
            throw ArgumentError("TPCA_KERNELS must be scalar, avx2 or auto, got '"
                                + choice + "'");
        }
    }
}

Variant active() noexcept { return g_variant; }

const char* variant_name(Variant v) noexcept {
    return v == Variant::avx2 ? "avx2" : "scalar";
}

double dot(const double* x, const double* y, std::size_t n) noexcept {
    return g_table->dot(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    g_table->axpy(a, x, y, n);
}

void scale(double a, double* x, std::size_t n) noexcept {
    g_table->scale(a, x, n);
}

void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept {
    g_table->rotate(c, s, x, y, n);
}

void add_outer(double a, const double* x, std::size_t nx,
               const double* y, std::size_t ny, double* out) noexcept {
    g_table->add_outer(a, x, nx, y, ny, out);
}

#if !TPCA_BUILD_AVX2
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n) noexcept {
    return scalar::dot(x, y, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) noexcept {
    scalar::axpy(a, x, y, n);
}
void scale(double a, double* x, std::size_t n) noexcept {
    scalar::scale(a, x, n);
}
void rotate(double c, double s, double* x, double* y, std::size_t n) noexcept {
    scalar::rotate(c, s, x, y, n);
}
void add_outer(double a, const double* x, std::size_t nx, const double* y,
               std::size_t ny, double* out) noexcept {
    scalar::add_outer(a, x, nx, y, ny, out);
}
} // namespace avx2
#endif

} // namespace tpca::kernels
