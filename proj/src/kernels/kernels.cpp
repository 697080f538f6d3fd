// SPDX-License-Identifier: Apache-2.0
#include "ppgq/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace ppgq::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double* x, double alpha, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void rotate_scalar(double* x, double* y, double c, double s, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

#if defined(PPGQ_WITH_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n) noexcept;
double sum_avx2(const double* a, std::size_t n) noexcept;
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) noexcept;
void scale_avx2(double* x, double alpha, std::size_t n) noexcept;
void rotate_avx2(double* x, double* y, double c, double s, std::size_t n) noexcept;
#endif

struct DispatchTable {
    double (*dot)(const double*, const double*, std::size_t) noexcept = dot_scalar;
    double (*sum)(const double*, std::size_t) noexcept = sum_scalar;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept = axpy_scalar;
    void (*scale)(double*, double, std::size_t) noexcept = scale_scalar;
    void (*rotate)(double*, double*, double, double, std::size_t) noexcept = rotate_scalar;
    const char* name = "scalar";
};

DispatchTable make_table(Backend backend) noexcept {
    DispatchTable t;
#if defined(PPGQ_WITH_AVX2)
    if (backend == Backend::avx2 ||
        (backend == Backend::auto_detect && avx2_available())) {
        t.dot = dot_avx2;
        t.sum = sum_avx2;
        t.axpy = axpy_avx2;
        t.scale = scale_avx2;
        t.rotate = rotate_avx2;
        t.name = "avx2";
    }
#else
    (void)backend;
#endif
    return t;
}

// PPGQ_KERNELS=scalar|avx2 overrides auto-detection (diagnostics and the
// cross-backend test runs).
Backend backend_from_env() noexcept {
    const char* env = std::getenv("PPGQ_KERNELS");
    if (env == nullptr) return Backend::auto_detect;
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
    return Backend::auto_detect;
}

DispatchTable& table() noexcept {
    static DispatchTable t = make_table(backend_from_env());
    return t;
}

} // namespace detail

bool avx2_available() noexcept {
#if defined(PPGQ_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool set_backend(Backend backend) noexcept {
    if (backend == Backend::avx2 && !avx2_available()) return false;
    detail::table() = detail::make_table(backend);
    return true;
}

std::string_view active_backend() noexcept {
    return detail::table().name;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    return detail::table().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) noexcept {
    return detail::table().sum(a.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    assert(x.size() == y.size());
    detail::table().axpy(alpha, x.data(), y.data(), x.size());
}

void scale(std::span<double> x, double alpha) noexcept {
    detail::table().scale(x.data(), alpha, x.size());
}

void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept {
    assert(x.size() == y.size());
    detail::table().rotate(x.data(), y.data(), c, s, x.size());
}

} // namespace ppgq::kernels
