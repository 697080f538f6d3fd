// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace ppgq::kernels {

// Dense inner loops used by the numeric modules. Every operation has a
// scalar reference implementation and, on x86-64 with AVX2+FMA, a vector
// variant selected once at startup. set_backend() exists so tests can pin
// either implementation and compare them on the same data.
enum class Backend { auto_detect, scalar, avx2 };

// Returns false (and leaves the dispatch table unchanged) if the requested
// backend is not available on this CPU / build.
bool set_backend(Backend backend) noexcept;
std::string_view active_backend() noexcept;
bool avx2_available() noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double sum(std::span<const double> a) noexcept;

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

// x *= alpha
void scale(std::span<double> x, double alpha) noexcept;

// Plane rotation, the Jacobi sweep update:
//   x <- c*x - s*y
//   y <- s*x + c*y   (using the pre-rotation x)
void rotate(std::span<double> x, std::span<double> y, double c, double s) noexcept;

} // namespace ppgq::kernels
