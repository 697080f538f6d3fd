// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ppgq/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace ppgq;

namespace {

std::vector<double> random_vec(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v) x = u(gen);
    return v;
}

struct BackendGuard {
    ~BackendGuard() { kernels::set_backend(kernels::Backend::auto_detect); }
};

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 63, 221, 400, 1021, 4096};

} // namespace

TEST_CASE("kernels: scalar backend basics") {
    BackendGuard guard;
    REQUIRE(kernels::set_backend(kernels::Backend::scalar));
    CHECK(kernels::active_backend() == "scalar");

    std::vector<double> a{1.0, 2.0, 3.0};
    std::vector<double> b{4.0, -5.0, 6.0};
    CHECK(kernels::dot(a, b) == doctest::Approx(4.0 - 10.0 + 18.0));
    CHECK(kernels::sum(a) == doctest::Approx(6.0));

    std::vector<double> y{1.0, 1.0, 1.0};
    kernels::axpy(2.0, a, y);
    CHECK(y[0] == doctest::Approx(3.0));
    CHECK(y[2] == doctest::Approx(7.0));

    kernels::scale(y, 0.5);
    CHECK(y[0] == doctest::Approx(1.5));
}

TEST_CASE("kernels: rotation preserves norms") {
    BackendGuard guard;
    std::mt19937_64 gen(11);
    auto x = random_vec(gen, 257);
    auto y = random_vec(gen, 257);
    const double norm_before = kernels::dot(x, x) + kernels::dot(y, y);

    const double theta = 0.7345;
    kernels::rotate(x, y, std::cos(theta), std::sin(theta));
    const double norm_after = kernels::dot(x, x) + kernels::dot(y, y);
    CHECK(norm_after == doctest::Approx(norm_before).epsilon(1e-12));
}

TEST_CASE("kernels: avx2 and scalar backends agree") {
    if (!kernels::avx2_available()) return; // nothing to compare on this host

    BackendGuard guard;
    std::mt19937_64 gen(42);
    for (std::size_t n : kSizes) {
        auto a = random_vec(gen, n, 3.0);
        auto b = random_vec(gen, n, 2.0);

        REQUIRE(kernels::set_backend(kernels::Backend::scalar));
        const double dot_s = kernels::dot(a, b);
        const double sum_s = kernels::sum(a);
        auto y_s = b;
        kernels::axpy(1.7, a, y_s);
        auto sc_s = a;
        kernels::scale(sc_s, -0.37);
        auto rx_s = a, ry_s = b;
        kernels::rotate(rx_s, ry_s, 0.8, 0.6);

        REQUIRE(kernels::set_backend(kernels::Backend::avx2));
        const double dot_v = kernels::dot(a, b);
        const double sum_v = kernels::sum(a);
        auto y_v = b;
        kernels::axpy(1.7, a, y_v);
        auto sc_v = a;
        kernels::scale(sc_v, -0.37);
        auto rx_v = a, ry_v = b;
        kernels::rotate(rx_v, ry_v, 0.8, 0.6);

        const double dot_tol = 1e-12 * (1.0 + std::abs(dot_s)) * static_cast<double>(n + 1);
        CHECK(std::abs(dot_v - dot_s) <= dot_tol);
        CHECK(std::abs(sum_v - sum_s) <=
              1e-12 * (1.0 + std::abs(sum_s)) * static_cast<double>(n + 1));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(y_v[i] == doctest::Approx(y_s[i]).epsilon(1e-13));
            CHECK(sc_v[i] == sc_s[i]); // pure multiplies round identically
            CHECK(rx_v[i] == doctest::Approx(rx_s[i]).epsilon(1e-13));
            CHECK(ry_v[i] == doctest::Approx(ry_s[i]).epsilon(1e-13));
        }
    }
}
