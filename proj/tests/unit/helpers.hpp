// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, deliberately independent of the library's numeric
// paths: plain loops, long double accumulation, no kernels:: calls.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// Magnitude of the DTFT of x at frequency f (Hz) for sample rate fs.
inline double dft_magnitude(const std::vector<double>& x, double f, double fs) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double w = 2.0 * kPi * f * static_cast<double>(k) / fs;
        re += x[k] * std::cos(w);
        im -= x[k] * std::sin(w);
    }
    return static_cast<double>(std::sqrt(re * re + im * im));
}

// One-sided spectral energy split: fraction of total energy whose bin
// frequency lies outside [lo, hi]. Direct O(n^2) DFT over rFFT bins.
inline double energy_fraction_outside(const std::vector<double>& x, double fs, double lo,
                                      double hi) {
    const std::size_t n = x.size();
    long double outside = 0.0L, total = 0.0L;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(n);
        long double re = 0.0L, im = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = 2.0 * kPi * static_cast<double>(k) * static_cast<double>(i) /
                             static_cast<double>(n);
            re += x[i] * std::cos(w);
            im -= x[i] * std::sin(w);
        }
        const double weight = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
        const long double e = weight * (re * re + im * im);
        total += e;
        if (f < lo || f > hi) outside += e;
    }
    return total > 0.0L ? static_cast<double>(outside / total) : 0.0;
}

// Cross-correlation argmax over lags [-max_lag, max_lag], interior region.
inline int xcorr_argmax_lag(const std::vector<double>& a, const std::vector<double>& b,
                            int max_lag, int margin = 100) {
    int best_lag = 0;
    long double best = -1e300L;
    const int n = static_cast<int>(a.size());
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        long double acc = 0.0L;
        for (int i = margin; i < n - margin; ++i) {
            const int j = i + lag;
            if (j < 0 || j >= n) continue;
            acc += a[i] * b[j];
        }
        if (acc > best) {
            best = acc;
            best_lag = lag;
        }
    }
    return best_lag;
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    long double sab = 0.0L, saa = 0.0L, sbb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += a[i] * b[i];
        saa += a[i] * a[i];
        sbb += b[i] * b[i];
    }
    return static_cast<double>(sab / std::sqrt(saa * sbb));
}

// Direct-formula statistics.
inline double mae_direct(const std::vector<double>& x, const std::vector<double>& y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::fabs(y[i] - x[i]);
    return static_cast<double>(acc / static_cast<long double>(x.size()));
}

inline double pearson_direct(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<long double>(x.size());
    long double sx = 0.0L, sy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

struct BaDirect {
    double bias, loa_low, loa_high, within_percent;
};

inline BaDirect bland_altman_direct(const std::vector<double>& x, const std::vector<double>& y,
                                    double bound) {
    const std::size_t n = x.size();
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) sum += x[i] - y[i];
    const long double bias = sum / static_cast<long double>(n);
    long double ss = 0.0L;
    std::size_t within = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = x[i] - y[i];
        ss += (d - bias) * (d - bias);
        if (std::fabs(static_cast<double>(d)) <= bound) ++within;
    }
    const long double sd = std::sqrt(ss / static_cast<long double>(n - 1));
    return BaDirect{static_cast<double>(bias), static_cast<double>(bias - 1.96L * sd),
                    static_cast<double>(bias + 1.96L * sd),
                    100.0 * static_cast<double>(within) / static_cast<double>(n)};
}

// Singular values via a cyclic Jacobi eigensolver on the Gram matrix
// G = X * X^T (m x m). Independent route from the library's one-sided
// orthogonalization of the data matrix itself.
inline std::vector<double> singular_values_via_gram(const std::vector<double>& x, std::size_t m,
                                                    std::size_t n) {
    std::vector<double> g(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < n; ++k) acc += x[i * n + k] * x[j * n + k];
            g[i * m + j] = g[j * m + i] = static_cast<double>(acc);
        }
    }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                off = std::max(off, std::fabs(g[p * m + q]));
            }
        }
        double diag = 0.0;
        for (std::size_t p = 0; p < m; ++p) diag = std::max(diag, std::fabs(g[p * m + p]));
        if (off <= 1e-14 * diag) break;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = g[p * m + q];
                if (std::fabs(apq) <= 1e-300) continue;
                const double app = g[p * m + p];
                const double aqq = g[q * m + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double gkp = g[k * m + p];
                    const double gkq = g[k * m + q];
                    g[k * m + p] = c * gkp - s * gkq;
                    g[k * m + q] = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double gpk = g[p * m + k];
                    const double gqk = g[q * m + k];
                    g[p * m + k] = c * gpk - s * gqk;
                    g[q * m + k] = s * gpk + c * gqk;
                }
            }
        }
    }
    std::vector<double> sv(m);
    for (std::size_t p = 0; p < m; ++p) sv[p] = std::sqrt(std::max(0.0, g[p * m + p]));
    std::sort(sv.rbegin(), sv.rend());
    return sv;
}

} // namespace oracle
