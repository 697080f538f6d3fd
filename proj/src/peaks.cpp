// SPDX-License-Identifier: Apache-2.0
#include "ppgq/peaks.hpp"

#include <algorithm>
#include <cmath>

namespace ppgq {

namespace {

double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(values.begin(), mid);
    return (lo + hi) / 2.0;
}

} // namespace

std::vector<double> sobel_derivative(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 3) {
        throw Error(ErrorCode::segment_too_short,
                    "derivative needs at least 3 samples, got " + std::to_string(n));
    }
    std::vector<double> d(n);
    d[0] = (samples[1] - samples[0]) / 2.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (samples[i + 1] - samples[i - 1]) / 2.0;
    }
    d[n - 1] = (samples[n - 1] - samples[n - 2]) / 2.0;
    return d;
}

PeakSet detect_peaks(const SignalSegment& signal, const PassBand& passband,
                     const PipelineConfig& config) {
    const auto& x = signal.samples;
    const std::vector<double> d = sobel_derivative(x);
    const std::size_t n = x.size();

    // Candidate peaks: derivative crosses from positive to non-positive;
    // take the larger of the two bracketing samples.
    std::vector<std::size_t> candidates;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (d[k] > 0.0 && d[k + 1] <= 0.0) {
            const std::size_t idx = (x[k + 1] > x[k]) ? k + 1 : k;
            if (candidates.empty() || candidates.back() != idx) candidates.push_back(idx);
        }
    }

    // Robust amplitude scale: sigma-consistent median absolute deviation.
    std::vector<double> absdev(n);
    const double med = median_of(x);
    for (std::size_t i = 0; i < n; ++i) absdev[i] = std::abs(x[i] - med);
    const double mad_scale = 1.4826 * median_of(std::move(absdev));
    const double threshold = config.peak_prominence_mad_scale * mad_scale;

    std::vector<std::size_t> prominent;
    prominent.reserve(candidates.size());
    for (std::size_t idx : candidates) {
        if (x[idx] - med >= threshold) prominent.push_back(idx);
    }

    std::size_t min_distance = 1;
    if (passband.high_hz > 0.0) {
        min_distance = static_cast<std::size_t>(std::max(
            1.0, std::floor(config.peak_min_distance_factor * signal.sample_rate_hz /
                            passband.high_hz)));
    }

    // Keep the strongest candidate within each exclusion window; equal
    // amplitudes keep the earlier index.
    std::vector<std::size_t> by_amplitude = prominent;
    std::stable_sort(by_amplitude.begin(), by_amplitude.end(),
                     [&x](std::size_t a, std::size_t b) {
                         if (x[a] != x[b]) return x[a] > x[b];
                         return a < b;
                     });
    std::vector<std::size_t> kept;
    for (std::size_t idx : by_amplitude) {
        bool blocked = false;
        for (std::size_t other : kept) {
            const std::size_t dist = idx > other ? idx - other : other - idx;
            if (dist < min_distance) {
                blocked = true;
                break;
            }
        }
        if (!blocked) kept.push_back(idx);
    }
    std::sort(kept.begin(), kept.end());

    if (kept.size() < 3) {
        throw Error(ErrorCode::insufficient_peaks,
                    "found " + std::to_string(kept.size()) + " peaks, need at least 3");
    }

    PeakSet peaks;
    peaks.min_distance_samples = min_distance;
    peaks.indices = std::move(kept);
    peaks.times_s.reserve(peaks.indices.size());
    peaks.amplitudes.reserve(peaks.indices.size());
    for (std::size_t idx : peaks.indices) {
        peaks.times_s.push_back(signal.start_time_s +
                                static_cast<double>(idx) / signal.sample_rate_hz);
        peaks.amplitudes.push_back(x[idx]);
    }
    return peaks;
}

} // namespace ppgq
