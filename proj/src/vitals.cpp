// SPDX-License-Identifier: Apache-2.0
#include "ppgq/vitals.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace ppgq {

namespace {

constexpr double kPi = std::numbers::pi;

// Iterative radix-2 Cooley-Tukey, in place, size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

double median_magnitude(std::vector<double> mags) {
    const std::size_t n = mags.size();
    auto mid = mags.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(mags.begin(), mid, mags.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(mags.begin(), mid);
    return (lo + hi) / 2.0;
}

} // namespace

double heart_rate_from_peaks(const PeakSet& peaks) {
    if (peaks.size() < 3) {
        throw Error(ErrorCode::insufficient_peaks,
                    "heart rate needs at least 3 peaks, got " + std::to_string(peaks.size()));
    }
    const double span = peaks.times_s.back() - peaks.times_s.front();
    const double mean_interval = span / static_cast<double>(peaks.size() - 1);
    return 60.0 / mean_interval;
}

std::vector<double> resample_to_grid(const ModulationSeries& series, double rate_hz,
                                     double duration_s) {
    const auto& t = series.times_s;
    const auto& v = series.values;
    if (t.size() != v.size()) {
        throw Error(ErrorCode::invalid_input, "times and values lengths differ");
    }
    if (t.size() < 4 || t.back() - t.front() < 10.0) {
        throw Error(ErrorCode::insufficient_span,
                    "need at least 4 points spanning 10 s, got " + std::to_string(t.size()) +
                        " points over " +
                        std::to_string(t.empty() ? 0.0 : t.back() - t.front()) + " s");
    }
    if (!(rate_hz > 0.0) || !(duration_s > 0.0)) {
        throw Error(ErrorCode::invalid_input, "rate and duration must be positive");
    }

    const auto count = static_cast<std::size_t>(std::floor(duration_s * rate_hz + 1e-9)) + 1;
    std::vector<double> grid(count);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double gt = static_cast<double>(i) / rate_hz;
        if (gt <= t.front()) {
            grid[i] = v.front();
        } else if (gt >= t.back()) {
            grid[i] = v.back();
        } else {
            while (t[seg + 1] < gt) ++seg;
            const double w = (gt - t[seg]) / (t[seg + 1] - t[seg]);
            grid[i] = v[seg] + w * (v[seg + 1] - v[seg]);
        }
    }

    double mean = 0.0;
    for (double g : grid) mean += g;
    mean /= static_cast<double>(count);
    for (double& g : grid) g -= mean;
    return grid;
}

SpectralPeak spectral_peak_brpm(std::span<const double> grid_series, double rate_hz,
                                const RrBand& band) {
    if (grid_series.empty()) {
        throw Error(ErrorCode::invalid_input, "empty series");
    }
    if (!(band.low_brpm < band.high_brpm)) {
        throw Error(ErrorCode::invalid_input, "invalid respiration band");
    }

    const std::size_t nfft = next_pow2(std::max<std::size_t>(16 * grid_series.size(), 16));
    std::vector<std::complex<double>> buf(nfft, std::complex<double>(0.0, 0.0));
    for (std::size_t i = 0; i < grid_series.size(); ++i) buf[i] = grid_series[i];
    fft_inplace(buf);

    const double f_lo = band.low_brpm / 60.0;
    const double f_hi = band.high_brpm / 60.0;
    const double bin_hz = rate_hz / static_cast<double>(nfft);
    const auto k_lo = static_cast<std::size_t>(std::ceil(f_lo / bin_hz - 1e-9));
    const auto k_hi_raw = static_cast<std::size_t>(std::floor(f_hi / bin_hz + 1e-9));
    const std::size_t k_hi = std::min(k_hi_raw, nfft / 2);
    if (k_lo > k_hi) {
        throw Error(ErrorCode::band_empty, "no spectral bin inside the respiration band");
    }

    std::vector<double> mags;
    mags.reserve(k_hi - k_lo + 1);
    std::size_t best = k_lo;
    double best_mag = -1.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double mag = std::abs(buf[k]);
        mags.push_back(mag);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }

    SpectralPeak out;
    out.rate_brpm = 60.0 * static_cast<double>(best) * bin_hz;
    const double med = median_magnitude(std::move(mags));
    out.peak_to_median = (best_mag <= 0.0) ? 0.0
                         : (med > 0.0)     ? best_mag / med
                                           : std::numeric_limits<double>::infinity();
    return out;
}

RrEstimate respiration_am(const PeakSet& peaks, double duration_s, const PipelineConfig& config) {
    ModulationSeries series{peaks.times_s, peaks.amplitudes};
    const auto grid = resample_to_grid(series, config.resample_rate_hz, duration_s);
    const SpectralPeak peak = spectral_peak_brpm(grid, config.resample_rate_hz, config.rr_band_brpm);
    return RrEstimate{peak.rate_brpm, peak.low_confidence()};
}

RrEstimate respiration_fm(const PeakSet& peaks, double duration_s, const PipelineConfig& config) {
    if (peaks.size() < 5) {
        throw Error(ErrorCode::insufficient_peaks,
                    "tachogram needs at least 5 peaks, got " + std::to_string(peaks.size()));
    }
    ModulationSeries tachogram;
    tachogram.times_s.reserve(peaks.size() - 1);
    tachogram.values.reserve(peaks.size() - 1);
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        tachogram.times_s.push_back((peaks.times_s[i] + peaks.times_s[i - 1]) / 2.0);
        tachogram.values.push_back(peaks.times_s[i] - peaks.times_s[i - 1]);
    }
    const auto grid = resample_to_grid(tachogram, config.resample_rate_hz, duration_s);
    const SpectralPeak peak = spectral_peak_brpm(grid, config.resample_rate_hz, config.rr_band_brpm);
    return RrEstimate{peak.rate_brpm, peak.low_confidence()};
}

VitalsEstimate estimate_vitals(const SignalSegment& pseudo_clean, const PassBand& passband,
                               const PipelineConfig& config) {
    const PeakSet peaks = detect_peaks(pseudo_clean, passband, config);

    VitalsEstimate est;
    est.heart_rate_bpm = heart_rate_from_peaks(peaks);

    const double duration = pseudo_clean.duration_s();
    // The beat times are relative to the segment start for resampling.
    PeakSet relative = peaks;
    for (double& t : relative.times_s) t -= pseudo_clean.start_time_s;

    try {
        est.rr_am = respiration_am(relative, duration, config);
    } catch (const Error&) {
        est.rr_am.reset();
    }
    try {
        est.rr_fm = respiration_fm(relative, duration, config);
    } catch (const Error&) {
        est.rr_fm.reset();
    }

    if (est.rr_am && est.rr_fm) {
        est.rr_fused_brpm = (est.rr_am->rate_brpm + est.rr_fm->rate_brpm) / 2.0;
    } else if (est.rr_am) {
        est.rr_fused_brpm = est.rr_am->rate_brpm;
    } else if (est.rr_fm) {
        est.rr_fused_brpm = est.rr_fm->rate_brpm;
    }
    return est;
}

} // namespace ppgq
