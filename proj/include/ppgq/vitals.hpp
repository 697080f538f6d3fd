// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"
#include "ppgq/filter.hpp"
#include "ppgq/peaks.hpp"

#include <optional>
#include <vector>

namespace ppgq {

// One value per beat at irregular beat times: peak amplitude for the AM
// modality, inter-beat interval for the FM modality.
struct ModulationSeries {
    std::vector<double> times_s;
    std::vector<double> values;
};

struct SpectralPeak {
    double rate_brpm = 0.0;
    // Peak magnitude over the median in-band magnitude; < 2 marks the
    // spectrum as noise-floor-like. Annotation only, never changes values.
    double peak_to_median = 0.0;

    bool low_confidence() const { return peak_to_median < 2.0; }
};

struct RrEstimate {
    double rate_brpm = 0.0;
    bool low_confidence = false;
};

struct VitalsEstimate {
    double heart_rate_bpm = 0.0;
    std::optional<RrEstimate> rr_am;
    std::optional<RrEstimate> rr_fm;
    std::optional<double> rr_fused_brpm; // mean of the present AM/FM rates
};

// 60 / mean inter-peak interval; requires at least 3 peaks.
double heart_rate_from_peaks(const PeakSet& peaks);

// Linear interpolation onto the grid 0, 1/rate, ..., duration; nearest-value
// hold outside the observed span; mean removed before return. Requires at
// least 4 points spanning at least 10 s.
std::vector<double> resample_to_grid(const ModulationSeries& series, double rate_hz,
                                     double duration_s);

// Magnitude-spectrum argmax restricted to the band, on an FFT zero-padded to
// at least 16x the input length (power of two). Ties break toward the lower
// frequency.
SpectralPeak spectral_peak_brpm(std::span<const double> grid_series, double rate_hz,
                                const RrBand& band);

RrEstimate respiration_am(const PeakSet& peaks, double duration_s, const PipelineConfig& config);
RrEstimate respiration_fm(const PeakSet& peaks, double duration_s, const PipelineConfig& config);

// Peak detection + heart rate + AM/FM respiration with mean fusion.
// Throws ErrorCode::insufficient_peaks when the segment has no usable
// pulses; a failed AM or FM modality alone just leaves that field empty.
VitalsEstimate estimate_vitals(const SignalSegment& pseudo_clean, const PassBand& passband,
                               const PipelineConfig& config);

} // namespace ppgq
