// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"
#include "ppgq/filter.hpp"

#include <vector>

namespace ppgq {

struct PeakSet {
    std::vector<std::size_t> indices;  // strictly increasing sample indices
    std::vector<double> times_s;       // start_time_s + index / sample_rate_hz
    std::vector<double> amplitudes;    // signal value at each peak
    std::size_t min_distance_samples = 1;

    std::size_t size() const { return indices.size(); }
};

// Central-difference derivative, kernel (-1, 0, +1)/2, length preserving
// (one-sided halves at the ends).
std::vector<double> sobel_derivative(std::span<const double> samples);

// Systolic peak detection on the pseudo clean PPG: positive-to-negative
// zero crossings of the derivative, pruned by a robust prominence threshold
// and a minimum spacing derived from the passband's upper edge.
PeakSet detect_peaks(const SignalSegment& signal, const PassBand& passband,
                     const PipelineConfig& config = {});

} // namespace ppgq
