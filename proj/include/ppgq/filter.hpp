// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"

#include <vector>

namespace ppgq {

struct PassBand {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

struct SosSection {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0; // a0 normalized to 1
};

// A designed IIR filter. Evaluation always runs on the second-order
// sections; the expanded numerator/denominator polynomials are a view for
// inspection only (the 5th-order narrowband expansion is ill-conditioned
// at 25 Hz and must not be used to filter).
struct IirFilter {
    std::vector<SosSection> sections;
    std::vector<double> numerator;   // b, same order as denominator
    std::vector<double> denominator; // a, leading coefficient 1
    int order = 0;

    // Largest pole magnitude across sections; < 1 for any filter this
    // module constructs.
    double max_pole_magnitude() const;
};

struct IhrPoint {
    double time_s = 0.0;
    double bpm = 0.0;
};

// Per R-R interval instantaneous heart rate, stamped at interval midpoints.
// Output length = number of timepoints - 1.
std::vector<IhrPoint> instantaneous_heart_rate(const QrsAnnotations& qrs);

// Band from the instantaneous heart rate range, widened by the configured
// margin and clamped to [floor, ceil].
PassBand passband_from_ihr(std::span<const double> ihr_bpm, const PipelineConfig& config);

// 5th-order digital Butterworth designs via analog prototype + bilinear
// transform with frequency pre-warping.
IirFilter design_butterworth_lowpass(double cutoff_hz, double sample_rate_hz);
IirFilter design_butterworth_highpass(double cutoff_hz, double sample_rate_hz);

// |H(e^{j 2 pi f / fs})| evaluated on the second-order sections.
double magnitude_response(const IirFilter& filter, double freq_hz, double sample_rate_hz);

// Zero-phase forward-backward filtering with odd-reflection edge padding of
// 3*(order+1) samples per side and steady-state initial conditions. The
// effective magnitude response is |H|^2; the phase response is zero.
SignalSegment filtfilt(const IirFilter& filter, const SignalSegment& signal);
std::vector<double> filtfilt(const IirFilter& filter, std::span<const double> samples);

// Full band-pass stage: instantaneous heart rate -> passband -> cascaded
// low-pass and high-pass filtfilt. Requires a record that passes
// validate_record.
SignalSegment bandpass_segment(const SegmentRecord& record, const PipelineConfig& config);

// The cascade applied to an already-chosen band (used by the pipeline,
// which needs the band again for peak detection).
SignalSegment apply_bandpass(const SignalSegment& signal, const PassBand& band);

} // namespace ppgq
