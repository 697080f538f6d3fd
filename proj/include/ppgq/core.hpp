// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppgq {

// Error codes are stable identifiers; CLI output and per-record failure
// reasons carry them verbatim.
enum class ErrorCode {
    insufficient_annotations,
    degenerate_passband,
    invalid_cutoff,
    unstable_filter,
    segment_too_short,
    window_too_long,
    invalid_component_count,
    insufficient_peaks,
    insufficient_span,
    band_empty,
    invalid_input,
    undefined_correlation,
    invalid_record,
    spec_error,
    parse_error,
    config_error,
    id_mismatch,
    io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// A uniformly sampled scalar time series. Raw, band-passed and pseudo clean
// PPG all travel in this shape.
struct SignalSegment {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

// QRS-complex timepoints for one segment, same clock as the PPG.
struct QrsAnnotations {
    std::vector<double> timepoints_s;
};

// Chest-derived one-minute averages, the ground truth a segment is graded
// against.
struct VitalReference {
    double heart_rate_bpm = 0.0;
    double respiration_rate_brpm = 0.0;
};

struct RrBand {
    double low_brpm = 10.0;
    double high_brpm = 50.0;
};

struct PipelineConfig {
    int window_len_n = 400;
    int stride_t = 5;
    int num_components_p = 30;
    // The band must keep the respiratory modulation sidebands of the cardiac
    // fundamental (up to ~0.5 Hz for normal breathing) while still excluding
    // the second cardiac harmonic at low heart rates.
    double passband_margin_hz = 0.55;
    double passband_floor_hz = 0.5;
    double passband_ceil_hz = 4.0;
    double gaussian_sigma_samples = 2.0;
    double resample_rate_hz = 4.0;
    RrBand rr_band_brpm{};
    // Peak detection knobs; defaults detect clean synthetic pulses at
    // 40-200 BPM without misses.
    double peak_min_distance_factor = 0.8;
    double peak_prominence_mad_scale = 0.25;
    // When true the last sliding window is dropped whenever the final window
    // would end exactly at the signal boundary (exclusive end bound).
    bool window_bound_exclusive = false;
};

struct SegmentRecord {
    std::string segment_id;
    SignalSegment ppg;
    QrsAnnotations qrs;
    VitalReference reference;
};

enum class ViolationCode {
    ppg_empty,
    ppg_nonfinite,
    sample_rate_nonpositive,
    segment_duration_mismatch,
    qrs_not_increasing,
    qrs_interval_out_of_bounds,
    qrs_outside_segment,
    ref_hr_out_of_range,
    ref_rr_out_of_range,
};

std::string_view to_string(ViolationCode code) noexcept;

struct Violation {
    ViolationCode code;
    std::string detail;
};

// Physiological R-R plausibility bounds, open interval in seconds.
inline constexpr double kMinRrIntervalS = 0.2;
inline constexpr double kMaxRrIntervalS = 3.0;

// Segment contract: one minute, with one sample period of slack for clock
// rounding in real recordings.
inline constexpr double kSegmentSeconds = 60.0;

// Returns one entry per violated invariant (empty means processable).
// Violations are data, not failures; the function never throws.
std::vector<Violation> validate_record(const SegmentRecord& record);

// Cuts a long sample stream into consecutive non-overlapping segments of
// round(segment_seconds * sample_rate_hz) samples. A trailing remainder
// shorter than one segment is dropped. Segment start times count from 0.
std::vector<SignalSegment> segment_stream(std::span<const double> samples,
                                          double sample_rate_hz,
                                          double segment_seconds);

} // namespace ppgq
