// SPDX-License-Identifier: Apache-2.0
#include "ppgq/core.hpp"

#include <cmath>

namespace ppgq {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::insufficient_annotations: return "insufficient_annotations";
        case ErrorCode::degenerate_passband: return "degenerate_passband";
        case ErrorCode::invalid_cutoff: return "invalid_cutoff";
        case ErrorCode::unstable_filter: return "unstable_filter";
        case ErrorCode::segment_too_short: return "segment_too_short";
        case ErrorCode::window_too_long: return "window_too_long";
        case ErrorCode::invalid_component_count: return "invalid_component_count";
        case ErrorCode::insufficient_peaks: return "insufficient_peaks";
        case ErrorCode::insufficient_span: return "insufficient_span";
        case ErrorCode::band_empty: return "band_empty";
        case ErrorCode::invalid_input: return "invalid_input";
        case ErrorCode::undefined_correlation: return "undefined_correlation";
        case ErrorCode::invalid_record: return "invalid_record";
        case ErrorCode::spec_error: return "spec_error";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::config_error: return "config_error";
        case ErrorCode::id_mismatch: return "id_mismatch";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown_error";
}

std::string_view to_string(ViolationCode code) noexcept {
    switch (code) {
        case ViolationCode::ppg_empty: return "ppg_empty";
        case ViolationCode::ppg_nonfinite: return "ppg_nonfinite";
        case ViolationCode::sample_rate_nonpositive: return "sample_rate_nonpositive";
        case ViolationCode::segment_duration_mismatch: return "segment_duration_mismatch";
        case ViolationCode::qrs_not_increasing: return "qrs_not_increasing";
        case ViolationCode::qrs_interval_out_of_bounds: return "qrs_interval_out_of_bounds";
        case ViolationCode::qrs_outside_segment: return "qrs_outside_segment";
        case ViolationCode::ref_hr_out_of_range: return "ref_hr_out_of_range";
        case ViolationCode::ref_rr_out_of_range: return "ref_rr_out_of_range";
    }
    return "unknown_violation";
}

std::vector<Violation> validate_record(const SegmentRecord& record) {
    std::vector<Violation> out;
    const auto add = [&out](ViolationCode code, std::string detail) {
        out.push_back(Violation{code, std::move(detail)});
    };

    const auto& ppg = record.ppg;
    if (ppg.samples.empty()) {
        add(ViolationCode::ppg_empty, "segment has no samples");
    }
    for (std::size_t i = 0; i < ppg.samples.size(); ++i) {
        if (!std::isfinite(ppg.samples[i])) {
            add(ViolationCode::ppg_nonfinite, "sample " + std::to_string(i) + " is not finite");
            break;
        }
    }
    if (!(ppg.sample_rate_hz > 0.0)) {
        add(ViolationCode::sample_rate_nonpositive,
            "sample_rate_hz = " + std::to_string(ppg.sample_rate_hz));
    } else if (!ppg.samples.empty()) {
        // One-minute contract with one sample period of slack.
        const double period = 1.0 / ppg.sample_rate_hz;
        const double duration = ppg.duration_s();
        if (std::abs(duration - kSegmentSeconds) > period + 1e-9) {
            add(ViolationCode::segment_duration_mismatch,
                "duration " + std::to_string(duration) + " s, expected " +
                    std::to_string(kSegmentSeconds) + " s");
        }
    }

    const auto& qrs = record.qrs.timepoints_s;
    bool increasing_ok = true;
    bool intervals_ok = true;
    for (std::size_t i = 1; i < qrs.size(); ++i) {
        const double d = qrs[i] - qrs[i - 1];
        if (d <= 0.0) {
            if (increasing_ok) {
                add(ViolationCode::qrs_not_increasing,
                    "timepoint " + std::to_string(i) + " does not increase");
                increasing_ok = false;
            }
        } else if (d <= kMinRrIntervalS || d >= kMaxRrIntervalS) {
            if (intervals_ok) {
                add(ViolationCode::qrs_interval_out_of_bounds,
                    "interval " + std::to_string(d) + " s at index " + std::to_string(i));
                intervals_ok = false;
            }
        }
    }
    if (!qrs.empty() && ppg.sample_rate_hz > 0.0) {
        const double lo = ppg.start_time_s - 1e-9;
        const double hi = ppg.start_time_s + ppg.duration_s() + 1e-9;
        for (std::size_t i = 0; i < qrs.size(); ++i) {
            if (qrs[i] < lo || qrs[i] > hi) {
                add(ViolationCode::qrs_outside_segment,
                    "timepoint " + std::to_string(qrs[i]) + " s outside segment");
                break;
            }
        }
    }

    const auto& ref = record.reference;
    if (!(ref.heart_rate_bpm >= 20.0 && ref.heart_rate_bpm <= 250.0)) {
        add(ViolationCode::ref_hr_out_of_range,
            "heart_rate_bpm = " + std::to_string(ref.heart_rate_bpm));
    }
    if (!(ref.respiration_rate_brpm >= 4.0 && ref.respiration_rate_brpm <= 60.0)) {
        add(ViolationCode::ref_rr_out_of_range,
            "respiration_rate_brpm = " + std::to_string(ref.respiration_rate_brpm));
    }
    return out;
}

std::vector<SignalSegment> segment_stream(std::span<const double> samples,
                                          double sample_rate_hz,
                                          double segment_seconds) {
    if (!(segment_seconds > 0.0) || !(sample_rate_hz > 0.0)) {
        throw Error(ErrorCode::invalid_input, "segment_seconds and sample_rate_hz must be positive");
    }
    const auto seg_len = static_cast<std::size_t>(std::llround(segment_seconds * sample_rate_hz));
    std::vector<SignalSegment> out;
    if (seg_len == 0 || samples.size() < seg_len) return out;

    const std::size_t count = samples.size() / seg_len;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SignalSegment seg;
        seg.sample_rate_hz = sample_rate_hz;
        seg.start_time_s = static_cast<double>(i * seg_len) / sample_rate_hz;
        seg.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(i * seg_len),
                           samples.begin() + static_cast<std::ptrdiff_t>((i + 1) * seg_len));
        out.push_back(std::move(seg));
    }
    return out;
}

} // namespace ppgq
