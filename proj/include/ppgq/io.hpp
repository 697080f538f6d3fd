// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"
#include "ppgq/quality.hpp"
#include "ppgq/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ppgq::io {

// -------------------------------------------------------------------------
// Record files: one JSON object per line with keys segment_id,
// sample_rate_hz, start_time_s, ppg, qrs_times_s, ref_hr_bpm, ref_rr_brpm.
// Unknown keys are ignored; a missing required key raises a parse error
// naming line and key.
// -------------------------------------------------------------------------

SegmentRecord parse_record_line(const std::string& line, std::size_t line_number);
std::vector<SegmentRecord> read_records(const std::filesystem::path& path);
std::string serialize_record(const SegmentRecord& record);
void write_records(const std::filesystem::path& path, const std::vector<SegmentRecord>& records);

// -------------------------------------------------------------------------
// Report files: a single JSON document with a per-segment array and the
// cohort summary. Finite values survive a parse/serialize round trip.
// -------------------------------------------------------------------------

struct Report {
    std::vector<SegmentAssessment> segments;
    CohortReport cohort;
    GradeThresholds thresholds;
};

std::string serialize_report(const Report& report);
Report parse_report(const std::string& text);
Report read_report(const std::filesystem::path& path);

// -------------------------------------------------------------------------
// Command implementations. These throw ppgq::Error; the CLI maps error
// codes onto exit statuses.
// -------------------------------------------------------------------------

struct ProcessOptions {
    PipelineConfig config{};
    GradeThresholds thresholds{};
    double agreement_bound_bpm = 10.0;
    std::optional<std::filesystem::path> emit_clean_path;
};

// validate -> band-pass -> refine -> vitals -> grade for every record;
// per-record failures become Ungradable entries, and the output is sorted
// by segment id so identical corpora produce identical bytes.
Report run_process(const std::filesystem::path& input, const std::filesystem::path& output,
                   const ProcessOptions& options);

struct SynthOptions {
    std::vector<double> hr_list_bpm{72.0};
    std::vector<double> rr_list_brpm{15.0};
    double duration_s = 60.0;
    double sample_rate_hz = 25.0;
    double am_depth = 0.2;
    double fm_depth_s = 0.05;
    synth::PulseShape pulse_shape = synth::PulseShape::gaussian_pulse_train;
    synth::NoiseSpec noise{};
    std::uint64_t seed = 1;
    std::optional<std::filesystem::path> truth_path;
};

// Writes the HR x RR grid corpus plus an optional ground-truth sidecar.
void run_synth(const std::filesystem::path& output, const SynthOptions& options);

struct GradeOptions {
    GradeThresholds thresholds{};
    double agreement_bound_bpm = 10.0;
    std::optional<std::filesystem::path> references_path;
};

// Regrades the per-segment estimates of an existing report, optionally
// against replacement references ({segment_id, ref_hr_bpm, ref_rr_brpm}
// JSON lines). Missing ids raise id_mismatch.
Report run_grade(const std::filesystem::path& estimates, const std::filesystem::path& output,
                 const GradeOptions& options);

struct ReportOptions {
    std::optional<std::filesystem::path> correlation_path;  // ref_hr <tab> est_hr
    std::optional<std::filesystem::path> bland_altman_path; // mean <tab> diff
};

// Renders a report as a human-readable table and optional plot-data files.
std::string run_report(const std::filesystem::path& report_path, const ReportOptions& options);

// Pipeline configuration as a JSON object; unknown keys are rejected so
// typos fail loudly. Flags override file values override built-in defaults.
PipelineConfig parse_config_json(const std::string& text);
PipelineConfig read_config(const std::filesystem::path& path);

} // namespace ppgq::io
