// SPDX-License-Identifier: Apache-2.0
#include "ppgq/io.hpp"

#include "ppgq/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace ppgq::io {

using nlohmann::json;

namespace {

json require_key(const json& obj, const char* key, std::size_t line_number) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_number) + ": missing key '" + key + "'");
    }
    return *it;
}

double require_number(const json& obj, const char* key, std::size_t line_number) {
    const json v = require_key(obj, key, line_number);
    if (!v.is_number()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_number) + ": key '" + key + "' is not a number");
    }
    return v.get<double>();
}

std::vector<double> require_number_array(const json& obj, const char* key,
                                         std::size_t line_number) {
    const json v = require_key(obj, key, line_number);
    if (!v.is_array()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_number) + ": key '" + key + "' is not an array");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw Error(ErrorCode::parse_error, "line " + std::to_string(line_number) + ": key '" +
                                                    key + "' has a non-numeric element");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

json parse_json_line(const std::string& line, std::size_t line_number) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_number) + ": not a JSON object");
    }
    return obj;
}

std::string grade_key(QualityGrade g) { return std::string(to_string(g)); }

QualityGrade grade_from_key(const std::string& key) {
    for (QualityGrade g : {QualityGrade::Level1High, QualityGrade::Level2High,
                           QualityGrade::Level3High, QualityGrade::LowQuality,
                           QualityGrade::Ungradable}) {
        if (key == to_string(g)) return g;
    }
    throw Error(ErrorCode::parse_error, "unknown grade '" + key + "'");
}

json estimate_to_json(const VitalsEstimate& e) {
    json j;
    j["heart_rate_bpm"] = e.heart_rate_bpm;
    if (e.rr_am) {
        j["rr_am_brpm"] = e.rr_am->rate_brpm;
        j["rr_am_low_confidence"] = e.rr_am->low_confidence;
    }
    if (e.rr_fm) {
        j["rr_fm_brpm"] = e.rr_fm->rate_brpm;
        j["rr_fm_low_confidence"] = e.rr_fm->low_confidence;
    }
    if (e.rr_fused_brpm) j["rr_fused_brpm"] = *e.rr_fused_brpm;
    return j;
}

VitalsEstimate estimate_from_json(const json& j) {
    VitalsEstimate e;
    e.heart_rate_bpm = j.at("heart_rate_bpm").get<double>();
    if (j.contains("rr_am_brpm")) {
        e.rr_am = RrEstimate{j["rr_am_brpm"].get<double>(),
                             j.value("rr_am_low_confidence", false)};
    }
    if (j.contains("rr_fm_brpm")) {
        e.rr_fm = RrEstimate{j["rr_fm_brpm"].get<double>(),
                             j.value("rr_fm_low_confidence", false)};
    }
    if (j.contains("rr_fused_brpm")) e.rr_fused_brpm = j["rr_fused_brpm"].get<double>();
    return e;
}

json assessment_to_json(const SegmentAssessment& a) {
    json j;
    j["segment_id"] = a.segment_id;
    j["grade"] = grade_key(a.grade);
    j["reference"] = {{"heart_rate_bpm", a.reference.heart_rate_bpm},
                      {"respiration_rate_brpm", a.reference.respiration_rate_brpm}};
    if (a.estimate) j["estimate"] = estimate_to_json(*a.estimate);
    if (a.hr_abs_error_bpm) j["hr_abs_error_bpm"] = *a.hr_abs_error_bpm;
    if (a.rr_abs_error_brpm) j["rr_abs_error_brpm"] = *a.rr_abs_error_brpm;
    if (!a.failure_reason.empty()) j["failure_reason"] = a.failure_reason;
    return j;
}

SegmentAssessment assessment_from_json(const json& j) {
    SegmentAssessment a;
    a.segment_id = j.at("segment_id").get<std::string>();
    a.grade = grade_from_key(j.at("grade").get<std::string>());
    const auto& ref = j.at("reference");
    a.reference.heart_rate_bpm = ref.at("heart_rate_bpm").get<double>();
    a.reference.respiration_rate_brpm = ref.at("respiration_rate_brpm").get<double>();
    if (j.contains("estimate")) a.estimate = estimate_from_json(j["estimate"]);
    if (j.contains("hr_abs_error_bpm")) a.hr_abs_error_bpm = j["hr_abs_error_bpm"].get<double>();
    if (j.contains("rr_abs_error_brpm")) {
        a.rr_abs_error_brpm = j["rr_abs_error_brpm"].get<double>();
    }
    a.failure_reason = j.value("failure_reason", "");
    return a;
}

json grade_stats_to_json(const GradeStats& s) {
    json j;
    j["count"] = s.count;
    j["portion_percent"] = s.portion_percent;
    if (s.hr_mae_bpm) j["hr_mae_bpm"] = *s.hr_mae_bpm;
    if (s.rr_mae_brpm) j["rr_mae_brpm"] = *s.rr_mae_brpm;
    return j;
}

GradeStats grade_stats_from_json(const json& j) {
    GradeStats s;
    s.count = j.at("count").get<std::size_t>();
    s.portion_percent = j.at("portion_percent").get<double>();
    if (j.contains("hr_mae_bpm")) s.hr_mae_bpm = j["hr_mae_bpm"].get<double>();
    if (j.contains("rr_mae_brpm")) s.rr_mae_brpm = j["rr_mae_brpm"].get<double>();
    return s;
}

json cohort_to_json(const CohortReport& c) {
    json grades;
    grades["level1_high"] = grade_stats_to_json(c.level1);
    grades["level2_high"] = grade_stats_to_json(c.level2);
    grades["level3_high"] = grade_stats_to_json(c.level3);
    grades["low_quality"] = grade_stats_to_json(c.low);
    grades["ungradable"] = grade_stats_to_json(c.ungradable);

    json j;
    j["total"] = c.total;
    j["agreement_bound_bpm"] = c.agreement_bound_bpm;
    j["grades"] = grades;
    j["high_quality"] = grade_stats_to_json(c.high_quality);
    json overall;
    if (c.pearson_r) overall["pearson_r"] = *c.pearson_r;
    if (c.bland_altman_hr) {
        overall["bland_altman"] = {{"bias", c.bland_altman_hr->bias},
                                   {"loa_low", c.bland_altman_hr->loa_low},
                                   {"loa_high", c.bland_altman_hr->loa_high},
                                   {"within_bound_percent",
                                    c.bland_altman_hr->within_bound_percent}};
    }
    j["overall"] = overall;
    return j;
}

CohortReport cohort_from_json(const json& j) {
    CohortReport c;
    c.total = j.at("total").get<std::size_t>();
    c.agreement_bound_bpm = j.at("agreement_bound_bpm").get<double>();
    const auto& grades = j.at("grades");
    c.level1 = grade_stats_from_json(grades.at("level1_high"));
    c.level2 = grade_stats_from_json(grades.at("level2_high"));
    c.level3 = grade_stats_from_json(grades.at("level3_high"));
    c.low = grade_stats_from_json(grades.at("low_quality"));
    c.ungradable = grade_stats_from_json(grades.at("ungradable"));
    c.high_quality = grade_stats_from_json(j.at("high_quality"));
    const auto& overall = j.at("overall");
    if (overall.contains("pearson_r")) c.pearson_r = overall["pearson_r"].get<double>();
    if (overall.contains("bland_altman")) {
        const auto& ba = overall["bland_altman"];
        c.bland_altman_hr = BlandAltman{ba.at("bias").get<double>(),
                                        ba.at("loa_low").get<double>(),
                                        ba.at("loa_high").get<double>(),
                                        ba.at("within_bound_percent").get<double>()};
    }
    return c;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

} // namespace

SegmentRecord parse_record_line(const std::string& line, std::size_t line_number) {
    const json obj = parse_json_line(line, line_number);

    SegmentRecord rec;
    const json id = require_key(obj, "segment_id", line_number);
    if (!id.is_string()) {
        throw Error(ErrorCode::parse_error,
                    "line " + std::to_string(line_number) + ": key 'segment_id' is not a string");
    }
    rec.segment_id = id.get<std::string>();
    rec.ppg.sample_rate_hz = require_number(obj, "sample_rate_hz", line_number);
    rec.ppg.start_time_s = require_number(obj, "start_time_s", line_number);
    rec.ppg.samples = require_number_array(obj, "ppg", line_number);
    rec.qrs.timepoints_s = require_number_array(obj, "qrs_times_s", line_number);
    rec.reference.heart_rate_bpm = require_number(obj, "ref_hr_bpm", line_number);
    rec.reference.respiration_rate_brpm = require_number(obj, "ref_rr_brpm", line_number);
    return rec;
}

std::vector<SegmentRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::vector<SegmentRecord> records;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(parse_record_line(line, line_number));
    }
    return records;
}

std::string serialize_record(const SegmentRecord& record) {
    json j;
    j["segment_id"] = record.segment_id;
    j["sample_rate_hz"] = record.ppg.sample_rate_hz;
    j["start_time_s"] = record.ppg.start_time_s;
    j["ppg"] = record.ppg.samples;
    j["qrs_times_s"] = record.qrs.timepoints_s;
    j["ref_hr_bpm"] = record.reference.heart_rate_bpm;
    j["ref_rr_brpm"] = record.reference.respiration_rate_brpm;
    return j.dump();
}

void write_records(const std::filesystem::path& path,
                   const std::vector<SegmentRecord>& records) {
    std::ofstream out = open_output(path);
    for (const auto& r : records) out << serialize_record(r) << '\n';
}

std::string serialize_report(const Report& report) {
    json segments = json::array();
    for (const auto& a : report.segments) segments.push_back(assessment_to_json(a));

    json j;
    j["segments"] = segments;
    j["cohort"] = cohort_to_json(report.cohort);
    j["thresholds"] = {{"level1_bpm", report.thresholds.level1_bpm},
                       {"level2_bpm", report.thresholds.level2_bpm},
                       {"level3_bpm", report.thresholds.level3_bpm}};
    return j.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::parse_error, "report is not a JSON object");
    }
    Report report;
    try {
        for (const auto& seg : j.at("segments")) {
            report.segments.push_back(assessment_from_json(seg));
        }
        report.cohort = cohort_from_json(j.at("cohort"));
        const auto& thr = j.at("thresholds");
        report.thresholds.level1_bpm = thr.at("level1_bpm").get<double>();
        report.thresholds.level2_bpm = thr.at("level2_bpm").get<double>();
        report.thresholds.level3_bpm = thr.at("level3_bpm").get<double>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("malformed report: ") + e.what());
    }
    return report;
}

Report read_report(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_report(buffer.str());
}

Report run_process(const std::filesystem::path& input, const std::filesystem::path& output,
                   const ProcessOptions& options) {
    std::vector<SegmentRecord> records = read_records(input);
    if (records.empty()) {
        throw Error(ErrorCode::parse_error, "no records in '" + input.string() + "'");
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const SegmentRecord& a, const SegmentRecord& b) {
                         return a.segment_id < b.segment_id;
                     });

    const bool emit_clean = options.emit_clean_path.has_value();
    std::ofstream clean_out;
    if (emit_clean) clean_out = open_output(*options.emit_clean_path);

    Report report;
    report.thresholds = options.thresholds;
    report.segments.reserve(records.size());
    for (const auto& rec : records) {
        AssessmentResult result =
            assess_record(rec, options.config, options.thresholds, emit_clean);
        if (emit_clean && result.pseudo_clean) {
            json j;
            j["segment_id"] = rec.segment_id;
            j["sample_rate_hz"] = result.pseudo_clean->sample_rate_hz;
            j["start_time_s"] = result.pseudo_clean->start_time_s;
            j["pseudo_clean"] = result.pseudo_clean->samples;
            clean_out << j.dump() << '\n';
        }
        report.segments.push_back(std::move(result.assessment));
    }
    report.cohort = cohort_report(report.segments, options.agreement_bound_bpm);

    std::ofstream out = open_output(output);
    out << serialize_report(report);
    return report;
}

void run_synth(const std::filesystem::path& output, const SynthOptions& options) {
    if (options.hr_list_bpm.empty() || options.rr_list_brpm.empty()) {
        throw Error(ErrorCode::config_error, "empty HR or RR grid");
    }
    std::vector<synth::SynthSpec> specs;
    specs.reserve(options.hr_list_bpm.size() * options.rr_list_brpm.size());
    for (double hr : options.hr_list_bpm) {
        for (double rr : options.rr_list_brpm) {
            synth::SynthSpec spec;
            spec.duration_s = options.duration_s;
            spec.sample_rate_hz = options.sample_rate_hz;
            spec.heart_rate_bpm = hr;
            spec.respiration_rate_brpm = rr;
            spec.am_depth = options.am_depth;
            spec.fm_depth_s = options.fm_depth_s;
            spec.pulse_shape = options.pulse_shape;
            spec.noise = options.noise;
            spec.seed = options.seed + specs.size();
            specs.push_back(spec);
        }
    }
    const std::vector<synth::SynthRecord> generated = synth::corpus(specs);

    std::ofstream out = open_output(output);
    std::ofstream truth_out;
    if (options.truth_path) truth_out = open_output(*options.truth_path);
    for (const auto& g : generated) {
        out << serialize_record(g.record) << '\n';
        if (options.truth_path) {
            json j;
            j["segment_id"] = g.record.segment_id;
            j["heart_rate_bpm"] = g.truth.heart_rate_bpm;
            j["respiration_rate_brpm"] = g.truth.respiration_rate_brpm;
            j["beat_count"] = g.truth.beat_times_s.size();
            truth_out << j.dump() << '\n';
        }
    }
}

Report run_grade(const std::filesystem::path& estimates, const std::filesystem::path& output,
                 const GradeOptions& options) {
    Report previous = read_report(estimates);
    if (previous.segments.empty()) {
        throw Error(ErrorCode::parse_error, "report has no segments");
    }

    std::map<std::string, VitalReference> replacements;
    if (options.references_path) {
        std::ifstream in = open_input(*options.references_path);
        std::string line;
        std::size_t line_number = 0;
        while (std::getline(in, line)) {
            ++line_number;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const json obj = parse_json_line(line, line_number);
            const json id = require_key(obj, "segment_id", line_number);
            VitalReference ref;
            ref.heart_rate_bpm = require_number(obj, "ref_hr_bpm", line_number);
            ref.respiration_rate_brpm = require_number(obj, "ref_rr_brpm", line_number);
            replacements[id.get<std::string>()] = ref;
        }
        std::string missing;
        for (const auto& seg : previous.segments) {
            if (replacements.find(seg.segment_id) == replacements.end()) {
                if (!missing.empty()) missing += ", ";
                missing += seg.segment_id;
            }
        }
        if (!missing.empty()) {
            throw Error(ErrorCode::id_mismatch, "references missing for: " + missing);
        }
    }

    Report regraded;
    regraded.thresholds = options.thresholds;
    regraded.segments.reserve(previous.segments.size());
    for (const auto& seg : previous.segments) {
        VitalReference ref = seg.reference;
        if (options.references_path) ref = replacements.at(seg.segment_id);
        regraded.segments.push_back(grade_segment(seg.segment_id, seg.estimate, ref,
                                                  options.thresholds, seg.failure_reason));
    }
    regraded.cohort = cohort_report(regraded.segments, options.agreement_bound_bpm);

    std::ofstream out = open_output(output);
    out << serialize_report(regraded);
    return regraded;
}

namespace {

std::string format_stats_row(const std::string& name, const GradeStats& s) {
    char buf[160];
    const auto fmt = [](const std::optional<double>& v) {
        if (!v) return std::string("     -");
        char b[32];
        std::snprintf(b, sizeof(b), "%6.2f", *v);
        return std::string(b);
    };
    std::snprintf(buf, sizeof(buf), "%-18s %8zu %9.2f%%   %s   %s\n", name.c_str(), s.count,
                  s.portion_percent, fmt(s.hr_mae_bpm).c_str(), fmt(s.rr_mae_brpm).c_str());
    return buf;
}

} // namespace

PipelineConfig parse_config_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error(ErrorCode::config_error, "config is not a JSON object");
    }
    PipelineConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "window") cfg.window_len_n = value.get<int>();
            else if (key == "stride") cfg.stride_t = value.get<int>();
            else if (key == "components") cfg.num_components_p = value.get<int>();
            else if (key == "margin_hz") cfg.passband_margin_hz = value.get<double>();
            else if (key == "floor_hz") cfg.passband_floor_hz = value.get<double>();
            else if (key == "ceil_hz") cfg.passband_ceil_hz = value.get<double>();
            else if (key == "gaussian_sigma_samples") cfg.gaussian_sigma_samples = value.get<double>();
            else if (key == "resample_rate_hz") cfg.resample_rate_hz = value.get<double>();
            else if (key == "rr_band_brpm") {
                if (!value.is_array() || value.size() != 2) {
                    throw Error(ErrorCode::config_error, "rr_band_brpm must be [low, high]");
                }
                cfg.rr_band_brpm.low_brpm = value[0].get<double>();
                cfg.rr_band_brpm.high_brpm = value[1].get<double>();
            } else if (key == "peak_min_distance_factor") {
                cfg.peak_min_distance_factor = value.get<double>();
            } else if (key == "peak_prominence_mad_scale") {
                cfg.peak_prominence_mad_scale = value.get<double>();
            } else if (key == "window_bound_exclusive") {
                cfg.window_bound_exclusive = value.get<bool>();
            } else {
                throw Error(ErrorCode::config_error, "unknown config key '" + key + "'");
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::config_error,
                        "bad value for config key '" + key + "': " + e.what());
        }
    }
    if (cfg.window_len_n < 1 || cfg.stride_t < 1 || cfg.num_components_p < 1 ||
        cfg.passband_margin_hz < 0.0 || !(cfg.passband_floor_hz > 0.0) ||
        !(cfg.passband_ceil_hz > cfg.passband_floor_hz) ||
        !(cfg.gaussian_sigma_samples > 0.0) || !(cfg.resample_rate_hz > 0.0) ||
        !(cfg.rr_band_brpm.low_brpm < cfg.rr_band_brpm.high_brpm)) {
        throw Error(ErrorCode::config_error, "configuration values out of range");
    }
    return cfg;
}

PipelineConfig read_config(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string run_report(const std::filesystem::path& report_path, const ReportOptions& options) {
    const Report report = read_report(report_path);

    if (options.correlation_path) {
        std::ofstream out = open_output(*options.correlation_path);
        out << "ref_hr_bpm\test_hr_bpm\n";
        for (const auto& seg : report.segments) {
            if (!seg.estimate) continue;
            out << seg.reference.heart_rate_bpm << '\t' << seg.estimate->heart_rate_bpm << '\n';
        }
    }
    if (options.bland_altman_path) {
        std::ofstream out = open_output(*options.bland_altman_path);
        out << "mean_bpm\tdiff_bpm\n";
        for (const auto& seg : report.segments) {
            if (!seg.estimate) continue;
            const double est = seg.estimate->heart_rate_bpm;
            const double ref = seg.reference.heart_rate_bpm;
            out << (est + ref) / 2.0 << '\t' << (est - ref) << '\n';
        }
    }

    std::string text;
    text += "quality group         count    portion   HR MAE   RR MAE\n";
    text += format_stats_row("level1_high", report.cohort.level1);
    text += format_stats_row("level2_high", report.cohort.level2);
    text += format_stats_row("level3_high", report.cohort.level3);
    text += format_stats_row("low_quality", report.cohort.low);
    text += format_stats_row("ungradable", report.cohort.ungradable);
    text += format_stats_row("high_quality(all)", report.cohort.high_quality);
    if (report.cohort.pearson_r) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "pearson_r: %.4f\n", *report.cohort.pearson_r);
        text += buf;
    }
    if (report.cohort.bland_altman_hr) {
        const auto& ba = *report.cohort.bland_altman_hr;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "bland-altman: bias %.3f, loa [%.3f, %.3f], within %.0f BPM: %.2f%%\n",
                      ba.bias, ba.loa_low, ba.loa_high, report.cohort.agreement_bound_bpm,
                      ba.within_bound_percent);
        text += buf;
    }
    return text;
}

} // namespace ppgq::io
