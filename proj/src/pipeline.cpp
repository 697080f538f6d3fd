// SPDX-License-Identifier: Apache-2.0
#include "ppgq/pipeline.hpp"

#include "ppgq/filter.hpp"
#include "ppgq/pca.hpp"
#include "ppgq/vitals.hpp"

namespace ppgq {

AssessmentResult assess_record(const SegmentRecord& record, const PipelineConfig& config,
                               const GradeThresholds& thresholds, bool keep_pseudo_clean) {
    AssessmentResult out;
    try {
        const auto violations = validate_record(record);
        if (!violations.empty()) {
            std::string codes;
            for (const auto& v : violations) {
                if (!codes.empty()) codes += ",";
                codes += to_string(v.code);
            }
            out.assessment = grade_segment(record.segment_id, std::nullopt, record.reference,
                                           thresholds, codes);
            return out;
        }

        const auto ihr = instantaneous_heart_rate(record.qrs);
        std::vector<double> bpm;
        bpm.reserve(ihr.size());
        for (const auto& p : ihr) bpm.push_back(p.bpm);
        const PassBand band = passband_from_ihr(bpm, config);

        const SignalSegment filtered = apply_bandpass(record.ppg, band);
        SignalSegment clean = refine(filtered, config);

        const VitalsEstimate estimate = estimate_vitals(clean, band, config);
        out.assessment =
            grade_segment(record.segment_id, estimate, record.reference, thresholds);
        if (keep_pseudo_clean) out.pseudo_clean = std::move(clean);
    } catch (const Error& e) {
        out.assessment = grade_segment(record.segment_id, std::nullopt, record.reference,
                                       thresholds, std::string(to_string(e.code())));
    }
    return out;
}

} // namespace ppgq
