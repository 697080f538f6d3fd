// SPDX-License-Identifier: Apache-2.0
#include "ppgq/quality.hpp"

#include "ppgq/kernels.hpp"

#include <cmath>

namespace ppgq {

std::string_view to_string(QualityGrade grade) noexcept {
    switch (grade) {
        case QualityGrade::Level1High: return "level1_high";
        case QualityGrade::Level2High: return "level2_high";
        case QualityGrade::Level3High: return "level3_high";
        case QualityGrade::LowQuality: return "low_quality";
        case QualityGrade::Ungradable: return "ungradable";
    }
    return "unknown";
}

double mae(std::span<const double> estimates, std::span<const double> references) {
    if (estimates.empty() || estimates.size() != references.size()) {
        throw Error(ErrorCode::invalid_input,
                    "mae needs equal non-empty sequences (" + std::to_string(estimates.size()) +
                        " vs " + std::to_string(references.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        acc += std::abs(references[i] - estimates[i]);
    }
    return acc / static_cast<double>(estimates.size());
}

QualityGrade grade_from_error(double hr_abs_error_bpm, const GradeThresholds& thresholds) {
    if (hr_abs_error_bpm <= thresholds.level1_bpm) return QualityGrade::Level1High;
    if (hr_abs_error_bpm <= thresholds.level2_bpm) return QualityGrade::Level2High;
    if (hr_abs_error_bpm <= thresholds.level3_bpm) return QualityGrade::Level3High;
    return QualityGrade::LowQuality;
}

SegmentAssessment grade_segment(const std::string& segment_id,
                                const std::optional<VitalsEstimate>& estimate,
                                const VitalReference& reference,
                                const GradeThresholds& thresholds,
                                const std::string& failure_reason) {
    SegmentAssessment a;
    a.segment_id = segment_id;
    a.estimate = estimate;
    a.reference = reference;
    a.failure_reason = failure_reason;
    if (!estimate) {
        a.grade = QualityGrade::Ungradable;
        return a;
    }
    a.hr_abs_error_bpm = std::abs(estimate->heart_rate_bpm - reference.heart_rate_bpm);
    if (estimate->rr_fused_brpm) {
        a.rr_abs_error_brpm = std::abs(*estimate->rr_fused_brpm - reference.respiration_rate_brpm);
    }
    a.grade = grade_from_error(*a.hr_abs_error_bpm, thresholds);
    return a;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::invalid_input, "pearson needs equal sequences of length >= 2");
    }
    const auto n = static_cast<double>(x.size());
    const double mx = kernels::sum(x) / n;
    const double my = kernels::sum(y) / n;
    std::vector<double> cx(x.begin(), x.end());
    std::vector<double> cy(y.begin(), y.end());
    for (double& v : cx) v -= mx;
    for (double& v : cy) v -= my;
    const double sxx = kernels::dot(cx, cx);
    const double syy = kernels::dot(cy, cy);
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::undefined_correlation, "zero variance input");
    }
    return kernels::dot(cx, cy) / std::sqrt(sxx * syy);
}

BlandAltman bland_altman(std::span<const double> x, std::span<const double> y,
                         double agreement_bound) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::invalid_input, "bland_altman needs equal sequences of length >= 2");
    }
    const std::size_t n = x.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];

    const double bias = kernels::sum(d) / static_cast<double>(n);
    double ss = 0.0;
    std::size_t within = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = d[i] - bias;
        ss += c * c;
        if (std::abs(d[i]) <= agreement_bound) ++within;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    BlandAltman out;
    out.bias = bias;
    out.loa_low = bias - 1.96 * sd;
    out.loa_high = bias + 1.96 * sd;
    out.within_bound_percent = 100.0 * static_cast<double>(within) / static_cast<double>(n);
    return out;
}

namespace {

GradeStats stats_for(const std::vector<const SegmentAssessment*>& group, std::size_t total) {
    GradeStats s;
    s.count = group.size();
    s.portion_percent = total == 0 ? 0.0
                                   : 100.0 * static_cast<double>(group.size()) /
                                         static_cast<double>(total);
    std::vector<double> hr_est, hr_ref, rr_est, rr_ref;
    for (const auto* a : group) {
        if (a->estimate) {
            hr_est.push_back(a->estimate->heart_rate_bpm);
            hr_ref.push_back(a->reference.heart_rate_bpm);
            if (a->estimate->rr_fused_brpm) {
                rr_est.push_back(*a->estimate->rr_fused_brpm);
                rr_ref.push_back(a->reference.respiration_rate_brpm);
            }
        }
    }
    if (!hr_est.empty()) s.hr_mae_bpm = mae(hr_est, hr_ref);
    if (!rr_est.empty()) s.rr_mae_brpm = mae(rr_est, rr_ref);
    return s;
}

} // namespace

CohortReport cohort_report(const std::vector<SegmentAssessment>& assessments,
                           double agreement_bound_bpm) {
    if (assessments.empty()) {
        throw Error(ErrorCode::invalid_input, "empty assessment list");
    }
    CohortReport report;
    report.total = assessments.size();
    report.agreement_bound_bpm = agreement_bound_bpm;

    std::vector<const SegmentAssessment*> l1, l2, l3, low, ungr, high;
    for (const auto& a : assessments) {
        switch (a.grade) {
            case QualityGrade::Level1High: l1.push_back(&a); break;
            case QualityGrade::Level2High: l2.push_back(&a); break;
            case QualityGrade::Level3High: l3.push_back(&a); break;
            case QualityGrade::LowQuality: low.push_back(&a); break;
            case QualityGrade::Ungradable: ungr.push_back(&a); break;
        }
    }
    high.insert(high.end(), l1.begin(), l1.end());
    high.insert(high.end(), l2.begin(), l2.end());
    high.insert(high.end(), l3.begin(), l3.end());

    report.level1 = stats_for(l1, report.total);
    report.level2 = stats_for(l2, report.total);
    report.level3 = stats_for(l3, report.total);
    report.low = stats_for(low, report.total);
    report.ungradable = stats_for(ungr, report.total);
    report.high_quality = stats_for(high, report.total);

    // Agreement statistics over gradable segments only; the ungradable
    // count is reported separately.
    std::vector<double> hr_est, hr_ref;
    for (const auto& a : assessments) {
        if (a.estimate) {
            hr_est.push_back(a.estimate->heart_rate_bpm);
            hr_ref.push_back(a.reference.heart_rate_bpm);
        }
    }
    if (hr_est.size() >= 2) {
        try {
            report.pearson_r = pearson(hr_est, hr_ref);
        } catch (const Error&) {
            report.pearson_r.reset();
        }
        report.bland_altman_hr = bland_altman(hr_est, hr_ref, agreement_bound_bpm);
    }
    return report;
}

} // namespace ppgq
