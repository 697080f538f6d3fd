// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"
#include "ppgq/vitals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ppgq {

// Grade boundaries on the absolute heart rate error, closed on the right:
//   <= level1 -> Level1High, (level1, level2] -> Level2High,
//   (level2, level3] -> Level3High, > level3 -> LowQuality.
struct GradeThresholds {
    double level1_bpm = 1.0;
    double level2_bpm = 3.0;
    double level3_bpm = 5.0;
};

enum class QualityGrade {
    Level1High,
    Level2High,
    Level3High,
    LowQuality,
    Ungradable,
};

std::string_view to_string(QualityGrade grade) noexcept;

struct SegmentAssessment {
    std::string segment_id;
    std::optional<VitalsEstimate> estimate;
    VitalReference reference;
    std::optional<double> hr_abs_error_bpm;
    std::optional<double> rr_abs_error_brpm;
    QualityGrade grade = QualityGrade::Ungradable;
    std::string failure_reason; // error code when the estimate is absent
};

struct GradeStats {
    std::size_t count = 0;
    double portion_percent = 0.0;
    std::optional<double> hr_mae_bpm;
    std::optional<double> rr_mae_brpm;
};

struct BlandAltman {
    double bias = 0.0;
    double loa_low = 0.0;
    double loa_high = 0.0;
    double within_bound_percent = 0.0;
};

struct CohortReport {
    std::size_t total = 0;
    GradeStats level1, level2, level3, low, ungradable;
    GradeStats high_quality; // Level1 + Level2 + Level3 rollup
    std::optional<double> pearson_r;
    std::optional<BlandAltman> bland_altman_hr;
    double agreement_bound_bpm = 10.0;
};

// Mean absolute error between equal-length sequences.
double mae(std::span<const double> estimates, std::span<const double> references);

QualityGrade grade_from_error(double hr_abs_error_bpm, const GradeThresholds& thresholds = {});

SegmentAssessment grade_segment(const std::string& segment_id,
                                const std::optional<VitalsEstimate>& estimate,
                                const VitalReference& reference,
                                const GradeThresholds& thresholds = {},
                                const std::string& failure_reason = {});

// Product-moment correlation; throws on length < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Differences d = x - y; bias = mean(d); limits of agreement bias -/+
// 1.96 * sample sd; within_bound counts |d| <= bound (inclusive).
BlandAltman bland_altman(std::span<const double> x, std::span<const double> y,
                         double agreement_bound = 10.0);

CohortReport cohort_report(const std::vector<SegmentAssessment>& assessments,
                           double agreement_bound_bpm = 10.0);

} // namespace ppgq
