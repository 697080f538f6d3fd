// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"
#include "ppgq/quality.hpp"

#include <optional>

namespace ppgq {

struct AssessmentResult {
    SegmentAssessment assessment;
    std::optional<SignalSegment> pseudo_clean; // filled when requested
};

// The per-segment chain: validate -> band-pass -> PCA refine -> vitals ->
// grade. Any failure along the way yields an Ungradable assessment carrying
// the error code; this function itself does not throw on bad data.
AssessmentResult assess_record(const SegmentRecord& record, const PipelineConfig& config,
                               const GradeThresholds& thresholds = {},
                               bool keep_pseudo_clean = false);

} // namespace ppgq
