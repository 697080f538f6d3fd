// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ppgq/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ppgq::synth {

// Fixed, platform-stable pseudo-random source: xoshiro256++ seeded through
// splitmix64. Normal deviates come from Box-Muller so the stream never
// depends on a standard-library distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform01(); // [0, 1), 53-bit resolution
    double normal();    // standard normal

private:
    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct NoiseSpec {
    double baseline_wander_amp = 0.0;
    double baseline_wander_freq_hz = 0.25;
    double white_noise_sigma = 0.0;
    double burst_rate_per_min = 0.0;
    double burst_amp = 0.0;
    double inband_tone_amp = 0.0;
    double inband_tone_freq_hz = 1.0;
};

enum class PulseShape { sinusoid, gaussian_pulse_train };

struct SynthSpec {
    double duration_s = 60.0;
    double sample_rate_hz = 25.0;
    double heart_rate_bpm = 72.0;
    double respiration_rate_brpm = 15.0;
    double am_depth = 0.0;   // fractional amplitude modulation, [0, 1)
    double fm_depth_s = 0.0; // beat interval deviation amplitude, seconds
    PulseShape pulse_shape = PulseShape::gaussian_pulse_train;
    NoiseSpec noise{};
    std::uint64_t seed = 1;
};

struct GroundTruth {
    double heart_rate_bpm = 0.0;        // 60 / mean generated interval
    double respiration_rate_brpm = 0.0; // modulation frequency as specified
    std::vector<double> beat_times_s;
};

struct SynthRecord {
    SegmentRecord record;
    GroundTruth truth;
};

// Deterministic for a fixed spec. Beat times integrate the instantaneous
// rate with sinusoidal interval modulation at the respiration frequency
// (cosine phase); the amplitude envelope is 1 + am_depth * cos(2 pi rr t).
// The QRS annotations equal the beat times (perfect ECG reference).
SynthRecord generate(const SynthSpec& spec, const std::string& segment_id = {});

std::vector<SynthRecord> corpus(const std::vector<SynthSpec>& specs);

} // namespace ppgq::synth
