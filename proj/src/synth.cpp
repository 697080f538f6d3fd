// SPDX-License-Identifier: Apache-2.0
#include "ppgq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ppgq::synth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPulseSigmaS = 0.08;     // systolic pulse width
constexpr double kRespPhase = kPi / 2.0;  // cosine modulation phase

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

void validate_spec(const SynthSpec& spec) {
    const auto fail = [](const std::string& what) {
        throw Error(ErrorCode::spec_error, what);
    };
    if (!(spec.duration_s > 0.0)) fail("duration_s must be positive");
    if (!(spec.sample_rate_hz > 0.0)) fail("sample_rate_hz must be positive");
    if (!(spec.heart_rate_bpm >= 20.0 && spec.heart_rate_bpm <= 250.0)) {
        fail("heart_rate_bpm outside [20, 250]");
    }
    if (!(spec.respiration_rate_brpm >= 4.0 && spec.respiration_rate_brpm <= 60.0)) {
        fail("respiration_rate_brpm outside [4, 60]");
    }
    if (!(spec.am_depth >= 0.0 && spec.am_depth < 1.0)) fail("am_depth outside [0, 1)");
    const double mean_interval = 60.0 / spec.heart_rate_bpm;
    if (!(spec.fm_depth_s >= 0.0 && spec.fm_depth_s < 0.5 * mean_interval)) {
        fail("fm_depth_s must stay below half the mean beat interval");
    }
    const auto& nz = spec.noise;
    if (nz.baseline_wander_amp < 0.0 || nz.baseline_wander_freq_hz < 0.0 ||
        nz.white_noise_sigma < 0.0 || nz.burst_rate_per_min < 0.0 || nz.burst_amp < 0.0 ||
        nz.inband_tone_amp < 0.0 || nz.inband_tone_freq_hz < 0.0) {
        fail("noise parameters must be non-negative");
    }
}

// Knuth's product method; the expected counts here are single digits.
std::size_t poisson_count(Rng& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::size_t k = 0;
    double prod = rng.uniform01();
    while (prod > limit) {
        ++k;
        prod *= rng.uniform01();
    }
    return k;
}

} // namespace

SynthRecord generate(const SynthSpec& spec, const std::string& segment_id) {
    validate_spec(spec);

    const double mean_interval = 60.0 / spec.heart_rate_bpm;
    const double resp_hz = spec.respiration_rate_brpm / 60.0;

    std::vector<double> beats;
    double t = 0.0;
    while (t < spec.duration_s) {
        beats.push_back(t);
        t += mean_interval + spec.fm_depth_s * std::sin(2.0 * kPi * resp_hz * t + kRespPhase);
    }
    if (beats.size() < 2) {
        throw Error(ErrorCode::spec_error, "duration too short for two beats");
    }

    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    std::vector<double> samples(n, 0.0);

    const auto envelope = [&spec, resp_hz](double tau) {
        return 1.0 + spec.am_depth * std::sin(2.0 * kPi * resp_hz * tau + kRespPhase);
    };

    if (spec.pulse_shape == PulseShape::gaussian_pulse_train) {
        const double reach = 4.0 * kPulseSigmaS;
        for (double beat : beats) {
            const double amp = envelope(beat);
            const auto lo = static_cast<std::ptrdiff_t>(
                std::ceil((beat - reach) * spec.sample_rate_hz));
            const auto hi = static_cast<std::ptrdiff_t>(
                std::floor((beat + reach) * spec.sample_rate_hz));
            for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
                 i <= std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n) - 1); ++i) {
                const double tau = static_cast<double>(i) / spec.sample_rate_hz;
                const double d = tau - beat;
                samples[static_cast<std::size_t>(i)] +=
                    amp * std::exp(-(d * d) / (2.0 * kPulseSigmaS * kPulseSigmaS));
            }
        }
    } else {
        // Piecewise-linear beat phase: integer at each beat time, so the
        // cosine peaks exactly on the beats.
        std::size_t seg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double tau = static_cast<double>(i) / spec.sample_rate_hz;
            while (seg + 2 < beats.size() && beats[seg + 1] < tau) ++seg;
            const double interval = beats[seg + 1] - beats[seg];
            const double phase = static_cast<double>(seg) + (tau - beats[seg]) / interval;
            samples[i] = envelope(tau) * std::cos(2.0 * kPi * phase);
        }
    }

    Rng rng(spec.seed);
    const auto& nz = spec.noise;
    const double wander_phase = 2.0 * kPi * rng.uniform01();
    const double tone_phase = 2.0 * kPi * rng.uniform01();
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = static_cast<double>(i) / spec.sample_rate_hz;
        double v = 0.0;
        if (nz.baseline_wander_amp > 0.0) {
            v += nz.baseline_wander_amp *
                 std::sin(2.0 * kPi * nz.baseline_wander_freq_hz * tau + wander_phase);
        }
        if (nz.inband_tone_amp > 0.0) {
            v += nz.inband_tone_amp *
                 std::sin(2.0 * kPi * nz.inband_tone_freq_hz * tau + tone_phase);
        }
        if (nz.white_noise_sigma > 0.0) {
            v += nz.white_noise_sigma * rng.normal();
        }
        samples[i] += v;
    }
    if (nz.burst_rate_per_min > 0.0 && nz.burst_amp > 0.0) {
        const std::size_t count =
            poisson_count(rng, nz.burst_rate_per_min * spec.duration_s / 60.0);
        for (std::size_t b = 0; b < count; ++b) {
            const double center = rng.uniform01() * spec.duration_s;
            const double amp = nz.burst_amp * (0.5 + rng.uniform01()) *
                               (rng.uniform01() < 0.5 ? -1.0 : 1.0);
            constexpr double decay_s = 0.05;
            const auto lo = static_cast<std::ptrdiff_t>(
                std::ceil((center - 6.0 * decay_s) * spec.sample_rate_hz));
            const auto hi = static_cast<std::ptrdiff_t>(
                std::floor((center + 6.0 * decay_s) * spec.sample_rate_hz));
            for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0);
                 i <= std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n) - 1); ++i) {
                const double tau = static_cast<double>(i) / spec.sample_rate_hz;
                samples[static_cast<std::size_t>(i)] +=
                    amp * std::exp(-std::abs(tau - center) / decay_s);
            }
        }
    }

    SynthRecord out;
    out.record.segment_id =
        segment_id.empty() ? "synth-" + std::to_string(spec.seed) : segment_id;
    out.record.ppg.samples = std::move(samples);
    out.record.ppg.sample_rate_hz = spec.sample_rate_hz;
    out.record.ppg.start_time_s = 0.0;
    out.record.qrs.timepoints_s = beats;

    const double span = beats.back() - beats.front();
    out.truth.heart_rate_bpm = 60.0 * static_cast<double>(beats.size() - 1) / span;
    out.truth.respiration_rate_brpm = spec.respiration_rate_brpm;
    out.truth.beat_times_s = std::move(beats);

    out.record.reference.heart_rate_bpm = out.truth.heart_rate_bpm;
    out.record.reference.respiration_rate_brpm = out.truth.respiration_rate_brpm;
    return out;
}

std::vector<SynthRecord> corpus(const std::vector<SynthSpec>& specs) {
    std::vector<SynthRecord> out;
    out.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        try {
            out.push_back(generate(specs[i], "synth-" + std::to_string(i)));
        } catch (const Error& e) {
            throw Error(e.code(), "spec " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

} // namespace ppgq::synth
