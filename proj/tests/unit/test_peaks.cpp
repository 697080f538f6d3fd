// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ppgq/peaks.hpp"
#include "helpers.hpp"

#include <cmath>
#include <random>

using namespace ppgq;

namespace {

SignalSegment make_sinusoid(double f, double fs, double duration_s, double phase = 0.0) {
    SignalSegment seg;
    seg.sample_rate_hz = fs;
    seg.samples.resize(static_cast<std::size_t>(std::llround(duration_s * fs)));
    for (std::size_t i = 0; i < seg.samples.size(); ++i) {
        seg.samples[i] = std::sin(2.0 * oracle::kPi * f * static_cast<double>(i) / fs + phase);
    }
    return seg;
}

SignalSegment make_pulse_train(double f, double fs, double duration_s) {
    SignalSegment seg;
    seg.sample_rate_hz = fs;
    seg.samples.resize(static_cast<std::size_t>(std::llround(duration_s * fs)), 0.0);
    const double period = 1.0 / f;
    const double sigma = 0.08;
    for (double beat = 0.0; beat < duration_s; beat += period) {
        for (std::size_t i = 0; i < seg.samples.size(); ++i) {
            const double d = static_cast<double>(i) / fs - beat;
            if (std::abs(d) < 4.0 * sigma) {
                seg.samples[i] += std::exp(-d * d / (2.0 * sigma * sigma));
            }
        }
    }
    return seg;
}

} // namespace

TEST_CASE("sobel_derivative: exact on ramps and constants") {
    std::vector<double> ramp(50);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
    const auto d = sobel_derivative(ramp);
    REQUIRE(d.size() == ramp.size());
    for (std::size_t i = 1; i + 1 < d.size(); ++i) CHECK(d[i] == doctest::Approx(1.0));

    std::vector<double> flat(50, 3.0);
    for (double v : sobel_derivative(flat)) CHECK(v == doctest::Approx(0.0));

    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(sobel_derivative(tiny), Error);
}

TEST_CASE("sobel_derivative: sinusoid amplitude tracks the analytic derivative") {
    const double f = 0.5, fs = 100.0;
    const auto seg = make_sinusoid(f, fs, 30.0);
    const auto d = sobel_derivative(seg.samples);
    double peak = 0.0;
    for (std::size_t i = 10; i + 10 < d.size(); ++i) peak = std::max(peak, std::abs(d[i]));
    const double analytic = 2.0 * oracle::kPi * f / fs;
    CHECK(std::abs(peak - analytic) <= 0.02 * analytic);
}

TEST_CASE("detect_peaks: sinusoid at 1 Hz has ~60 peaks at 1 s spacing") {
    const auto seg = make_sinusoid(1.0, 25.0, 60.0);
    const PassBand band{0.85, 1.15};
    const auto peaks = detect_peaks(seg, band);
    CHECK(peaks.size() >= 59);
    CHECK(peaks.size() <= 61);
    for (std::size_t i = 1; i < peaks.indices.size(); ++i) {
        const auto gap = peaks.indices[i] - peaks.indices[i - 1];
        CHECK(gap >= 24);
        CHECK(gap <= 26);
    }
}

TEST_CASE("detect_peaks: 1.5 Hz pulse train intervals") {
    const auto seg = make_pulse_train(1.5, 25.0, 60.0);
    const PassBand band{1.3, 1.7};
    const auto peaks = detect_peaks(seg, band);
    REQUIRE(peaks.size() >= 3);
    for (std::size_t i = 1; i < peaks.times_s.size(); ++i) {
        const double gap = peaks.times_s[i] - peaks.times_s[i - 1];
        CHECK(std::abs(gap - 1.0 / 1.5) <= 1.0 / 25.0 + 1e-9);
    }
}

TEST_CASE("detect_peaks: constant signal has no peaks") {
    SignalSegment seg;
    seg.sample_rate_hz = 25.0;
    seg.samples.assign(1500, 1.0);
    try {
        detect_peaks(seg, PassBand{0.85, 1.15});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_peaks);
    }
}

TEST_CASE("detect_peaks: shift equivariance for interior peaks") {
    const double fs = 25.0, f = 1.1;
    const auto a = make_sinusoid(f, fs, 60.0);
    const int shift = 7;
    auto b = make_sinusoid(f, fs, 60.0, -2.0 * oracle::kPi * f * shift / fs);

    const PassBand band{0.9, 1.3};
    const auto pa = detect_peaks(a, band);
    const auto pb = detect_peaks(b, band);

    // Every interior peak of the shifted signal sits `shift` samples later.
    std::size_t matched = 0;
    for (std::size_t idx : pa.indices) {
        if (idx < 50 || idx + 50 > a.samples.size()) continue;
        const auto want = idx + static_cast<std::size_t>(shift);
        for (std::size_t got : pb.indices) {
            if (got == want) {
                ++matched;
                break;
            }
        }
    }
    CHECK(matched >= pa.size() - 4);
}

TEST_CASE("detect_peaks: amplitude scale invariance") {
    const auto seg = make_sinusoid(1.0, 25.0, 60.0);
    const PassBand band{0.85, 1.15};
    const auto base = detect_peaks(seg, band);
    for (double c : {0.1, 3.0, 1000.0}) {
        SignalSegment scaled = seg;
        for (double& v : scaled.samples) v *= c;
        const auto peaks = detect_peaks(scaled, band);
        CHECK(peaks.indices == base.indices);
    }
}

TEST_CASE("detect_peaks: equal-amplitude rivals keep the earlier index") {
    // Two identical bumps closer than the minimum distance; the suppression
    // pass must deterministically keep the first one.
    SignalSegment seg;
    seg.sample_rate_hz = 25.0;
    seg.samples.assign(1500, 0.0);
    std::vector<std::size_t> bumps;
    for (std::size_t center = 100; center + 100 < 1500; center += 250) {
        bumps.push_back(center);
        bumps.push_back(center + 8); // disjoint rival inside the exclusion window
    }
    for (std::size_t c : bumps) {
        for (std::ptrdiff_t k = -3; k <= 3; ++k) {
            seg.samples[c + static_cast<std::size_t>(k)] +=
                1.0 - 0.1 * static_cast<double>(k * k);
        }
    }
    const PassBand band{0.5, 2.0}; // min distance = floor(0.8*25/2) = 10
    const auto peaks = detect_peaks(seg, band);
    REQUIRE(peaks.min_distance_samples == 10);
    for (std::size_t i = 0; i < peaks.indices.size(); ++i) {
        CHECK(peaks.indices[i] == 100 + i * 250);
    }
}

TEST_CASE("detect_peaks: spacing respects the minimum distance") {
    std::mt19937_64 gen(15);
    std::normal_distribution<double> nrm(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        SignalSegment seg;
        seg.sample_rate_hz = 25.0;
        seg.samples.resize(1500);
        double state = 0.0;
        for (auto& v : seg.samples) {
            state = 0.9 * state + nrm(gen); // correlated noise with many maxima
            v = state;
        }
        const PassBand band{0.6, 2.0};
        try {
            const auto peaks = detect_peaks(seg, band);
            for (std::size_t i = 1; i < peaks.indices.size(); ++i) {
                CHECK(peaks.indices[i] - peaks.indices[i - 1] >= peaks.min_distance_samples);
            }
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::insufficient_peaks);
        }
    }
}
