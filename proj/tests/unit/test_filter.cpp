// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ppgq/filter.hpp"
#include "ppgq/synth.hpp"
#include "helpers.hpp"

#include <cmath>
#include <random>

using namespace ppgq;

namespace {

std::vector<double> sinusoid(double f, double fs, std::size_t n, double phase = 0.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::sin(2.0 * oracle::kPi * f * static_cast<double>(i) / fs + phase);
    }
    return x;
}

} // namespace

TEST_CASE("instantaneous_heart_rate: per-interval arithmetic") {
    QrsAnnotations qrs{{0.0, 1.0, 2.0, 3.0}};
    auto ihr = instantaneous_heart_rate(qrs);
    REQUIRE(ihr.size() == 3);
    for (const auto& p : ihr) CHECK(p.bpm == doctest::Approx(60.0));
    CHECK(ihr[0].time_s == doctest::Approx(0.5));
    CHECK(ihr[2].time_s == doctest::Approx(2.5));

    ihr = instantaneous_heart_rate(QrsAnnotations{{0.0, 0.5}});
    REQUIRE(ihr.size() == 1);
    CHECK(ihr[0].bpm == doctest::Approx(120.0));

    ihr = instantaneous_heart_rate(QrsAnnotations{{0.0, 1.0, 1.5}});
    REQUIRE(ihr.size() == 2);
    CHECK(ihr[0].bpm == doctest::Approx(60.0));
    CHECK(ihr[1].bpm == doctest::Approx(120.0));
}

TEST_CASE("instantaneous_heart_rate: fewer than two timepoints") {
    try {
        instantaneous_heart_rate(QrsAnnotations{{1.0}});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_annotations);
    }
}

TEST_CASE("passband_from_ihr: margin and clamping") {
    PipelineConfig cfg;
    cfg.passband_margin_hz = 0.15;
    cfg.passband_floor_hz = 0.5;
    cfg.passband_ceil_hz = 4.0;

    std::vector<double> flat(10, 60.0);
    auto band = passband_from_ihr(flat, cfg);
    CHECK(band.low_hz == doctest::Approx(0.85));
    CHECK(band.high_hz == doctest::Approx(1.15));

    std::vector<double> spread{48.0, 60.0, 96.0, 72.0};
    band = passband_from_ihr(spread, cfg);
    CHECK(band.low_hz == doctest::Approx(0.65));
    CHECK(band.high_hz == doctest::Approx(1.75));

    std::vector<double> slow(5, 25.0);
    band = passband_from_ihr(slow, cfg);
    CHECK(band.low_hz == doctest::Approx(0.5)); // floor clamp engages

    cfg.passband_margin_hz = 0.0;
    try {
        passband_from_ihr(slow, cfg); // low clamps to 0.5 > high 0.4167
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_passband);
    }
}

TEST_CASE("butterworth low-pass: response landmarks") {
    const auto lp = design_butterworth_lowpass(1.15, 25.0);
    CHECK(lp.order == 5);
    CHECK(lp.sections.size() == 3);
    CHECK(magnitude_response(lp, 0.0, 25.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(magnitude_response(lp, 1.15, 25.0) - 1.0 / std::sqrt(2.0)) < 1e-4);
    CHECK(magnitude_response(lp, 2.30, 25.0) <= 0.05);
    CHECK(lp.max_pole_magnitude() < 1.0);
    CHECK(lp.numerator.size() == 6);
    CHECK(lp.denominator.size() == 6);
    CHECK(lp.denominator[0] == doctest::Approx(1.0));
}

TEST_CASE("butterworth high-pass: response landmarks") {
    const auto hp = design_butterworth_highpass(0.85, 25.0);
    CHECK(magnitude_response(hp, 0.0, 25.0) <= 1e-12);
    CHECK(std::abs(magnitude_response(hp, 0.85, 25.0) - 1.0 / std::sqrt(2.0)) < 1e-4);
    CHECK(magnitude_response(hp, 12.5, 25.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(hp.max_pole_magnitude() < 1.0);
}

TEST_CASE("butterworth: expanded polynomial view matches the section cascade") {
    // The polynomial form is a view; at a moderate cutoff it is still well
    // conditioned enough to evaluate and must describe the same filter.
    const double fs = 25.0;
    const auto lp = design_butterworth_lowpass(3.0, fs);
    for (double f : {0.0, 0.7, 1.9, 3.0, 5.2, 8.0, 12.4}) {
        const std::complex<double> z_inv =
            std::exp(std::complex<double>(0.0, -2.0 * oracle::kPi * f / fs));
        std::complex<double> num(0.0, 0.0), den(0.0, 0.0);
        std::complex<double> zp(1.0, 0.0);
        for (std::size_t k = 0; k < lp.numerator.size(); ++k) {
            num += lp.numerator[k] * zp;
            den += lp.denominator[k] * zp;
            zp *= z_inv;
        }
        const double poly_mag = std::abs(num / den);
        CHECK(poly_mag == doctest::Approx(magnitude_response(lp, f, fs)).epsilon(1e-6));
    }
}

TEST_CASE("filtfilt: no startup transient on a constant signal") {
    // Steady-state initial conditions mean a constant input is already in
    // equilibrium: the low-pass must return it exactly from sample 0.
    const auto lp = design_butterworth_lowpass(1.15, 25.0);
    std::vector<double> x(200, -7.5);
    const auto y = filtfilt(lp, std::span<const double>(x));
    for (double v : y) CHECK(v == doctest::Approx(-7.5).epsilon(1e-9));
}

TEST_CASE("butterworth: invalid cutoffs") {
    CHECK_THROWS_AS(design_butterworth_lowpass(12.5, 25.0), Error);
    CHECK_THROWS_AS(design_butterworth_lowpass(13.0, 25.0), Error);
    CHECK_THROWS_AS(design_butterworth_lowpass(0.0, 25.0), Error);
    CHECK_THROWS_AS(design_butterworth_highpass(-1.0, 25.0), Error);
}

TEST_CASE("butterworth: stable for 1000 random cutoffs") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double fs = 20.0 + 480.0 * u(gen);
        const double fc = fs * (0.002 + 0.47 * u(gen));
        const auto f = (i % 2 == 0) ? design_butterworth_lowpass(fc, fs)
                                    : design_butterworth_highpass(fc, fs);
        CHECK(f.max_pole_magnitude() < 1.0);
    }
}

TEST_CASE("butterworth low-pass: magnitude non-increasing above cutoff") {
    const auto lp = design_butterworth_lowpass(1.0, 25.0);
    double prev = magnitude_response(lp, 1.0, 25.0);
    for (double f = 1.1; f <= 12.5; f += 0.1) {
        const double mag = magnitude_response(lp, f, 25.0);
        CHECK(mag <= prev + 1e-12);
        prev = mag;
    }
}

TEST_CASE("filtfilt: zero lag for an in-band sinusoid") {
    const double fs = 25.0;
    const auto lp = design_butterworth_lowpass(1.15, fs);
    const auto hp = design_butterworth_highpass(0.85, fs);
    const auto x = sinusoid(1.0, fs, 1500);
    auto y = filtfilt(lp, std::span<const double>(x));
    y = filtfilt(hp, std::span<const double>(y));
    // Scan stays below half the carrier period so periodic self-similarity
    // cannot tie with the true lag.
    CHECK(oracle::xcorr_argmax_lag(x, y, 11) == 0);
    CHECK(oracle::correlation(x, y) >= 0.99);
}

TEST_CASE("filtfilt: commutes with time reversal away from the edges") {
    const double fs = 25.0;
    const auto lp = design_butterworth_lowpass(1.3, fs);
    std::vector<double> x = sinusoid(1.0, fs, 1500);
    const auto drift = sinusoid(0.6, fs, 1500, 0.7);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.3 * drift[i];

    const auto y = filtfilt(lp, std::span<const double>(x));
    std::vector<double> xr(x.rbegin(), x.rend());
    const auto yr = filtfilt(lp, std::span<const double>(xr));

    // Startup transients at the two ends are not mirror images of each
    // other; they die off within a few filter time constants.
    double max_diff = 0.0;
    for (std::size_t i = 300; i + 300 < x.size(); ++i) {
        max_diff = std::max(max_diff, std::abs(yr[i] - y[x.size() - 1 - i]));
    }
    CHECK(max_diff <= 1e-9);
}

TEST_CASE("filtfilt: constant through the band-pass cascade is zero") {
    const double fs = 25.0;
    const auto lp = design_butterworth_lowpass(1.15, fs);
    const auto hp = design_butterworth_highpass(0.85, fs);
    std::vector<double> x(1500, 3.25);
    auto y = filtfilt(lp, std::span<const double>(x));
    y = filtfilt(hp, std::span<const double>(y));
    for (double v : y) CHECK(std::abs(v) <= 1e-6);
}

TEST_CASE("filtfilt: linear in the input") {
    const double fs = 25.0;
    const auto lp = design_butterworth_lowpass(2.0, fs);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(800), b(800), combo(800);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = u(gen);
        b[i] = u(gen);
        combo[i] = 2.5 * a[i] - 1.25 * b[i];
    }
    const auto fa = filtfilt(lp, std::span<const double>(a));
    const auto fb = filtfilt(lp, std::span<const double>(b));
    const auto fc = filtfilt(lp, std::span<const double>(combo));
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err = std::max(err, std::abs(fc[i] - (2.5 * fa[i] - 1.25 * fb[i])));
        ref = std::max(ref, std::abs(fc[i]));
    }
    CHECK(err / ref <= 1e-9);
}

TEST_CASE("filtfilt: output length equals input length, short input throws") {
    const auto lp = design_butterworth_lowpass(2.0, 25.0);
    std::vector<double> x(19, 1.0);
    CHECK(filtfilt(lp, std::span<const double>(x)).size() == 19);
    x.resize(18); // pad length is 3*(order+1) = 18
    CHECK_THROWS_AS(filtfilt(lp, std::span<const double>(x)), Error);
}

TEST_CASE("bandpass_segment: suppresses drift and buzz around the heart band") {
    synth::SynthSpec spec;
    spec.heart_rate_bpm = 60.0;
    spec.respiration_rate_brpm = 15.0;
    spec.noise.baseline_wander_amp = 1.0;
    spec.noise.baseline_wander_freq_hz = 0.2;
    spec.noise.inband_tone_amp = 0.5;
    spec.noise.inband_tone_freq_hz = 6.0;
    spec.seed = 77;
    const auto rec = synth::generate(spec);

    PipelineConfig cfg;
    const auto filtered = bandpass_segment(rec.record, cfg);
    REQUIRE(filtered.samples.size() == rec.record.ppg.samples.size());

    const double outside =
        oracle::energy_fraction_outside(filtered.samples, 25.0, 0.85, 1.15);
    CHECK(outside <= 0.02);
}

TEST_CASE("bandpass_segment: clean in-band sinusoid passes almost unchanged") {
    synth::SynthSpec spec;
    spec.heart_rate_bpm = 60.0;
    spec.respiration_rate_brpm = 15.0;
    spec.pulse_shape = synth::PulseShape::sinusoid;
    const auto rec = synth::generate(spec);

    PipelineConfig cfg;
    const auto filtered = bandpass_segment(rec.record, cfg);
    CHECK(oracle::correlation(rec.record.ppg.samples, filtered.samples) >= 0.99);
}

TEST_CASE("bandpass_segment: rejects invalid records") {
    synth::SynthSpec spec;
    const auto rec = synth::generate(spec);
    SegmentRecord bad = rec.record;
    bad.ppg.samples.resize(700);
    try {
        bandpass_segment(bad, PipelineConfig{});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_record);
    }
}
