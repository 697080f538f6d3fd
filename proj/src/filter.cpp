// SPDX-License-Identifier: Apache-2.0
#include "ppgq/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace ppgq {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Expand a set of roots into real polynomial coefficients (leading 1).
std::vector<double> poly_from_roots(const std::vector<cd>& roots) {
    std::vector<cd> coeffs{cd(1.0, 0.0)};
    for (const cd& r : roots) {
        std::vector<cd> next(coeffs.size() + 1, cd(0.0, 0.0));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * r;
        }
        coeffs = std::move(next);
    }
    std::vector<double> real(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) real[i] = coeffs[i].real();
    return real;
}

double section_pole_magnitude(const SosSection& s) {
    // Roots of z^2 + a1 z + a2.
    const double disc = s.a1 * s.a1 - 4.0 * s.a2;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        return std::max(std::abs((-s.a1 + sq) / 2.0), std::abs((-s.a1 - sq) / 2.0));
    }
    return std::sqrt(s.a2); // complex pair, |z|^2 = a2
}

cd section_response(const SosSection& s, const cd& z_inv) {
    const cd num = cd(s.b0) + z_inv * (cd(s.b1) + z_inv * cd(s.b2));
    const cd den = cd(1.0) + z_inv * (cd(s.a1) + z_inv * cd(s.a2));
    return num / den;
}

// Build a digital Butterworth filter from prototype math shared by the
// low-pass and high-pass designs.
IirFilter build_butterworth(double cutoff_hz, double sample_rate_hz, bool highpass) {
    if (!(sample_rate_hz > 0.0) || !(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0) {
        throw Error(ErrorCode::invalid_cutoff,
                    "cutoff " + std::to_string(cutoff_hz) + " Hz at sample rate " +
                        std::to_string(sample_rate_hz) + " Hz");
    }
    constexpr int kOrder = 5;
    const double fs2 = 2.0 * sample_rate_hz;
    // Pre-warp so the analog cutoff lands on the requested digital frequency.
    const double warped = fs2 * std::tan(kPi * cutoff_hz / sample_rate_hz);

    std::vector<cd> analog_poles;
    analog_poles.reserve(kOrder);
    for (int k = 0; k < kOrder; ++k) {
        const double theta = kPi * (2.0 * k + kOrder + 1.0) / (2.0 * kOrder);
        cd proto(std::cos(theta), std::sin(theta));
        analog_poles.push_back(highpass ? warped / proto : warped * proto);
    }

    std::vector<cd> digital_poles;
    digital_poles.reserve(kOrder);
    for (const cd& p : analog_poles) {
        digital_poles.push_back((fs2 + p) / (fs2 - p));
    }
    const double zero = highpass ? 1.0 : -1.0;

    // Group poles into second-order sections: conjugate pairs first, the
    // single real pole last. The prototype yields poles with positive
    // imaginary part at k < order/2 and their conjugates afterwards.
    IirFilter filter;
    filter.order = kOrder;
    std::vector<cd> reals;
    std::vector<cd> pairs; // one representative per conjugate pair
    for (const cd& p : digital_poles) {
        if (p.imag() > 1e-12) pairs.push_back(p);
        else if (std::abs(p.imag()) <= 1e-12) reals.push_back(p);
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const cd& a, const cd& b) { return std::abs(a) < std::abs(b); });

    for (const cd& p : pairs) {
        SosSection s;
        s.a1 = -2.0 * p.real();
        s.a2 = std::norm(p);
        s.b0 = 1.0;
        s.b1 = -2.0 * zero;
        s.b2 = 1.0;
        filter.sections.push_back(s);
    }
    for (const cd& p : reals) {
        SosSection s;
        s.a1 = -p.real();
        s.a2 = 0.0;
        s.b0 = 1.0;
        s.b1 = -zero;
        s.b2 = 0.0;
        filter.sections.push_back(s);
    }

    // Normalize: unit gain at DC for the low-pass, at Nyquist for the
    // high-pass, distributed evenly across sections.
    const cd z_inv_ref = highpass ? cd(-1.0) : cd(1.0);
    cd resp(1.0, 0.0);
    for (const auto& s : filter.sections) resp *= section_response(s, z_inv_ref);
    const double gain = 1.0 / std::abs(resp);
    const double per_section = std::pow(gain, 1.0 / static_cast<double>(filter.sections.size()));
    for (auto& s : filter.sections) {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }

    for (const auto& s : filter.sections) {
        if (section_pole_magnitude(s) >= 1.0 - 1e-12) {
            throw Error(ErrorCode::unstable_filter,
                        "pole magnitude " + std::to_string(section_pole_magnitude(s)));
        }
    }

    // Expanded polynomial view.
    std::vector<cd> zeros_all(kOrder, cd(zero, 0.0));
    filter.denominator = poly_from_roots(digital_poles);
    filter.numerator = poly_from_roots(zeros_all);
    for (double& b : filter.numerator) b *= gain;
    return filter;
}

// Direct form II transposed evaluation of one section over a buffer, with
// explicit initial state.
void run_section(const SosSection& s, std::vector<double>& x, double s1_init, double s2_init) {
    double s1 = s1_init;
    double s2 = s2_init;
    for (double& v : x) {
        const double in = v;
        const double out = s.b0 * in + s1;
        s1 = s.b1 * in - s.a1 * out + s2;
        s2 = s.b2 * in - s.a2 * out;
        v = out;
    }
}

struct SectionZi {
    double s1 = 0.0;
    double s2 = 0.0;
};

// Steady-state (unit step) initial conditions per section; scaling the
// returned state by the first input sample removes the startup transient.
std::vector<SectionZi> steady_state_zi(const IirFilter& filter) {
    std::vector<SectionZi> zi;
    zi.reserve(filter.sections.size());
    double level = 1.0;
    for (const auto& s : filter.sections) {
        const double denom = 1.0 + s.a1 + s.a2;
        const double g = (s.b0 + s.b1 + s.b2) / denom;
        SectionZi z;
        z.s1 = level * (g - s.b0);
        z.s2 = level * (s.b2 - s.a2 * g);
        zi.push_back(z);
        level *= g;
    }
    return zi;
}

void sosfilt_with_zi(const IirFilter& filter, const std::vector<SectionZi>& zi,
                     std::vector<double>& x) {
    const double x0 = x.empty() ? 0.0 : x.front();
    for (std::size_t k = 0; k < filter.sections.size(); ++k) {
        run_section(filter.sections[k], x, zi[k].s1 * x0, zi[k].s2 * x0);
    }
}

} // namespace

double IirFilter::max_pole_magnitude() const {
    double m = 0.0;
    for (const auto& s : sections) m = std::max(m, section_pole_magnitude(s));
    return m;
}

std::vector<IhrPoint> instantaneous_heart_rate(const QrsAnnotations& qrs) {
    const auto& t = qrs.timepoints_s;
    if (t.size() < 2) {
        throw Error(ErrorCode::insufficient_annotations,
                    "need at least 2 QRS timepoints, got " + std::to_string(t.size()));
    }
    std::vector<IhrPoint> out;
    out.reserve(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        if (!(dt > 0.0)) {
            throw Error(ErrorCode::invalid_input, "non-increasing QRS timepoints");
        }
        out.push_back(IhrPoint{(t[i] + t[i - 1]) / 2.0, 60.0 / dt});
    }
    return out;
}

PassBand passband_from_ihr(std::span<const double> ihr_bpm, const PipelineConfig& config) {
    if (ihr_bpm.empty()) {
        throw Error(ErrorCode::invalid_input, "empty instantaneous heart rate sequence");
    }
    double lo_bpm = ihr_bpm[0];
    double hi_bpm = ihr_bpm[0];
    for (double v : ihr_bpm) {
        if (!(v > 0.0)) throw Error(ErrorCode::invalid_input, "non-positive instantaneous rate");
        lo_bpm = std::min(lo_bpm, v);
        hi_bpm = std::max(hi_bpm, v);
    }
    PassBand band;
    band.low_hz = std::max(config.passband_floor_hz, lo_bpm / 60.0 - config.passband_margin_hz);
    band.high_hz = std::min(config.passband_ceil_hz, hi_bpm / 60.0 + config.passband_margin_hz);
    if (!(band.low_hz < band.high_hz)) {
        throw Error(ErrorCode::degenerate_passband,
                    "low " + std::to_string(band.low_hz) + " Hz >= high " +
                        std::to_string(band.high_hz) + " Hz after clamping");
    }
    return band;
}

IirFilter design_butterworth_lowpass(double cutoff_hz, double sample_rate_hz) {
    return build_butterworth(cutoff_hz, sample_rate_hz, /*highpass=*/false);
}

IirFilter design_butterworth_highpass(double cutoff_hz, double sample_rate_hz) {
    return build_butterworth(cutoff_hz, sample_rate_hz, /*highpass=*/true);
}

double magnitude_response(const IirFilter& filter, double freq_hz, double sample_rate_hz) {
    const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
    const cd z_inv = std::exp(cd(0.0, -w));
    cd resp(1.0, 0.0);
    for (const auto& s : filter.sections) resp *= section_response(s, z_inv);
    return std::abs(resp);
}

std::vector<double> filtfilt(const IirFilter& filter, std::span<const double> samples) {
    const std::size_t n = samples.size();
    const std::size_t pad = 3 * static_cast<std::size_t>(filter.order + 1);
    if (n <= pad) {
        throw Error(ErrorCode::segment_too_short,
                    std::to_string(n) + " samples, need more than " + std::to_string(pad));
    }

    // Odd reflection about the first/last sample.
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) {
        ext.push_back(2.0 * samples[0] - samples[pad - i]);
    }
    ext.insert(ext.end(), samples.begin(), samples.end());
    for (std::size_t i = 0; i < pad; ++i) {
        ext.push_back(2.0 * samples[n - 1] - samples[n - 2 - i]);
    }

    const auto zi = steady_state_zi(filter);
    sosfilt_with_zi(filter, zi, ext);
    std::reverse(ext.begin(), ext.end());
    sosfilt_with_zi(filter, zi, ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                               ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

SignalSegment filtfilt(const IirFilter& filter, const SignalSegment& signal) {
    SignalSegment out;
    out.sample_rate_hz = signal.sample_rate_hz;
    out.start_time_s = signal.start_time_s;
    out.samples = filtfilt(filter, std::span<const double>(signal.samples));
    return out;
}

SignalSegment apply_bandpass(const SignalSegment& signal, const PassBand& band) {
    const IirFilter lp = design_butterworth_lowpass(band.high_hz, signal.sample_rate_hz);
    const IirFilter hp = design_butterworth_highpass(band.low_hz, signal.sample_rate_hz);
    SignalSegment out = filtfilt(lp, signal);
    out.samples = filtfilt(hp, std::span<const double>(out.samples));
    return out;
}

SignalSegment bandpass_segment(const SegmentRecord& record, const PipelineConfig& config) {
    const auto violations = validate_record(record);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) {
            if (!msg.empty()) msg += ", ";
            msg += to_string(v.code);
        }
        throw Error(ErrorCode::invalid_record, msg);
    }
    const auto ihr = instantaneous_heart_rate(record.qrs);
    std::vector<double> bpm;
    bpm.reserve(ihr.size());
    for (const auto& p : ihr) bpm.push_back(p.bpm);
    const PassBand band = passband_from_ihr(bpm, config);
    return apply_bandpass(record.ppg, band);
}

} // namespace ppgq
