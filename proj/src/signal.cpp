#include "ssvep/signal.hpp"

#include <algorithm>
#include <cmath>

namespace ssvep {

namespace {

constexpr double kPi = 3.14159265358979323846;

using cd = std::complex<double>;

struct Zpk {
    std::vector<cd> zeros;
    std::vector<cd> poles;
    double gain = 1.0;
};

// Analog Butterworth low-pass prototype, cutoff 1 rad/s, unit DC gain.
Zpk butterworth_prototype(int n) {
    Zpk lp;
    for (int k = 0; k < n; ++k) {
        const double theta = kPi * (2.0 * k + n + 1.0) / (2.0 * n);
        lp.poles.emplace_back(std::cos(theta), std::sin(theta));
    }
    lp.gain = 1.0;
    return lp;
}

// Low-pass (cutoff 1) to band-pass with center w0 and bandwidth bw, both in
// rad/s: s -> (s^2 + w0^2) / (bw * s).
Zpk lowpass_to_bandpass(const Zpk& lp, double w0, double bw) {
    Zpk bp;
    const int degree = static_cast<int>(lp.poles.size() - lp.zeros.size());
    auto transform = [&](const cd& r, std::vector<cd>& out) {
        const cd half = r * bw * 0.5;
        const cd disc = std::sqrt(half * half - w0 * w0);
        out.push_back(half + disc);
        out.push_back(half - disc);
    };
    for (const cd& z : lp.zeros) transform(z, bp.zeros);
    for (const cd& p : lp.poles) transform(p, bp.poles);
    // Each removed relative degree contributes a zero at s = 0.
    for (int i = 0; i < degree; ++i) bp.zeros.emplace_back(0.0, 0.0);
    bp.gain = lp.gain * std::pow(bw, degree);
    return bp;
}

// Bilinear transform s -> 2 fs (z-1)/(z+1); leftover zeros land at z = -1.
Zpk bilinear(const Zpk& analog, double fs) {
    Zpk dig;
    const double fs2 = 2.0 * fs;
    cd num(1.0, 0.0), den(1.0, 0.0);
    for (const cd& z : analog.zeros) {
        dig.zeros.push_back((fs2 + z) / (fs2 - z));
        num *= (fs2 - z);
    }
    for (const cd& p : analog.poles) {
        dig.poles.push_back((fs2 + p) / (fs2 - p));
        den *= (fs2 - p);
    }
    const int degree = static_cast<int>(analog.poles.size() - analog.zeros.size());
    for (int i = 0; i < degree; ++i) dig.zeros.emplace_back(-1.0, 0.0);
    dig.gain = analog.gain * (num / den).real();
    return dig;
}

// Groups roots into conjugate pairs. Roots are expected in conjugate pairs
// (possibly with real roots); real roots are paired among themselves.
std::vector<std::pair<cd, cd>> conjugate_pairs(std::vector<cd> roots) {
    const double tol = 1e-9;
    std::vector<cd> complex_up, reals;
    for (const cd& r : roots) {
        if (r.imag() > tol) {
            complex_up.push_back(r);
        } else if (r.imag() >= -tol) {
            reals.push_back(r);
        }
    }
    auto by_re = [](const cd& a, const cd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(complex_up.begin(), complex_up.end(), by_re);
    std::sort(reals.begin(), reals.end(), by_re);

    std::vector<std::pair<cd, cd>> pairs;
    for (const cd& r : complex_up) pairs.emplace_back(r, std::conj(r));
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
        pairs.emplace_back(reals[i], reals[i + 1]);
    }
    if (pairs.size() * 2 != roots.size()) {
        throw Error("internal: filter roots do not form conjugate pairs");
    }
    return pairs;
}

BiquadCascade zpk_to_sos(const Zpk& zpk) {
    if (zpk.zeros.size() != zpk.poles.size()) {
        throw Error("internal: zero/pole count mismatch in SOS conversion");
    }
    auto zpairs = conjugate_pairs(zpk.zeros);
    auto ppairs = conjugate_pairs(zpk.poles);

    // Pair wide-radius poles first so the gain-bearing section stays tame.
    std::sort(ppairs.begin(), ppairs.end(), [](const auto& a, const auto& b) {
        return std::abs(a.first) > std::abs(b.first);
    });

    BiquadCascade cascade;
    for (std::size_t i = 0; i < ppairs.size(); ++i) {
        const auto& [z1, z2] = zpairs[i];
        const auto& [p1, p2] = ppairs[i];
        BiquadSection s;
        s.b0 = 1.0;
        s.b1 = -(z1 + z2).real();
        s.b2 = (z1 * z2).real();
        s.a1 = -(p1 + p2).real();
        s.a2 = (p1 * p2).real();
        if (i == 0) {
            s.b0 *= zpk.gain;
            s.b1 *= zpk.gain;
            s.b2 *= zpk.gain;
        }
        cascade.sections.push_back(s);
    }
    return cascade;
}

// Direct form II transposed over one section, with initial state scaled to
// the steady-state response of the first input sample (suppresses start-up
// transients, which matters for the short reflection padding).
void sos_filter_inplace(const BiquadSection& s, std::vector<double>& x) {
    if (x.empty()) return;
    const double dc_den = 1.0 + s.a1 + s.a2;
    const double h1 = (s.b0 + s.b1 + s.b2) / dc_den;
    const double u0 = x.front();
    const double y0 = h1 * u0;
    double s2 = s.b2 * u0 - s.a2 * y0;
    double s1 = y0 - s.b0 * u0;
    for (double& v : x) {
        const double in = v;
        const double out = s.b0 * in + s1;
        s1 = s.b1 * in - s.a1 * out + s2;
        s2 = s.b2 * in - s.a2 * out;
        v = out;
    }
}

void cascade_filter_inplace(const BiquadCascade& f, std::vector<double>& x) {
    for (const auto& s : f.sections) sos_filter_inplace(s, x);
}

}  // namespace

void FilterSpec::validate() const {
    if (!(sample_rate_hz > 0.0)) throw InvalidInput("sample rate must be positive");
    if (!(low_cut_hz > 0.0)) throw InvalidInput("low cutoff must be positive");
    if (!(high_cut_hz > low_cut_hz)) throw InvalidInput("high cutoff must exceed low cutoff");
    if (!(high_cut_hz < sample_rate_hz / 2.0)) {
        throw InvalidInput("high cutoff must be below Nyquist");
    }
    if (order < 1) throw InvalidInput("filter order must be >= 1");
    if (order % 2 != 0) {
        throw InvalidInput("band-pass order must be even (pairs of poles)");
    }
}

bool BiquadSection::is_stable() const {
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

std::complex<double> BiquadCascade::response(double freq_hz, double sample_rate_hz) const {
    const double w = 2.0 * kPi * freq_hz / sample_rate_hz;
    const cd z1 = std::exp(cd(0.0, -w));
    const cd z2 = z1 * z1;
    cd h(1.0, 0.0);
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
}

BiquadCascade design_butterworth_bandpass(const FilterSpec& spec) {
    spec.validate();
    const double fs = spec.sample_rate_hz;
    // Pre-warp the cutoffs so the bilinear transform lands the -3 dB points
    // exactly at the requested digital frequencies.
    const double w1 = 2.0 * fs * std::tan(kPi * spec.low_cut_hz / fs);
    const double w2 = 2.0 * fs * std::tan(kPi * spec.high_cut_hz / fs);
    const double w0 = std::sqrt(w1 * w2);
    const double bw = w2 - w1;

    const Zpk lp = butterworth_prototype(spec.order / 2);
    const Zpk bp = lowpass_to_bandpass(lp, w0, bw);
    const Zpk dig = bilinear(bp, fs);
    BiquadCascade cascade = zpk_to_sos(dig);

    for (const auto& s : cascade.sections) {
        if (!s.is_stable()) throw Error("designed filter has an unstable section");
    }
    return cascade;
}

std::vector<double> filtfilt(const BiquadCascade& filter, const std::vector<double>& x) {
    if (filter.sections.empty()) throw InvalidInput("empty filter cascade");
    const std::size_t pad = 3 * (2 * static_cast<std::size_t>(filter.filter_order()) + 1);
    if (x.size() <= pad) {
        throw InvalidInput("signal too short for zero-phase edge padding: need > " +
                           std::to_string(pad) + " samples, got " + std::to_string(x.size()));
    }
    const std::size_t n = x.size();

    // Odd reflection about the first/last samples.
    std::vector<double> buf(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) buf[i] = 2.0 * x[0] - x[pad - i];
    std::copy(x.begin(), x.end(), buf.begin() + pad);
    for (std::size_t i = 0; i < pad; ++i) buf[pad + n + i] = 2.0 * x[n - 1] - x[n - 2 - i];

    cascade_filter_inplace(filter, buf);
    std::reverse(buf.begin(), buf.end());
    cascade_filter_inplace(filter, buf);
    std::reverse(buf.begin(), buf.end());

    return {buf.begin() + pad, buf.begin() + pad + n};
}

std::vector<double> decimate(const std::vector<double>& x, int factor) {
    if (factor < 1) throw InvalidInput("decimation factor must be >= 1");
    std::vector<double> out;
    out.reserve((x.size() + factor - 1) / factor);
    for (std::size_t i = 0; i < x.size(); i += static_cast<std::size_t>(factor)) {
        out.push_back(x[i]);
    }
    return out;
}

void EpochSpec::validate() const {
    if (!(sample_rate_hz > 0.0)) throw InvalidInput("sample rate must be positive");
    if (!(segment_seconds > 0.0) || !(trial_seconds > 0.0)) {
        throw InvalidInput("durations must be positive");
    }
    const double ratio = trial_seconds / segment_seconds;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw InvalidInput("trial duration must be an integer multiple of the segment duration");
    }
    const double ss = segment_seconds * sample_rate_hz;
    if (std::abs(ss - std::round(ss)) > 1e-9 || std::round(ss) < 1.0) {
        throw InvalidInput("segment duration must span a whole number of samples");
    }
}

int EpochSpec::segments_per_trial() const {
    return static_cast<int>(std::round(trial_seconds / segment_seconds));
}

int EpochSpec::segment_samples() const {
    return static_cast<int>(std::round(segment_seconds * sample_rate_hz));
}

std::vector<Trial> segment_epochs(const Trial& trial, const EpochSpec& spec) {
    spec.validate();
    const int seg_len = spec.segment_samples();
    if (trial.samples % seg_len != 0) {
        throw InvalidInput("trial length " + std::to_string(trial.samples) +
                           " is not a whole number of " + std::to_string(seg_len) +
                           "-sample segments");
    }
    const int n_seg = trial.samples / seg_len;

    std::vector<Trial> out;
    out.reserve(n_seg);
    for (int s = 0; s < n_seg; ++s) {
        Trial seg;
        seg.channels = trial.channels;
        seg.samples = seg_len;
        seg.subject = trial.subject;
        seg.class_id = trial.class_id;
        seg.block = trial.block;
        seg.segment = s;
        seg.sample_rate_hz = spec.sample_rate_hz;
        seg.data.resize(static_cast<std::size_t>(trial.channels) * seg_len);
        for (int c = 0; c < trial.channels; ++c) {
            const float* src = trial.channel(c) + static_cast<std::size_t>(s) * seg_len;
            std::copy(src, src + seg_len, seg.data.begin() + static_cast<std::size_t>(c) * seg_len);
        }
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace ssvep
