#pragma once

#include <complex>
#include <vector>

#include "ssvep/types.hpp"

namespace ssvep {

// Band-pass design request. `order` is the order of the band-pass filter
// itself (total pole count), so order 4 realizes as two biquads.
struct FilterSpec {
    double low_cut_hz = 9.0;
    double high_cut_hz = 30.0;
    int order = 4;
    double sample_rate_hz = 2048.0;

    void validate() const;
};

struct BiquadSection {
    double b0 = 0, b1 = 0, b2 = 0;  // numerator
    double a1 = 0, a2 = 0;          // denominator (a0 normalized to 1)

    bool is_stable() const;  // poles strictly inside the unit circle
};

// Cascade of second-order sections; the numerically robust realization of
// the designed band-pass.
struct BiquadCascade {
    std::vector<BiquadSection> sections;

    int filter_order() const { return 2 * static_cast<int>(sections.size()); }

    // Frequency response at `freq_hz` given the sampling rate.
    std::complex<double> response(double freq_hz, double sample_rate_hz) const;
    double gain(double freq_hz, double sample_rate_hz) const {
        return std::abs(response(freq_hz, sample_rate_hz));
    }
};

struct EpochSpec {
    double trial_seconds = 4.0;
    double segment_seconds = 1.0;
    double sample_rate_hz = 256.0;

    void validate() const;
    int segments_per_trial() const;
    int segment_samples() const;
};

// Butterworth band-pass via analog prototype, low-pass-to-band-pass
// transform and bilinear transform with pre-warped cutoffs.
BiquadCascade design_butterworth_bandpass(const FilterSpec& spec);

// Zero-phase forward-backward filtering with odd-reflection edge padding of
// 3*(2*order+1) samples per side. Output length equals input length.
std::vector<double> filtfilt(const BiquadCascade& filter, const std::vector<double>& x);

// Pure subsampling: every factor-th sample. The caller guarantees the input
// is band-limited below the new Nyquist.
std::vector<double> decimate(const std::vector<double>& x, int factor);

// Cuts a trial into contiguous, non-overlapping segments in temporal order.
// Segment indices are 0-based; subject/class/block labels are inherited.
std::vector<Trial> segment_epochs(const Trial& trial, const EpochSpec& spec);

}  // namespace ssvep
