#pragma once

#include <cstdint>
#include <vector>

#include "ssvep/types.hpp"

namespace ssvep {

// Ground-truth SSVEP generator settings. Deterministic for a given rng_seed:
// every trial draws from its own counter-derived stream, so generation order
// (or parallelism) cannot change the output.
struct SynthConfig {
    StimulusTable stimulus = StimulusTable::replica12();
    int channels = 8;
    double sample_rate_hz = 2048.0;
    double trial_seconds = 4.0;
    int trials_per_class = 15;
    int subjects = 10;
    double snr_db = 0.0;          // in-band (9-30 Hz) SNR before filtering
    double harmonic_gain = 0.5;   // amplitude of the 2*f component
    bool noiseless = false;       // exact signal, no noise term
    std::uint64_t rng_seed = 1;

    int trial_samples() const;
    void validate() const;
};

// Per-subject channel gains, drawn once per subject from the seed.
std::vector<double> subject_channel_gains(const SynthConfig& config, int subject);

// One trial: per-channel gain times (fundamental + harmonic) plus white
// Gaussian noise scaled to the configured in-band SNR. `block` selects the
// per-trial noise stream.
Trial generate_trial(const SynthConfig& config, int subject, int class_id, int block);

// subjects x trials_per_class x K labeled trials, in (subject, block, class)
// order.
Dataset generate_dataset(const SynthConfig& config);

}  // namespace ssvep
