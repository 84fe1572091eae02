#include "ssvep/synth.hpp"

#include <cmath>
#include <random>

#include "ssvep/common.hpp"

namespace ssvep {

namespace {

constexpr double kPi = 3.14159265358979323846;
// SNR is defined inside the analysis band of the preprocessing chain.
constexpr double kBandLowHz = 9.0;
constexpr double kBandHighHz = 30.0;

// Marsaglia polar Gaussian on top of mt19937_64; avoids the
// implementation-defined std::normal_distribution so streams are portable.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double uniform() {
        // 53-bit mantissa uniform in [0, 1).
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

int SynthConfig::trial_samples() const {
    return static_cast<int>(std::round(trial_seconds * sample_rate_hz));
}

void SynthConfig::validate() const {
    stimulus.validate();
    if (channels < 1) throw InvalidInput("channels must be >= 1");
    if (trials_per_class < 1) throw InvalidInput("trials_per_class must be >= 1");
    if (subjects < 1) throw InvalidInput("subjects must be >= 1");
    if (!(sample_rate_hz > 0.0)) throw InvalidInput("sample rate must be positive");
    if (!(trial_seconds > 0.0)) throw InvalidInput("trial duration must be positive");
    if (harmonic_gain < 0.0 || harmonic_gain > 1.0) {
        throw InvalidInput("harmonic_gain must be in [0, 1]");
    }
    for (const auto& e : stimulus.entries) {
        if (2.0 * e.frequency_hz >= sample_rate_hz / 2.0) {
            throw InvalidInput("harmonic of stimulus " + std::to_string(e.class_id) +
                               " would alias at this sample rate");
        }
    }
}

std::vector<double> subject_channel_gains(const SynthConfig& config, int subject) {
    GaussianStream stream(mix_seed(config.rng_seed, 0x5b7ec7ULL, static_cast<std::uint64_t>(subject)));
    std::vector<double> gains(config.channels);
    for (double& g : gains) g = 0.5 + stream.uniform();  // in [0.5, 1.5)
    return gains;
}

Trial generate_trial(const SynthConfig& config, int subject, int class_id, int block) {
    config.validate();
    if (subject < 0 || subject >= config.subjects) throw InvalidInput("subject out of range");
    if (block < 0 || block >= config.trials_per_class) throw InvalidInput("block out of range");
    const StimulusEntry& stim = config.stimulus.entry(class_id);

    const int t_len = config.trial_samples();
    const std::vector<double> gains = subject_channel_gains(config, subject);

    // Per-channel noise level for the requested in-band SNR: white noise
    // spreads evenly over [0, fs/2], so only the band fraction counts.
    const double band_fraction = (kBandHighHz - kBandLowHz) / (config.sample_rate_hz / 2.0);
    const double hg = config.harmonic_gain;
    const double snr_lin = std::pow(10.0, config.snr_db / 10.0);

    GaussianStream noise(mix_seed(config.rng_seed, static_cast<std::uint64_t>(subject) + 1,
                                  static_cast<std::uint64_t>(class_id) + 1,
                                  static_cast<std::uint64_t>(block) + 1));

    Trial trial;
    trial.channels = config.channels;
    trial.samples = t_len;
    trial.subject = subject;
    trial.class_id = class_id;
    trial.block = block;
    trial.segment = 0;
    trial.sample_rate_hz = config.sample_rate_hz;
    trial.data.resize(static_cast<std::size_t>(config.channels) * t_len);

    const double w = 2.0 * kPi * stim.frequency_hz;
    for (int c = 0; c < config.channels; ++c) {
        const double g = gains[c];
        const double signal_power = g * g * (1.0 + hg * hg) / 2.0;
        const double noise_sigma =
            config.noiseless ? 0.0 : std::sqrt(signal_power / (snr_lin * band_fraction));
        for (int n = 0; n < t_len; ++n) {
            const double t = n / config.sample_rate_hz;
            double v = g * (std::cos(w * t - stim.phase_rad) +
                            hg * std::cos(2.0 * w * t - 2.0 * stim.phase_rad));
            if (noise_sigma > 0.0) v += noise_sigma * noise.next();
            trial.at(c, n) = static_cast<float>(v);
        }
    }
    return trial;
}

Dataset generate_dataset(const SynthConfig& config) {
    config.validate();
    Dataset ds;
    ds.stimulus = config.stimulus;
    for (int c = 0; c < config.channels; ++c) ds.channel_names.push_back("ch" + std::to_string(c));
    ds.provenance = "synthetic";
    ds.trials.reserve(static_cast<std::size_t>(config.subjects) * config.trials_per_class *
                      config.stimulus.num_classes());
    for (int s = 0; s < config.subjects; ++s) {
        for (int b = 0; b < config.trials_per_class; ++b) {
            for (const auto& e : config.stimulus.entries) {
                ds.trials.push_back(generate_trial(config, s, e.class_id, b));
            }
        }
    }
    return ds;
}

}  // namespace ssvep
