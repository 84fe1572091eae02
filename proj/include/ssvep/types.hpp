#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ssvep/common.hpp"

namespace ssvep {

struct StimulusEntry {
    int class_id = 0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};

// Maps class ids to flicker frequency and phase. Class ids are 0..K-1 and
// frequencies strictly increase with class id.
struct StimulusTable {
    std::vector<StimulusEntry> entries;

    int num_classes() const { return static_cast<int>(entries.size()); }

    const StimulusEntry& entry(int class_id) const;
    void validate() const;

    // 12 stimuli, 9.25 to 14.75 Hz in 0.5 Hz steps, quarter-cycle phase layout.
    static StimulusTable replica12();
};

// One multichannel EEG epoch (or 1 s segment of one). The atomic sample.
struct Trial {
    std::vector<float> data;  // row-major, channels x samples
    int channels = 0;
    int samples = 0;
    int subject = 0;
    int class_id = 0;
    int block = 0;
    int segment = 0;  // 0-based index within the parent epoch
    double sample_rate_hz = 0.0;

    float& at(int c, int t) { return data[static_cast<std::size_t>(c) * samples + t]; }
    float at(int c, int t) const { return data[static_cast<std::size_t>(c) * samples + t]; }
    const float* channel(int c) const { return data.data() + static_cast<std::size_t>(c) * samples; }
};

struct Dataset {
    std::vector<Trial> trials;
    std::vector<std::string> channel_names;
    StimulusTable stimulus;
    std::string provenance;

    int channels() const { return trials.empty() ? 0 : trials.front().channels; }
    int samples() const { return trials.empty() ? 0 : trials.front().samples; }
    double sample_rate_hz() const { return trials.empty() ? 0.0 : trials.front().sample_rate_hz; }

    std::vector<int> subject_ids() const;  // distinct, ascending

    // Checks the container invariants: uniform shape/rate, finite values,
    // class ids covered by the stimulus table.
    void validate() const;
};

struct LosoFold {
    int test_subject = 0;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

}  // namespace ssvep
