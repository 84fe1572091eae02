#include "ssvep/types.hpp"

#include <algorithm>
#include <set>

namespace ssvep {

const StimulusEntry& StimulusTable::entry(int class_id) const {
    for (const auto& e : entries) {
        if (e.class_id == class_id) return e;
    }
    throw InvalidInput("stimulus table has no class " + std::to_string(class_id));
}

void StimulusTable::validate() const {
    if (entries.empty()) throw InvalidInput("stimulus table is empty");
    std::set<int> ids;
    for (const auto& e : entries) {
        if (!ids.insert(e.class_id).second) {
            throw InvalidInput("duplicate class id " + std::to_string(e.class_id));
        }
        if (!(e.frequency_hz > 0.0)) throw InvalidInput("stimulus frequency must be positive");
    }
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (!(entries[i].frequency_hz > entries[i - 1].frequency_hz)) {
            throw InvalidInput("stimulus frequencies must be strictly increasing");
        }
    }
    for (int k = 0; k < num_classes(); ++k) {
        if (ids.count(k) == 0) {
            throw InvalidInput("class ids must cover 0..K-1; missing " + std::to_string(k));
        }
    }
}

StimulusTable StimulusTable::replica12() {
    StimulusTable t;
    constexpr double kPi = 3.14159265358979323846;
    for (int k = 0; k < 12; ++k) {
        StimulusEntry e;
        e.class_id = k;
        e.frequency_hz = 9.25 + 0.5 * k;
        e.phase_rad = 0.5 * kPi * (k % 4);
        t.entries.push_back(e);
    }
    return t;
}

std::vector<int> Dataset::subject_ids() const {
    std::set<int> s;
    for (const auto& tr : trials) s.insert(tr.subject);
    return {s.begin(), s.end()};
}

void Dataset::validate() const {
    stimulus.validate();
    if (trials.empty()) return;
    const int c = trials.front().channels;
    const int t = trials.front().samples;
    const double fs = trials.front().sample_rate_hz;
    if (!channel_names.empty() && static_cast<int>(channel_names.size()) != c) {
        throw InvalidInput("channel_names size does not match channel count");
    }
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const Trial& tr = trials[i];
        if (tr.channels != c || tr.samples != t) {
            throw InvalidInput("trial " + std::to_string(i) + " has inconsistent shape");
        }
        if (tr.sample_rate_hz != fs) {
            throw InvalidInput("trial " + std::to_string(i) + " has inconsistent sample rate");
        }
        if (tr.data.size() != static_cast<std::size_t>(c) * t) {
            throw InvalidInput("trial " + std::to_string(i) + " data size mismatch");
        }
        for (float v : tr.data) {
            if (!std::isfinite(v)) {
                throw InvalidInput("trial " + std::to_string(i) + " contains non-finite samples");
            }
        }
        bool known = false;
        for (const auto& e : stimulus.entries) known |= (e.class_id == tr.class_id);
        if (!known) {
            throw InvalidInput("trial " + std::to_string(i) + " class " +
                               std::to_string(tr.class_id) + " not in stimulus table");
        }
    }
}

}  // namespace ssvep
