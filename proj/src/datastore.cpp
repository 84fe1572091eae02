#include "ssvep/datastore.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace ssvep {

namespace {

using json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'S', 'S', 'V', 'E', 'P', 'D', 'S', '1'};
constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "SSVEPDS1 writer assumes a little-endian host");

json stimulus_to_json(const StimulusTable& table) {
    json arr = json::array();
    for (const auto& e : table.entries) {
        arr.push_back({{"class_id", e.class_id},
                       {"frequency_hz", e.frequency_hz},
                       {"phase_rad", e.phase_rad}});
    }
    return arr;
}

StimulusTable stimulus_from_json(const json& arr) {
    StimulusTable t;
    for (const auto& j : arr) {
        StimulusEntry e;
        e.class_id = j.at("class_id").get<int>();
        e.frequency_hz = j.at("frequency_hz").get<double>();
        e.phase_rad = j.at("phase_rad").get<double>();
        t.entries.push_back(e);
    }
    return t;
}

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

void save_dataset(const Dataset& ds, const std::string& path) {
    ds.validate();
    const std::size_t n = ds.trials.size();
    const int c = ds.channels();
    const int t = ds.samples();

    std::vector<float> payload;
    payload.reserve(n * static_cast<std::size_t>(c) * t);
    json trial_meta = json::array();
    for (const auto& tr : ds.trials) {
        payload.insert(payload.end(), tr.data.begin(), tr.data.end());
        trial_meta.push_back({{"subject", tr.subject},
                              {"class_id", tr.class_id},
                              {"block", tr.block},
                              {"segment", tr.segment}});
    }
    const std::size_t payload_bytes = payload.size() * sizeof(float);

    json header;
    header["version"] = kFormatVersion;
    header["dtype"] = "float32";
    header["endianness"] = "little";
    header["shape"] = {n, c, t};
    header["sample_rate_hz"] = ds.sample_rate_hz();
    header["channel_names"] = ds.channel_names;
    header["stimulus"] = stimulus_to_json(ds.stimulus);
    header["trials"] = std::move(trial_meta);
    header["provenance"] = ds.provenance;
    header["payload_sha256"] = sha256_hex(payload.data(), payload_bytes);
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t hlen = header_str.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload_bytes));
    if (!out) throw Error("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open: " + path);

    char magic[8];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError(FormatError::Kind::BadMagic, "not an SSVEPDS1 file: " + path);
    }
    std::uint64_t hlen = 0;
    if (!in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen)) || hlen > (1ull << 32)) {
        throw FormatError(FormatError::Kind::Truncated, "header length unreadable: " + path);
    }
    std::string header_str(hlen, '\0');
    if (!in.read(header_str.data(), static_cast<std::streamsize>(hlen))) {
        throw FormatError(FormatError::Kind::Truncated, "truncated header: " + path);
    }

    json header;
    try {
        header = json::parse(header_str);
    } catch (const json::exception& e) {
        throw FormatError(FormatError::Kind::BadHeader,
                          std::string("header is not valid JSON: ") + e.what());
    }

    try {
        if (header.at("version").get<int>() != kFormatVersion) {
            throw FormatError(FormatError::Kind::BadVersion,
                              "unsupported format version " + header.at("version").dump());
        }
        if (header.at("dtype").get<std::string>() != "float32" ||
            header.at("endianness").get<std::string>() != "little") {
            throw FormatError(FormatError::Kind::BadHeader, "unsupported dtype/endianness");
        }

        const auto shape = header.at("shape");
        const std::size_t n = shape.at(0).get<std::size_t>();
        const int c = shape.at(1).get<int>();
        const int t = shape.at(2).get<int>();
        const double fs = header.at("sample_rate_hz").get<double>();

        const std::size_t payload_count = n * static_cast<std::size_t>(c) * t;
        std::vector<float> payload(payload_count);
        if (!in.read(reinterpret_cast<char*>(payload.data()),
                     static_cast<std::streamsize>(payload_count * sizeof(float)))) {
            throw FormatError(FormatError::Kind::Truncated,
                              "truncated tensor block: expected " +
                                  std::to_string(payload_count * sizeof(float)) + " bytes");
        }
        const std::string digest = sha256_hex(payload.data(), payload_count * sizeof(float));
        if (digest != header.at("payload_sha256").get<std::string>()) {
            throw FormatError(FormatError::Kind::Corrupt, "payload SHA-256 mismatch");
        }

        Dataset ds;
        ds.channel_names = header.at("channel_names").get<std::vector<std::string>>();
        ds.stimulus = stimulus_from_json(header.at("stimulus"));
        ds.provenance = header.at("provenance").get<std::string>();

        const auto& meta = header.at("trials");
        if (meta.size() != n) {
            throw FormatError(FormatError::Kind::BadHeader, "trial metadata count mismatch");
        }
        ds.trials.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Trial& tr = ds.trials[i];
            tr.channels = c;
            tr.samples = t;
            tr.sample_rate_hz = fs;
            tr.subject = meta[i].at("subject").get<int>();
            tr.class_id = meta[i].at("class_id").get<int>();
            tr.block = meta[i].at("block").get<int>();
            tr.segment = meta[i].at("segment").get<int>();
            const auto begin = payload.begin() + static_cast<std::ptrdiff_t>(i * c * t);
            tr.data.assign(begin, begin + static_cast<std::ptrdiff_t>(c) * t);
        }
        ds.validate();
        return ds;
    } catch (const json::exception& e) {
        throw FormatError(FormatError::Kind::BadHeader,
                          std::string("malformed header field: ") + e.what());
    }
}

void validate_dataset_file(const std::string& path) { (void)load_dataset(path); }

std::vector<LosoFold> loso_folds(const Dataset& ds) {
    std::map<int, std::vector<std::size_t>> by_subject;
    for (std::size_t i = 0; i < ds.trials.size(); ++i) {
        by_subject[ds.trials[i].subject].push_back(i);
    }
    if (by_subject.size() < 2) {
        throw InvalidInput("leave-one-subject-out needs at least 2 subjects, got " +
                           std::to_string(by_subject.size()));
    }
    std::vector<LosoFold> folds;
    for (const auto& [subject, test_idx] : by_subject) {
        LosoFold fold;
        fold.test_subject = subject;
        fold.test_indices = test_idx;
        for (const auto& [other, idx] : by_subject) {
            if (other == subject) continue;
            fold.train_indices.insert(fold.train_indices.end(), idx.begin(), idx.end());
        }
        std::sort(fold.train_indices.begin(), fold.train_indices.end());
        folds.push_back(std::move(fold));
    }
    return folds;
}

}  // namespace ssvep
