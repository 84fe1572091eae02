#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssvep/types.hpp"

namespace ssvep {

// SSVEPDS1 container: 8-byte magic, little-endian u64 header length, UTF-8
// JSON header, then one contiguous little-endian float32 tensor block of
// shape (n_trials, C, T) in C order. The header records the payload's
// SHA-256, which load() re-verifies.
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

// Checks a file without materializing trials beyond what load requires.
// Throws FormatError with a distinct kind for magic/version/truncation
// failures.
void validate_dataset_file(const std::string& path);

// Hex SHA-256 of a byte range.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& s);

// One fold per subject, ordered by subject id; the held-out subject's trials
// form the test set.
std::vector<LosoFold> loso_folds(const Dataset& ds);

}  // namespace ssvep
