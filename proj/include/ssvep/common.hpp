#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssvep {

inline constexpr const char* kToolkitVersion = "1.0.0";

// Base of the library's error hierarchy. Maps to CLI exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: invalid configs, precondition violations, malformed files.
// Maps to CLI exit code 2.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// On-disk format violations, with a distinct kind per failure mode.
class FormatError : public InvalidInput {
public:
    enum class Kind { BadMagic, BadVersion, Truncated, Corrupt, BadHeader };

    FormatError(Kind kind, const std::string& msg) : InvalidInput(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Raised when a training routine would touch held-out-subject data.
class LeakageError : public Error {
public:
    explicit LeakageError(const std::string& msg) : Error(msg) {}
};

// SplitMix64 step; used to derive independent seed streams from one master
// seed so that per-trial / per-fold generation stays deterministic under
// any execution order.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless mix of a master seed with stream coordinates.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t out = splitmix64(s);
    s ^= a * 0xff51afd7ed558ccdULL;
    out ^= splitmix64(s);
    s ^= b * 0xc4ceb9fe1a85ec53ULL;
    out ^= splitmix64(s);
    s ^= c * 0x2545f4914f6cdd1dULL;
    out ^= splitmix64(s);
    return out;
}

}  // namespace ssvep
