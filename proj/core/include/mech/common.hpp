#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mech {

using NodeId = int;   // physical qubit (graph node)
using QubitId = int;  // logical circuit qubit
using BitId = int;    // classical bit
using GateId = int;   // index into a circuit's gate list

/// Thrown on malformed inputs and violated preconditions.
class MechError : public std::runtime_error {
public:
    explicit MechError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw MechError(msg);
}

/// Seeded PRNG wrapper. mt19937_64 output is fixed by the standard; the
/// derived draws below avoid std::*_distribution so that equal seeds give
/// byte-identical results across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    /// Uniform integer in [0, n), rejection-sampled.
    int next_below(int n) {
        require(n > 0, "Rng::next_below: n must be positive");
        const uint64_t un = static_cast<uint64_t>(n);
        const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return static_cast<int>(x % un);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool next_bool() { return (eng_() >> 63) != 0; }

private:
    std::mt19937_64 eng_;
};

}  // namespace mech
