#pragma once

#include "mech/circuit.hpp"

namespace mech {

/// Textbook QFT: H plus the controlled-phase ladder (no final reversal).
Circuit gen_qft(int n);

/// Maxcut phase-separation layer on a random graph with floor(n(n-1)/4)
/// distinct edges; each edge contributes CX . RZ . CX. Seed-deterministic.
Circuit gen_qaoa(int n, uint64_t seed);

/// Full-entanglement ansatz: an RY rotation wall followed by CX between
/// every ordered pair (i < j), repeated `layers` times.
Circuit gen_vqe(int n, int layers, uint64_t seed);

/// Bernstein-Vazirani on n-1 string qubits plus one target, secret string
/// with floor((n-1)/2) ones; string qubits are measured at the end.
Circuit gen_bv(int n, uint64_t seed);

/// The secret string gen_bv(n, seed) encodes (length n-1).
std::vector<int> bv_secret(int n, uint64_t seed);

}  // namespace mech
