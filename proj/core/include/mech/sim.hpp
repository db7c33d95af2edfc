#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "mech/circuit.hpp"
#include "mech/common.hpp"

namespace mech {

/// Decides a measurement outcome: given (measurement index, bit id), return
/// 0/1 to force a branch or -1 to sample. Null means sample everything.
using OutcomeForce = std::function<int(int meas_index, BitId bit)>;

/// Dense statevector simulator with mid-circuit measurement and classical
/// feed-forward. Hard cap of 24 qubits.
class StateVector {
public:
    static constexpr int kMaxQubits = 24;
    using cplx = std::complex<double>;

    explicit StateVector(int num_qubits);

    int num_qubits() const { return n_; }
    uint64_t dim() const { return uint64_t{1} << n_; }
    cplx amplitude(uint64_t i) const { return amp_[i]; }
    const std::vector<cplx>& amplitudes() const { return amp_; }

    void reset_basis(uint64_t bits = 0);
    /// Product state from per-qubit (alpha, beta) pairs; missing qubits |0>.
    void set_product(const std::vector<std::pair<cplx, cplx>>& locals,
                     const std::vector<QubitId>& at);

    void apply_h(QubitId q);
    void apply_x(QubitId q);
    void apply_y(QubitId q);
    void apply_z(QubitId q);
    void apply_rz(QubitId q, double angle);
    void apply_cx(QubitId c, QubitId t);
    void apply_cz(QubitId a, QubitId b);
    void apply_cp(QubitId a, QubitId b, double angle);

    /// Projective measurement; forced = -1 samples via rng. Returns the
    /// outcome, or -1 if the forced branch has (numerically) zero weight.
    int measure(QubitId q, Basis basis, Rng& rng, int forced = -1);

    double norm_sq() const;
    /// 2x2 reduced density matrix of one qubit, row-major.
    std::array<cplx, 4> reduced_qubit(QubitId q) const;

private:
    int n_;
    std::vector<cplx> amp_;
};

struct SvRunResult {
    std::vector<int> bits;
    bool branch_ok = true;  // false iff a forced branch had zero weight
};

/// Runs a circuit on the given state. Measurements write classical bits;
/// COND_PAULI consults them. SWAP/BRIDGE/CZ/CP are applied natively.
SvRunResult run_statevector(StateVector& sv, const Circuit& c, Rng& rng,
                            const OutcomeForce& force = nullptr);

/// Pauli operator as X/Z masks over packed words, with an overall sign.
struct PauliString {
    std::vector<uint64_t> x, z;
    bool negative = false;

    explicit PauliString(int num_qubits);
    void set_x(QubitId q);
    void set_z(QubitId q);
    void set_y(QubitId q);
};

/// Aaronson–Gottesman tableau simulator for Clifford circuits. RZ is
/// accepted when the angle is a multiple of pi/2, CP when it equals pi.
class StabilizerSim {
public:
    explicit StabilizerSim(int num_qubits);

    int num_qubits() const { return n_; }

    void apply_h(QubitId q);
    void apply_s(QubitId q);
    void apply_sdg(QubitId q);
    void apply_x(QubitId q);
    void apply_y(QubitId q);
    void apply_z(QubitId q);
    void apply_cx(QubitId c, QubitId t);
    void apply_cz(QubitId a, QubitId b);

    struct MeasResult {
        int outcome;
        bool deterministic;
    };
    MeasResult measure(QubitId q, Basis basis, Rng& rng, int forced = -1);

    /// +1 / -1 if the Pauli is (up to sign) in the stabilizer group,
    /// 0 if its expectation vanishes.
    int expectation(const PauliString& p) const;

private:
    int words() const { return (n_ + 63) / 64; }
    bool xbit(int row, int q) const;
    bool zbit(int row, int q) const;
    void mult_into(int h, int i);  // row h <- row i * row h

    int n_;
    // rows 0..n-1 destabilizers, n..2n-1 stabilizers, row 2n scratch
    std::vector<std::vector<uint64_t>> x_, z_;
    std::vector<char> r_;
};

struct StabRunResult {
    std::vector<int> bits;
    std::vector<char> deterministic;  // per bit
};

StabRunResult run_stabilizer(StabilizerSim& sim, const Circuit& c, Rng& rng,
                             const OutcomeForce& force = nullptr);

/// True when every gate of the circuit is Clifford (in the stabilizer
/// simulator's accepted set).
bool is_clifford(const Circuit& c);

struct CompiledProgram;  // scheduler.hpp

struct EquivReport {
    enum class Status { pass, fail, unverifiable };
    Status status = Status::unverifiable;
    std::string mode;    // "statevector" | "stabilizer"
    std::string detail;  // failure / refusal reason
    int trials = 0;
    double min_fidelity = 1.0;

    bool pass() const { return status == Status::pass; }
};

/// Compares a compiled program against its source on random product inputs
/// (statevector mode, total qubits <= 24) or, for Clifford circuits at any
/// size, on deterministic measurement bits (stabilizer mode).
EquivReport check_equivalence(const Circuit& original, const CompiledProgram& compiled,
                              int trials, uint64_t seed);

}  // namespace mech
