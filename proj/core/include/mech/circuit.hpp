#pragma once

#include <array>
#include <string>
#include <vector>

#include "mech/common.hpp"

namespace mech {

enum class GateKind { H, X, Y, Z, RZ, CX, CZ, CP, SWAP, BRIDGE, MEASURE, COND_PAULI };
enum class Basis { Z, X };

struct GateOp {
    GateKind kind = GateKind::H;
    std::array<QubitId, 3> q{-1, -1, -1};
    int nq = 1;
    double angle = 0.0;   // RZ, CP
    Basis basis = Basis::Z;  // MEASURE
    char pauli = 'Z';     // COND_PAULI: 'X' or 'Z'
    BitId bit = -1;       // MEASURE writes it, COND_PAULI reads it
    int tag = -1;         // optional shuttle / gate-group id

    bool is_two_qubit() const {
        return kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::CP ||
               kind == GateKind::SWAP;
    }
    bool touches(QubitId qu) const {
        for (int i = 0; i < nq; ++i)
            if (q[i] == qu) return true;
        return false;
    }
};

/// Gate-level circuit with classical bits. Append helpers validate their
/// arguments; a COND_PAULI may only reference a bit some earlier MEASURE
/// wrote.
class Circuit {
public:
    Circuit() = default;
    Circuit(int num_qubits, int num_bits = 0)
        : num_qubits_(num_qubits), num_bits_(num_bits), bit_written_(num_bits, false) {}

    int num_qubits() const { return num_qubits_; }
    int num_bits() const { return num_bits_; }
    const std::vector<GateOp>& gates() const { return gates_; }
    const GateOp& gate(GateId g) const { return gates_[g]; }
    int size() const { return static_cast<int>(gates_.size()); }
    bool empty() const { return gates_.empty(); }

    void h(QubitId q) { push1(GateKind::H, q); }
    void x(QubitId q) { push1(GateKind::X, q); }
    void y(QubitId q) { push1(GateKind::Y, q); }
    void z(QubitId q) { push1(GateKind::Z, q); }
    void rz(QubitId q, double angle);
    void cx(QubitId c, QubitId t) { push2(GateKind::CX, c, t); }
    void cz(QubitId a, QubitId b) { push2(GateKind::CZ, a, b); }
    void cp(QubitId a, QubitId b, double angle);
    void swap(QubitId a, QubitId b) { push2(GateKind::SWAP, a, b); }
    void bridge(QubitId c, QubitId m, QubitId t);
    /// Measures q in the given basis into a fresh classical bit.
    BitId measure(QubitId q, Basis basis = Basis::Z);
    /// Measures q into an existing bit id (must be < num_bits()).
    void measure_into(QubitId q, Basis basis, BitId bit);
    void cond_pauli(QubitId q, char pauli, BitId bit);

    void append(const GateOp& op);
    /// Appends every gate of `other` (same qubit space); classical bits of
    /// `other` are offset into freshly added bits. Returns old bit -> new bit.
    std::vector<BitId> append_circuit(const Circuit& other);

    BitId add_bit() {
        bit_written_.push_back(false);
        return num_bits_++;
    }

    void set_last_tag(int tag) {
        require(!gates_.empty(), "set_last_tag: empty circuit");
        gates_.back().tag = tag;
    }

private:
    void push1(GateKind k, QubitId q);
    void push2(GateKind k, QubitId a, QubitId b);
    void check_qubit(QubitId q) const;

    int num_qubits_ = 0;
    int num_bits_ = 0;
    std::vector<GateOp> gates_;
    std::vector<bool> bit_written_;
};

/// Rewrites to the basis {H, X, Y, Z, RZ, CX, MEASURE, COND_PAULI}:
/// SWAP -> 3 CX, BRIDGE -> 4 CX, CZ -> H.CX.H, CP -> 2 CX + 3 RZ.
Circuit decompose_to_basis(const Circuit& c);

/// How a gate acts on one of its qubits for commutation purposes. Gates
/// diagonal in the Z (resp. X) basis on a shared qubit commute with each
/// other there; anything else blocks.
enum class QubitAction { zdiag, xdiag, blocking };
QubitAction qubit_action(const GateOp& op, QubitId q);

/// Every unexecuted gate that commutes with all unexecuted gates preceding
/// it in program order. `executed` must be dependency-closed.
std::vector<GateId> commuting_frontier(const Circuit& c, const std::vector<bool>& executed);

/// Incremental frontier maintenance for the compile loop. Semantics match
/// commuting_frontier: ready() is the frontier for the executed-set built
/// up through mark_executed().
class FrontierTracker {
public:
    explicit FrontierTracker(const Circuit& c);
    const std::vector<GateId>& ready() const { return ready_; }
    bool done() const { return executed_count_ == total_; }
    bool is_executed(GateId g) const { return executed_[g]; }
    void mark_executed(GateId g);

private:
    struct Resource {
        std::vector<int> pending;                // per wave
        std::vector<std::vector<GateId>> members;  // per wave
        int cur = 0;
    };
    void advance(int res);

    int total_ = 0;
    int executed_count_ = 0;
    std::vector<char> executed_;
    std::vector<Resource> resources_;  // qubits, then classical bits
    std::vector<std::vector<std::pair<int, int>>> gate_waves_;  // gate -> (res, wave)
    std::vector<int> blocked_count_;
    std::vector<GateId> ready_;  // kept sorted
};

struct MtgComponent {
    QubitId target;
    bool is_phase;  // true: controlled-RZ(angle); false: plain CX
    double angle;
    GateId origin;
};

struct MultiTargetGate {
    QubitId control;
    bool conjugated = false;    // realized as H(control) . components . H(control)
    double control_phase = 0.0; // residual RZ on the control
    std::vector<MtgComponent> components;
};

struct Aggregation {
    std::vector<MultiTargetGate> groups;  // descending component count
    std::vector<GateId> residual;         // frontier gates left unaggregated
};

/// Groups the frontier's controlled gates into multi-target gates sharing a
/// control. CX runs sharing only a target are H-conjugated into a shared
/// control when that beats the plain grouping. A data qubit is claimed by at
/// most one group per call; claimed-out gates fall back to residual.
Aggregation aggregate_frontier(const Circuit& c, const std::vector<GateId>& frontier);

/// ASAP depth with CX = 1, MEASURE = meas_depth, everything else free.
/// Requires a decomposed circuit.
double weighted_depth(const Circuit& c, double meas_depth);

/// ASAP depth counting every multi-qubit gate as 1 and ignoring the rest.
int two_qubit_depth(const Circuit& c);

/// Remaps the circuit onto its touched qubits (ascending). Returns the
/// compact circuit and the support as original qubit ids: compact qubit i
/// corresponds to support[i].
std::pair<Circuit, std::vector<QubitId>> compact_circuit(const Circuit& c);

}  // namespace mech
