#pragma once

#include <functional>

#include "mech/scheduler.hpp"

namespace mech {

/// Bijection between logical data qubits and physical nodes, plus the state
/// tag of every non-logical node (for ancilla reuse bookkeeping).
class MappingState {
public:
    enum class Anc { zero, junk, xmeas, zmeas, entangled };

    MappingState(int num_qubits, const std::vector<NodeId>& placement, int num_nodes);

    NodeId node_of(QubitId q) const { return log_to_phys_[q]; }
    QubitId logical_at(NodeId n) const { return phys_to_log_[n]; }
    bool holds_logical(NodeId n) const { return phys_to_log_[n] >= 0; }

    /// Exchanges the contents of two nodes (logical or ancilla alike).
    void swap_nodes(NodeId a, NodeId b);

    Anc ancilla_state(NodeId n) const { return anc_[n]; }
    BitId ancilla_bit(NodeId n) const { return anc_bit_[n]; }
    void set_ancilla(NodeId n, Anc state, BitId bit = -1);

    const std::vector<NodeId>& log_to_phys() const { return log_to_phys_; }

private:
    std::vector<NodeId> log_to_phys_;
    std::vector<QubitId> phys_to_log_;
    std::vector<Anc> anc_;
    std::vector<BitId> anc_bit_;
};

/// Emits physical gates while tracking per-node ASAP timelines (CX = 1,
/// measurement = meas_depth, 1-qubit ops free). The timelines double as the
/// routing reservation table.
class Emitter {
public:
    Emitter(Circuit& phys, double meas_depth)
        : phys_(phys), meas_depth_(meas_depth), node_time_(phys.num_qubits(), 0.0) {}

    void one_q(GateKind k, NodeId n, double angle = 0.0);
    void cx(NodeId a, NodeId b);
    void swap(NodeId a, NodeId b);      // 3 CX
    void bridge(NodeId c, NodeId m, NodeId t);  // 4 CX
    BitId measure(NodeId n, Basis basis);
    void measure_into(NodeId n, Basis basis, BitId bit);
    void cond_pauli(NodeId n, char pauli, BitId bit);

    /// Appends a fragment circuit (same node space); returns local->global
    /// bit ids.
    std::vector<BitId> append_fragment(const Circuit& frag);

    double node_time(NodeId n) const { return node_time_[n]; }
    double depth() const { return depth_; }
    Circuit& circuit() { return phys_; }

private:
    void bump2(NodeId a, NodeId b);

    Circuit& phys_;
    double meas_depth_;
    std::vector<double> node_time_;
    std::vector<double> bit_time_;
    double depth_ = 0.0;
};

using NodeFilter = std::function<bool(NodeId)>;

/// Deterministic BFS shortest path between nodes through allowed nodes
/// (endpoints always allowed). Empty when unreachable.
std::vector<NodeId> route_path(const CouplingGraph& g, NodeId from, NodeId to,
                               const NodeFilter& allowed);

/// SWAP-routes logical qubit q until its node is adjacent to `entrance`,
/// avoiding barred nodes. Returns the number of SWAPs emitted.
int route_to_entrance(const CouplingGraph& g, Emitter& em, MappingState& mapping,
                      QubitId q, NodeId entrance, const NodeFilter& allowed);

/// Executes a residual 2-qubit gate by meet-in-the-middle SWAP routing;
/// distance-2 CX/CZ use a bridge instead of a final SWAP.
void route_offhighway_gate(const CouplingGraph& g, Emitter& em, MappingState& mapping,
                           const GateOp& op, const NodeFilter& allowed);

}  // namespace mech
