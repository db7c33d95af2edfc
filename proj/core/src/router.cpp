#include "mech/router.hpp"

#include <algorithm>
#include <deque>

namespace mech {

MappingState::MappingState(int num_qubits, const std::vector<NodeId>& placement,
                           int num_nodes)
    : log_to_phys_(placement),
      phys_to_log_(num_nodes, -1),
      anc_(num_nodes, Anc::zero),
      anc_bit_(num_nodes, -1) {
    require(static_cast<int>(placement.size()) == num_qubits,
            "placement size mismatch");
    for (QubitId q = 0; q < num_qubits; ++q) {
        require(placement[q] >= 0 && placement[q] < num_nodes, "placement out of range");
        require(phys_to_log_[placement[q]] < 0, "placement is not injective");
        phys_to_log_[placement[q]] = q;
    }
}

void MappingState::swap_nodes(NodeId a, NodeId b) {
    const QubitId qa = phys_to_log_[a], qb = phys_to_log_[b];
    phys_to_log_[a] = qb;
    phys_to_log_[b] = qa;
    if (qa >= 0) log_to_phys_[qa] = b;
    if (qb >= 0) log_to_phys_[qb] = a;
    std::swap(anc_[a], anc_[b]);
    std::swap(anc_bit_[a], anc_bit_[b]);
}

void MappingState::set_ancilla(NodeId n, Anc state, BitId bit) {
    anc_[n] = state;
    anc_bit_[n] = bit;
}

void Emitter::bump2(NodeId a, NodeId b) {
    const double t = std::max(node_time_[a], node_time_[b]) + 1.0;
    node_time_[a] = node_time_[b] = t;
    depth_ = std::max(depth_, t);
}

void Emitter::one_q(GateKind k, NodeId n, double angle) {
    switch (k) {
        case GateKind::H: phys_.h(n); break;
        case GateKind::X: phys_.x(n); break;
        case GateKind::Y: phys_.y(n); break;
        case GateKind::Z: phys_.z(n); break;
        case GateKind::RZ: phys_.rz(n, angle); break;
        default: throw MechError("one_q: not a 1-qubit gate");
    }
}

void Emitter::cx(NodeId a, NodeId b) {
    phys_.cx(a, b);
    bump2(a, b);
}

void Emitter::swap(NodeId a, NodeId b) {
    phys_.cx(a, b);
    bump2(a, b);
    phys_.cx(b, a);
    bump2(a, b);
    phys_.cx(a, b);
    bump2(a, b);
}

void Emitter::bridge(NodeId c, NodeId m, NodeId t) {
    phys_.cx(c, m);
    bump2(c, m);
    phys_.cx(m, t);
    bump2(m, t);
    phys_.cx(c, m);
    bump2(c, m);
    phys_.cx(m, t);
    bump2(m, t);
}

BitId Emitter::measure(NodeId n, Basis basis) {
    const BitId bit = phys_.measure(n, basis);
    if (static_cast<int>(bit_time_.size()) <= bit) bit_time_.resize(bit + 1, 0.0);
    node_time_[n] += meas_depth_;
    bit_time_[bit] = node_time_[n];
    depth_ = std::max(depth_, node_time_[n]);
    return bit;
}

void Emitter::measure_into(NodeId n, Basis basis, BitId bit) {
    phys_.measure_into(n, basis, bit);
    if (static_cast<int>(bit_time_.size()) <= bit) bit_time_.resize(bit + 1, 0.0);
    node_time_[n] += meas_depth_;
    bit_time_[bit] = node_time_[n];
    depth_ = std::max(depth_, node_time_[n]);
}

void Emitter::cond_pauli(NodeId n, char pauli, BitId bit) {
    phys_.cond_pauli(n, pauli, bit);
    if (static_cast<int>(bit_time_.size()) <= bit) bit_time_.resize(bit + 1, 0.0);
    node_time_[n] = std::max(node_time_[n], bit_time_[bit]);
}

std::vector<BitId> Emitter::append_fragment(const Circuit& frag) {
    std::vector<BitId> bit_map(frag.num_bits(), -1);
    for (const GateOp& op : frag.gates()) {
        switch (op.kind) {
            case GateKind::CX: cx(op.q[0], op.q[1]); break;
            case GateKind::CZ:
                one_q(GateKind::H, op.q[1]);
                cx(op.q[0], op.q[1]);
                one_q(GateKind::H, op.q[1]);
                break;
            case GateKind::SWAP: swap(op.q[0], op.q[1]); break;
            case GateKind::BRIDGE: bridge(op.q[0], op.q[1], op.q[2]); break;
            case GateKind::CP: {
                one_q(GateKind::RZ, op.q[0], op.angle / 2);
                one_q(GateKind::RZ, op.q[1], op.angle / 2);
                cx(op.q[0], op.q[1]);
                one_q(GateKind::RZ, op.q[1], -op.angle / 2);
                cx(op.q[0], op.q[1]);
                break;
            }
            case GateKind::MEASURE: {
                if (bit_map[op.bit] < 0) bit_map[op.bit] = phys_.add_bit();
                measure_into(op.q[0], op.basis, bit_map[op.bit]);
                break;
            }
            case GateKind::COND_PAULI: {
                require(bit_map[op.bit] >= 0, "fragment reads an unwritten bit");
                cond_pauli(op.q[0], op.pauli, bit_map[op.bit]);
                break;
            }
            default:
                one_q(op.kind, op.q[0], op.angle);
        }
    }
    return bit_map;
}

std::vector<NodeId> route_path(const CouplingGraph& g, NodeId from, NodeId to,
                               const NodeFilter& allowed) {
    if (from == to) return {from};
    std::vector<int> parent(g.num_nodes(), -2);
    parent[from] = -1;
    std::deque<NodeId> q{from};
    while (!q.empty()) {
        const NodeId n = q.front();
        q.pop_front();
        for (const auto& [m, kind] : g.neighbors(n)) {
            if (parent[m] != -2) continue;
            if (m != to && !allowed(m)) continue;
            parent[m] = n;
            if (m == to) {
                std::vector<NodeId> path;
                for (NodeId cur = to; cur != -1; cur = parent[cur]) path.push_back(cur);
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push_back(m);
        }
    }
    return {};
}

int route_to_entrance(const CouplingGraph& g, Emitter& em, MappingState& mapping,
                      QubitId q, NodeId entrance, const NodeFilter& allowed) {
    const NodeId start = mapping.node_of(q);
    if (g.adjacent(start, entrance)) return 0;
    // shortest path to the entrance, then stop one hop short
    auto path = route_path(g, start, entrance, allowed);
    require(path.size() >= 2, "route_to_entrance: entrance unreachable");
    int swaps = 0;
    for (size_t i = 1; i + 1 < path.size(); ++i) {
        em.swap(path[i - 1], path[i]);
        mapping.swap_nodes(path[i - 1], path[i]);
        ++swaps;
    }
    return swaps;
}

void route_offhighway_gate(const CouplingGraph& g, Emitter& em, MappingState& mapping,
                           const GateOp& op, const NodeFilter& allowed) {
    require(op.nq == 2, "route_offhighway_gate: 2-qubit gates only");
    NodeId a = mapping.node_of(op.q[0]);
    NodeId b = mapping.node_of(op.q[1]);
    auto path = route_path(g, a, b, allowed);
    require(!path.empty(), "route_offhighway_gate: qubits disconnected");
    int lo = 0, hi = static_cast<int>(path.size()) - 1;
    const bool bridgeable = op.kind == GateKind::CX || op.kind == GateKind::CZ;
    const int stop_dist = bridgeable ? 2 : 1;

    // meet in the middle
    while (hi - lo > stop_dist) {
        em.swap(path[lo], path[lo + 1]);
        mapping.swap_nodes(path[lo], path[lo + 1]);
        ++lo;
        if (hi - lo > stop_dist) {
            em.swap(path[hi], path[hi - 1]);
            mapping.swap_nodes(path[hi], path[hi - 1]);
            --hi;
        }
    }
    a = path[lo];
    b = path[hi];
    const int dist = hi - lo;
    switch (op.kind) {
        case GateKind::CX:
            if (dist == 1)
                em.cx(a, b);
            else
                em.bridge(a, path[lo + 1], b);
            break;
        case GateKind::CZ:
            em.one_q(GateKind::H, b);
            if (dist == 1)
                em.cx(a, b);
            else
                em.bridge(a, path[lo + 1], b);
            em.one_q(GateKind::H, b);
            break;
        case GateKind::CP: {
            em.one_q(GateKind::RZ, a, op.angle / 2);
            em.one_q(GateKind::RZ, b, op.angle / 2);
            em.cx(a, b);
            em.one_q(GateKind::RZ, b, -op.angle / 2);
            em.cx(a, b);
            break;
        }
        default:
            throw MechError("route_offhighway_gate: unsupported gate kind");
    }
}

}  // namespace mech
