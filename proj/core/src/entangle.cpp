#include "mech/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mech/sim.hpp"

namespace mech {

namespace {

/// Appends the pipelined bridged-CZ gadget for edge (u, w) through slot s.
/// CZ(u,w) = CZ(s,w) CX(u,s) CZ(s,w) CX(u,s); round k emits the k-th gate of
/// every bridged edge so the whole layer costs 4 two-qubit steps.
struct BridgedCz {
    NodeId u, s, w;
};

void emit_bridged_round(Circuit& c, const std::vector<BridgedCz>& edges, int round) {
    for (const auto& e : edges) {
        if (round % 2 == 0)
            c.cz(e.s, e.w);
        else
            c.cx(e.u, e.s);
    }
}

struct BridgedCx {
    NodeId u, s, w;  // effective CX(u -> w) through s, pipelined BABA
};

void emit_bridged_cx_round(Circuit& c, const std::vector<BridgedCx>& edges, int round) {
    for (const auto& e : edges) {
        if (round % 2 == 0)
            c.cx(e.s, e.w);
        else
            c.cx(e.u, e.s);
    }
}

/// Derives the measurement-conditioned Pauli frame of a fragment: runs the
/// tableau once per forced single-outcome branch, reads off the syndrome
/// against the ideal GHZ generators on the survivors, and appends the
/// corrections (unconditional part first, then per-bit COND_PAULIs).
void derive_and_append_frame(GhzFragment& frag) {
    if (frag.surviving.empty()) return;
    auto [compact, support] = compact_circuit(frag.circ);
    std::vector<QubitId> surv_idx;
    for (NodeId n : frag.surviving) {
        auto it = std::lower_bound(support.begin(), support.end(), n);
        require(it != support.end() && *it == n, "survivor outside fragment support");
        surv_idx.push_back(static_cast<QubitId>(it - support.begin()));
    }

    const int nmeas = static_cast<int>(frag.measurements.size());
    const int k = static_cast<int>(surv_idx.size());

    // syndrome of one forced branch: k bits (X_all sign, then Z s0 s_i signs)
    auto branch_syndrome = [&](int hot) {
        StabilizerSim sim(std::max(1, compact.num_qubits()));
        Rng rng(1);
        auto force = [&](int meas_index, BitId) { return meas_index == hot ? 1 : 0; };
        run_stabilizer(sim, compact, rng, force);
        std::vector<char> syn(k, 0);
        PauliString xall(compact.num_qubits());
        for (QubitId q : surv_idx) xall.set_x(q);
        int e = sim.expectation(xall);
        require(e != 0, "prep fragment did not produce a GHZ-class state");
        syn[0] = e < 0;
        for (int i = 1; i < k; ++i) {
            PauliString zz(compact.num_qubits());
            zz.set_z(surv_idx[0]);
            zz.set_z(surv_idx[i]);
            e = sim.expectation(zz);
            require(e != 0, "prep fragment did not produce a GHZ-class state");
            syn[i] = e < 0;
        }
        return syn;
    };

    // Decode: X on survivor i for each violated Z s0 s_i pair, plus Z on s0
    // when the X...X sign is off. Linear in the syndrome, so per-bit deltas
    // compose.
    const auto base = branch_syndrome(-1);
    std::vector<std::vector<char>> deltas(nmeas);
    for (int j = 0; j < nmeas; ++j) {
        auto syn = branch_syndrome(j);
        deltas[j].resize(k);
        for (int i = 0; i < k; ++i) deltas[j][i] = syn[i] ^ base[i];
    }

    if (base[0]) frag.circ.z(frag.surviving[0]);
    for (int i = 1; i < k; ++i)
        if (base[i]) frag.circ.x(frag.surviving[i]);
    for (int j = 0; j < nmeas; ++j) {
        const BitId bit = frag.measurements[j].second;
        if (deltas[j][0]) frag.circ.cond_pauli(frag.surviving[0], 'Z', bit);
        for (int i = 1; i < k; ++i)
            if (deltas[j][i]) frag.circ.cond_pauli(frag.surviving[i], 'X', bit);
    }
}

}  // namespace

GhzFragment ghz_prep_tree(const CouplingGraph& g, const PrepTree& tree) {
    const int n = static_cast<int>(tree.nodes.size());
    require(n >= 1, "prep tree is empty");
    require(tree.required.size() == tree.nodes.size(), "required mask size mismatch");

    // adjacency by node index
    std::vector<std::vector<std::pair<int, NodeId>>> children(n);
    std::vector<int> parent(n, -1);
    std::vector<NodeId> parent_slot(n, -1);
    for (const auto& e : tree.edges) {
        require(e.parent >= 0 && e.parent < n && e.child >= 0 && e.child < n,
                "prep tree edge out of range");
        children[e.parent].emplace_back(e.child, e.via_slot);
        parent[e.child] = e.parent;
        parent_slot[e.child] = e.via_slot;
        if (e.via_slot < 0)
            require(g.adjacent(tree.nodes[e.parent], tree.nodes[e.child]),
                    "prep tree edge joins non-adjacent nodes");
        else
            require(g.adjacent(tree.nodes[e.parent], e.via_slot) &&
                        g.adjacent(e.via_slot, tree.nodes[e.child]),
                    "prep tree bridge is not a physical path");
    }

    enum class Kind { cluster_even, cluster_odd, fused, appendage };
    std::vector<Kind> kind(n, Kind::cluster_even);
    // BFS order guarantees parents are classified before children.
    std::vector<int> order;
    order.push_back(0);
    for (size_t i = 0; i < order.size(); ++i)
        for (const auto& [c, s] : children[order[i]]) order.push_back(c);
    require(static_cast<int>(order.size()) == n, "prep tree is not connected");

    std::vector<char> even(n, 1);
    for (int idx : order) {
        if (idx == 0) {
            even[0] = 1;
            kind[0] = Kind::cluster_even;
            continue;
        }
        const int p = parent[idx];
        const bool fused_parent = kind[p] == Kind::fused;
        const bool parent_even = even[p];
        bool e = !parent_even;
        if (tree.required[idx] && !e) {
            if (children[idx].empty()) {
                kind[idx] = Kind::appendage;
                even[idx] = 1;
                continue;
            }
            kind[idx] = Kind::fused;  // joins the parent's survivor cell
            even[idx] = 1;
            require(parent_even || fused_parent, "parity fix needs a surviving parent");
            continue;
        }
        even[idx] = e;
        kind[idx] = e ? Kind::cluster_even : Kind::cluster_odd;
    }

    GhzFragment frag;
    frag.circ = Circuit(g.num_nodes());

    // H layer on all cluster nodes (fused cells and appendages start in |0>).
    for (int idx : order)
        if (kind[idx] == Kind::cluster_even || kind[idx] == Kind::cluster_odd)
            frag.circ.h(tree.nodes[idx]);

    // Parity-fix merges, before any CZ touches the fused node.
    for (int idx : order) {
        if (kind[idx] != Kind::fused) continue;
        const NodeId u = tree.nodes[parent[idx]], v = tree.nodes[idx];
        if (parent_slot[idx] < 0)
            frag.circ.cx(u, v);
        else
            frag.circ.bridge(u, parent_slot[idx], v);
    }

    // Cluster edges: direct CZs in two depth layers, bridged CZs pipelined.
    std::vector<std::pair<NodeId, NodeId>> direct_a, direct_b;
    std::vector<BridgedCz> bridged;
    std::vector<int> depth(n, 0);
    for (int idx : order)
        if (idx != 0) depth[idx] = depth[parent[idx]] + 1;
    std::vector<char> busy_a(g.num_nodes(), 0), busy_b(g.num_nodes(), 0);
    for (int idx : order) {
        if (idx == 0 || kind[idx] == Kind::appendage || kind[idx] == Kind::fused) continue;
        const NodeId u = tree.nodes[parent[idx]], w = tree.nodes[idx];
        if (parent_slot[idx] < 0) {
            if (depth[idx] % 2 == 1) {
                direct_a.emplace_back(u, w);
                busy_a[u] = busy_a[w] = 1;
            } else {
                direct_b.emplace_back(u, w);
                busy_b[u] = busy_b[w] = 1;
            }
        } else {
            bridged.push_back({u, parent_slot[idx], w});
        }
    }

    // Parity-fix extensions: a CX from the surviving neighbor. These commute
    // with Z-side cluster action on the parent, so a direct extension can
    // fill whichever CZ layer leaves its parent free.
    std::vector<BridgedCx> ext_bridged;
    std::vector<std::pair<NodeId, NodeId>> ext_layer_a, ext_layer_b, ext_late;
    for (int idx : order) {
        if (kind[idx] != Kind::appendage) continue;
        const NodeId u = tree.nodes[parent[idx]], v = tree.nodes[idx];
        if (parent_slot[idx] >= 0) {
            ext_bridged.push_back({u, parent_slot[idx], v});
        } else if (!busy_a[u]) {
            ext_layer_a.emplace_back(u, v);
            busy_a[u] = 1;
        } else if (!busy_b[u]) {
            ext_layer_b.emplace_back(u, v);
            busy_b[u] = 1;
        } else {
            ext_late.emplace_back(u, v);
        }
    }

    for (const auto& [u, v] : ext_layer_a) frag.circ.cx(u, v);
    for (const auto& [u, w] : direct_a) frag.circ.cz(u, w);
    for (const auto& [u, v] : ext_layer_b) frag.circ.cx(u, v);
    for (const auto& [u, w] : direct_b) frag.circ.cz(u, w);
    for (const auto& [u, v] : ext_late) frag.circ.cx(u, v);
    for (int round = 0; round < 4; ++round) {
        emit_bridged_round(frag.circ, bridged, round);
        emit_bridged_cx_round(frag.circ, ext_bridged, round);
    }

    // Measure the odd class in X; survivors carry the GHZ.
    for (int idx : order) {
        if (kind[idx] != Kind::cluster_odd) continue;
        const NodeId node = tree.nodes[idx];
        const BitId bit = frag.circ.measure(node, Basis::X);
        frag.measurements.emplace_back(node, bit);
    }

    for (int idx : order) {
        const NodeId node = tree.nodes[idx];
        frag.support.push_back(node);
        if (parent_slot[idx] >= 0) frag.support.push_back(parent_slot[idx]);
        if (kind[idx] != Kind::cluster_odd) frag.surviving.push_back(node);
    }
    std::sort(frag.support.begin(), frag.support.end());
    frag.support.erase(std::unique(frag.support.begin(), frag.support.end()),
                       frag.support.end());
    std::sort(frag.surviving.begin(), frag.surviving.end());

    derive_and_append_frame(frag);
    return frag;
}

GhzFragment ghz_prep_contiguous(const CouplingGraph& g, const std::vector<NodeId>& path) {
    require(path.size() >= 2, "contiguous prep needs length >= 2");
    for (size_t i = 0; i + 1 < path.size(); ++i)
        require(g.adjacent(path[i], path[i + 1]),
                "contiguous prep: consecutive nodes must be adjacent");
    PrepTree tree;
    tree.nodes = path;
    tree.required.assign(path.size(), 0);
    tree.required.front() = 1;
    tree.required.back() = 1;
    for (int i = 1; i < static_cast<int>(path.size()); ++i)
        tree.edges.push_back({i - 1, i, -1});
    return ghz_prep_tree(g, tree);
}

GhzFragment ghz_prep_interleaved(const CouplingGraph& g, const HighwayLayout& layout,
                                 const std::vector<NodeId>& segment) {
    require(segment.size() >= 2, "interleaved prep needs length >= 2");
    require(layout.is_backbone(segment.front()) && layout.is_backbone(segment.back()),
            "segment endpoints must be backbone nodes");
    PrepTree tree;
    NodeId pending_slot = -1;
    for (size_t i = 0; i < segment.size(); ++i) {
        const NodeId n = segment[i];
        if (i > 0)
            require(g.adjacent(segment[i - 1], n), "segment nodes must be adjacent");
        if (layout.is_slot(n)) {
            require(pending_slot < 0 && i > 0 && i + 1 < segment.size(),
                    "malformed backbone/slot alternation");
            pending_slot = n;
            continue;
        }
        require(layout.is_backbone(n), "segment may only contain highway nodes");
        const int idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(n);
        tree.required.push_back(0);
        if (idx > 0) {
            tree.edges.push_back({idx - 1, idx, pending_slot});
            pending_slot = -1;
        }
    }
    require(pending_slot < 0, "segment ends on a slot");
    tree.required.front() = 1;
    tree.required.back() = 1;
    return ghz_prep_tree(g, tree);
}

GhzFragment extend_ghz(const CouplingGraph& g, const std::vector<NodeId>& existing,
                       NodeId helper, NodeId fresh,
                       const std::vector<NodeId>& fresh_members) {
    require(!existing.empty(), "extend_ghz: existing GHZ is empty");
    require(g.adjacent(helper, fresh), "extend_ghz: helper must touch the fresh node");
    NodeId member = -1;
    for (NodeId m : existing)
        if (g.adjacent(m, helper)) {
            member = m;
            break;
        }
    require(member >= 0, "extend_ghz: helper must touch an existing member");

    GhzFragment frag;
    frag.circ = Circuit(g.num_nodes());
    frag.circ.cx(member, helper);
    frag.circ.cx(fresh, helper);
    const BitId bit = frag.circ.measure(helper, Basis::Z);
    frag.measurements.emplace_back(helper, bit);
    std::vector<NodeId> joiners = fresh_members.empty()
                                      ? std::vector<NodeId>{fresh}
                                      : fresh_members;
    for (NodeId m : joiners) frag.circ.cond_pauli(m, 'X', bit);

    frag.support = existing;
    frag.support.push_back(helper);
    for (NodeId m : joiners) frag.support.push_back(m);
    std::sort(frag.support.begin(), frag.support.end());
    frag.support.erase(std::unique(frag.support.begin(), frag.support.end()),
                       frag.support.end());
    frag.surviving = existing;
    for (NodeId m : joiners) frag.surviving.push_back(m);
    std::sort(frag.surviving.begin(), frag.surviving.end());
    return frag;
}

GhzFragment reentangle_entrances(const CouplingGraph& g, const GhzFragment& prep,
                                 const std::vector<NodeId>& needed,
                                 const std::map<NodeId, long>& gate_load) {
    // Extends the prep fragment in place (shared classical bits): each needed
    // node is reset from its recorded |+/-> state and CX-joined to the GHZ.
    GhzFragment frag = prep;
    if (needed.empty()) return frag;

    std::map<NodeId, BitId> prep_bit;
    for (const auto& [node, bit] : prep.measurements) prep_bit[node] = bit;

    for (NodeId e : needed) {
        require(prep_bit.count(e), "reentangle: node was not measured during prep");
        // nearest surviving source; ties by least gate load, then node id
        std::vector<int> dist = distance_map(g, {e}, {});
        NodeId best = -1;
        long best_load = 0;
        int best_dist = 0;
        for (NodeId s : frag.surviving) {
            if (dist[s] < 0) continue;
            auto it = gate_load.find(s);
            const long load = it == gate_load.end() ? 0 : it->second;
            if (best < 0 || dist[s] < best_dist ||
                (dist[s] == best_dist &&
                 (load < best_load || (load == best_load && s < best)))) {
                best = s;
                best_dist = dist[s];
                best_load = load;
            }
        }
        require(best >= 0, "reentangle: no surviving source reachable");

        // reset |+/-> back to |0>, then extend by a CX from the source
        frag.circ.h(e);
        frag.circ.cond_pauli(e, 'X', prep_bit[e]);
        if (best_dist == 1) {
            frag.circ.cx(best, e);
        } else if (best_dist == 2) {
            NodeId mid = -1;
            for (const auto& [m, k] : g.neighbors(best))
                if (g.adjacent(m, e) && m != e) {
                    mid = m;
                    break;
                }
            require(mid >= 0, "reentangle: no bridge midpoint");
            frag.circ.bridge(best, mid, e);
        } else {
            throw MechError("reentangle: source too far from entrance");
        }
        frag.surviving.push_back(e);
        frag.support.push_back(e);
    }
    std::sort(frag.surviving.begin(), frag.surviving.end());
    frag.surviving.erase(std::unique(frag.surviving.begin(), frag.surviving.end()),
                         frag.surviving.end());
    std::sort(frag.support.begin(), frag.support.end());
    frag.support.erase(std::unique(frag.support.begin(), frag.support.end()),
                       frag.support.end());
    return frag;
}

void cat_attach_control(Circuit& phys, const CouplingGraph& g, NodeId control,
                        NodeId control_entrance, const std::vector<NodeId>& other_members) {
    require(g.adjacent(control, control_entrance),
            "cat protocol: control must touch its entrance");
    phys.cx(control, control_entrance);
    const BitId bit = phys.measure(control_entrance, Basis::Z);
    for (NodeId m : other_members)
        if (m != control_entrance) phys.cond_pauli(m, 'X', bit);
}

void cat_component(Circuit& phys, const CouplingGraph& g, const CatComponent& comp) {
    require(g.adjacent(comp.entrance, comp.target),
            "cat protocol: target must touch its entrance");
    constexpr double kPi = 3.14159265358979323846;
    if (!comp.is_phase) {
        phys.cx(comp.entrance, comp.target);
        return;
    }
    if (std::abs(comp.angle - kPi) < 1e-12) {
        // controlled-Z form: one effective CX
        phys.h(comp.target);
        phys.cx(comp.entrance, comp.target);
        phys.h(comp.target);
        phys.rz(comp.entrance, -kPi / 2);
        return;
    }
    phys.rz(comp.target, comp.angle / 2);
    phys.cx(comp.entrance, comp.target);
    phys.rz(comp.target, -comp.angle / 2);
    phys.cx(comp.entrance, comp.target);
}

void cat_disentangle(Circuit& phys, const CouplingGraph& g, NodeId control,
                     const std::vector<NodeId>& members_to_measure) {
    (void)g;
    for (NodeId m : members_to_measure) {
        const BitId bit = phys.measure(m, Basis::X);
        phys.cond_pauli(control, 'Z', bit);
    }
}

Circuit cat_protocol(const CouplingGraph& g, NodeId control, NodeId control_entrance,
                     const std::vector<CatComponent>& components,
                     const std::vector<NodeId>& ghz_members) {
    Circuit phys(g.num_nodes());
    bool entrance_is_member = false;
    for (NodeId m : ghz_members) entrance_is_member |= m == control_entrance;
    require(entrance_is_member, "cat protocol: control entrance must be a GHZ member");
    std::vector<NodeId> others;
    for (NodeId m : ghz_members)
        if (m != control_entrance) others.push_back(m);
    for (const auto& comp : components) {
        bool ok = false;
        for (NodeId m : others) ok |= m == comp.entrance;
        require(ok, "cat protocol: component entrance must be a surviving member");
    }
    cat_attach_control(phys, g, control, control_entrance, others);
    for (const auto& comp : components) cat_component(phys, g, comp);
    cat_disentangle(phys, g, control, others);
    return phys;
}

}  // namespace mech
