#pragma once

#include <map>
#include <vector>

#include "mech/circuit.hpp"
#include "mech/highway.hpp"
#include "mech/topology.hpp"

namespace mech {

/// A synthesized entanglement fragment. The circuit is laid out over
/// physical node ids (qubit i = node i); classical bits are local to the
/// fragment and offset on composition.
struct GhzFragment {
    Circuit circ;
    std::vector<NodeId> support;    // every node the fragment touches
    std::vector<NodeId> surviving;  // GHZ members once the fragment ran
    std::vector<std::pair<NodeId, BitId>> measurements;  // (node, local bit)
};

/// Backbone tree for GHZ preparation. Edges may be bridged across one
/// interleave slot. nodes[0] is the root; `required` marks nodes that must
/// end up in the GHZ (entrances, crossroads, path ends).
struct PrepTree {
    std::vector<NodeId> nodes;
    struct Edge {
        int parent, child;  // indices into nodes
        NodeId via_slot;    // -1 for a direct coupling
    };
    std::vector<Edge> edges;
    std::vector<char> required;
};

/// Cluster-state GHZ preparation over an arbitrary backbone tree: H layer,
/// two CZ layers (bridged edges pipelined through their slots), X-basis
/// measurement of the non-surviving class, and a mechanically derived Pauli
/// frame. Wrong-parity required nodes are fixed by a CX (or bridge) merge,
/// restoring the odd spacing.
GhzFragment ghz_prep_tree(const CouplingGraph& g, const PrepTree& tree);

/// Linear cluster prep on a contiguous path of ancillas (length >= 2).
GhzFragment ghz_prep_contiguous(const CouplingGraph& g, const std::vector<NodeId>& path);

/// Fig.-7-style prep over a sparse segment whose interior alternates
/// backbone / interleave slot; slot data states are preserved.
GhzFragment ghz_prep_interleaved(const CouplingGraph& g, const HighwayLayout& layout,
                                 const std::vector<NodeId>& segment);

/// Grows a GHZ by one unit: existing member and `fresh` both CX into the
/// helper, which is Z-measured; outcome 1 leaves a conditional X on the
/// fresh side. Passing a fresh GHZ's members merges the two states.
GhzFragment extend_ghz(const CouplingGraph& g, const std::vector<NodeId>& existing,
                       NodeId helper, NodeId fresh,
                       const std::vector<NodeId>& fresh_members = {});

/// Re-joins prep-measured nodes that are needed as entrances: each is reset
/// and CX-extended from the nearest surviving neighbor, ties broken by
/// least accumulated gate load, then node id. Returns the prep fragment
/// extended with the re-entangling gates (shared classical bits).
GhzFragment reentangle_entrances(const CouplingGraph& g, const GhzFragment& prep,
                                 const std::vector<NodeId>& needed,
                                 const std::map<NodeId, long>& gate_load);

struct CatComponent {
    NodeId target;    // data node
    NodeId entrance;  // GHZ member adjacent to target
    bool is_phase;    // controlled-RZ instead of CX
    double angle;
};

/// One full communication round: entangle the control into the GHZ through
/// its entrance (consuming it), run all components off their entrances, then
/// disentangle with X measurements and a conditional Z frame on the control.
Circuit cat_protocol(const CouplingGraph& g, NodeId control, NodeId control_entrance,
                     const std::vector<CatComponent>& components,
                     const std::vector<NodeId>& ghz_members);

/// Emission pieces of cat_protocol, for interleaved scheduling. All operate
/// on a shared physical circuit.
void cat_attach_control(Circuit& phys, const CouplingGraph& g, NodeId control,
                        NodeId control_entrance, const std::vector<NodeId>& other_members);
void cat_component(Circuit& phys, const CouplingGraph& g, const CatComponent& comp);
void cat_disentangle(Circuit& phys, const CouplingGraph& g, NodeId control,
                     const std::vector<NodeId>& members_to_measure);

}  // namespace mech
