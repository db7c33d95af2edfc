#pragma once

#include <map>
#include <vector>

#include "mech/topology.hpp"

namespace mech {

/// Mesh controls. Periods default to the chiplet dimensions (one line per
/// chiplet band); density_multiplier packs that many lines into each band.
struct HighwayConfig {
    int mesh_period_rows = -1;  // -1: chiplet_rows
    int mesh_period_cols = -1;  // -1: chiplet_cols
    int density_multiplier = 1;
    bool interleave = true;
};

enum class NodeRole { data, backbone, interleave_slot };

struct HighwayLayout {
    std::vector<NodeRole> role;  // per node
    std::vector<NodeId> crossroads;  // sorted
    std::vector<NodeId> endpoints;   // highway path ends, sorted
    /// Physical node paths (slots included) between consecutive critical
    /// qubits.
    std::vector<std::vector<NodeId>> path_segments;
    /// highway node -> adjacent data nodes
    std::map<NodeId, std::vector<NodeId>> entrance_adjacency;
    /// Adjacency of the highway subgraph (edges walked by the mesh lines).
    std::map<NodeId, std::vector<NodeId>> hw_adj;
    /// Backbone-contracted adjacency: (neighbor backbone, slot between or -1).
    std::map<NodeId, std::vector<std::pair<NodeId, NodeId>>> backbone_adj;

    int total_nodes = 0;
    int backbone_count = 0;

    bool is_highway(NodeId n) const { return role[n] != NodeRole::data; }
    bool is_backbone(NodeId n) const { return role[n] == NodeRole::backbone; }
    bool is_slot(NodeId n) const { return role[n] == NodeRole::interleave_slot; }
    double fraction() const {
        return total_nodes ? static_cast<double>(backbone_count) / total_nodes : 0.0;
    }
    std::vector<NodeId> backbone_nodes() const;
};

/// Lays the mesh of highway lines over the coupling graph: one line per
/// chiplet band and axis (times density_multiplier), inset a fixed distance
/// from the band edge, crossing every chiplet boundary at a kept cross-chip
/// link. Sparse stretches interleave data slots between backbone qubits;
/// crossroads, path ends and boundary-crossing endpoints stay dense.
HighwayLayout allocate_highway(const CouplingGraph& graph, const HighwayConfig& cfg);

/// Crossroads plus path endpoints.
std::vector<NodeId> critical_qubits(const HighwayLayout& layout);

/// Highway nodes within BFS distance <= radius of data node q, expanding
/// through data nodes only; sorted by (distance, node id).
std::vector<NodeId> entrances_near(const HighwayLayout& layout, const CouplingGraph& graph,
                                   NodeId q, int radius);

/// Per-axis inset of mesh lines within a chiplet band.
int highway_line_inset(int band_size);

}  // namespace mech
