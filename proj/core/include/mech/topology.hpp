#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mech/common.hpp"

namespace mech {

enum class Structure { square, hexagon, heavy_square, heavy_hexagon };

const char* to_string(Structure s);
std::optional<Structure> structure_from_string(const std::string& name);

/// Geometry of a chiplet array. For the heavy lattices, chiplet_rows/cols
/// count lattice sites (vertices plus couplers), so a "heavy square 8x8"
/// chiplet holds a 4x4 vertex grid with couplers in between.
struct ChipletSpec {
    Structure structure = Structure::square;
    int chiplet_rows = 6;
    int chiplet_cols = 6;
    int array_rows = 3;
    int array_cols = 3;
    double cross_sparsity = 1.0;  // fraction of boundary links kept, in (0,1]

    void validate() const;
};

enum class EdgeKind { on_chip, cross_chip };

/// Undirected labeled coupling graph over the chiplet array. Node ids are
/// dense and ordered row-major by chiplet, then by local site coordinate,
/// so every downstream tie-break is reproducible.
class CouplingGraph {
public:
    struct NodeInfo {
        int chiplet;     // chip_row * array_cols + chip_col
        int local_row, local_col;
        int grow, gcol;  // global site coordinates
    };

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_chiplets() const { return array_rows_ * array_cols_; }
    int array_rows() const { return array_rows_; }
    int array_cols() const { return array_cols_; }
    int chiplet_rows() const { return chiplet_rows_; }
    int chiplet_cols() const { return chiplet_cols_; }
    int global_rows() const { return array_rows_ * chiplet_rows_; }
    int global_cols() const { return array_cols_ * chiplet_cols_; }
    Structure structure() const { return structure_; }

    const NodeInfo& node(NodeId n) const { return nodes_[n]; }
    int chiplet_of(NodeId n) const { return nodes_[n].chiplet; }

    /// Node at a global site coordinate, if such a site exists.
    std::optional<NodeId> node_at(int grow, int gcol) const;

    const std::vector<std::pair<NodeId, EdgeKind>>& neighbors(NodeId n) const {
        return adj_[n];
    }
    bool adjacent(NodeId a, NodeId b) const;
    std::optional<EdgeKind> edge_kind(NodeId a, NodeId b) const;

    long num_edges(EdgeKind kind) const;
    /// All edges (a < b) of the given kind.
    std::vector<std::pair<NodeId, NodeId>> edges(EdgeKind kind) const;

    bool connected() const;

    /// Cross-chip edges grouped by adjacent chiplet pair, ordered along the
    /// boundary. full_width is the full-density link count of the boundary
    /// (kept from construction so sparsity stays idempotent).
    struct Boundary {
        int chiplet_a, chiplet_b;
        int full_width;
        std::vector<std::pair<NodeId, NodeId>> links;  // ordered by coordinate
    };
    const std::vector<Boundary>& boundaries() const { return boundaries_; }

private:
    friend CouplingGraph build_chiplet_array(const ChipletSpec& spec);
    friend CouplingGraph apply_sparsity(const CouplingGraph& graph, double keep);

    void add_edge(NodeId a, NodeId b, EdgeKind kind);
    void rebuild_boundaries(const std::vector<int>& full_widths);

    Structure structure_ = Structure::square;
    int chiplet_rows_ = 0, chiplet_cols_ = 0, array_rows_ = 0, array_cols_ = 0;
    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<std::pair<NodeId, EdgeKind>>> adj_;
    std::map<std::pair<int, int>, NodeId> site_index_;  // (grow,gcol) -> node
    std::vector<Boundary> boundaries_;
};

/// Builds the coupling graph for the given chiplet array, applying the
/// spec's cross-chip sparsity. Rejects sparsity that would disconnect
/// adjacent chiplets.
CouplingGraph build_chiplet_array(const ChipletSpec& spec);

/// Thins every chiplet boundary to ceil(keep * full_width) links. Links are
/// picked by recursive midpoint subdivision, which keeps selections nested:
/// keep1 <= keep2 implies the kept set of keep1 is a subset of keep2's.
CouplingGraph apply_sparsity(const CouplingGraph& graph, double keep);

/// Priority order of link indices used by apply_sparsity (midpoint first).
std::vector<int> sparsity_priority_order(int width);

/// Multi-source BFS hop counts avoiding `forbidden`; -1 when unreachable.
std::vector<int> distance_map(const CouplingGraph& graph,
                              const std::vector<NodeId>& sources,
                              const std::vector<NodeId>& forbidden);

}  // namespace mech
