#include "mech/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace mech {

const char* to_string(Structure s) {
    switch (s) {
        case Structure::square: return "square";
        case Structure::hexagon: return "hexagon";
        case Structure::heavy_square: return "heavy_square";
        case Structure::heavy_hexagon: return "heavy_hexagon";
    }
    return "?";
}

std::optional<Structure> structure_from_string(const std::string& name) {
    if (name == "square") return Structure::square;
    if (name == "hexagon") return Structure::hexagon;
    if (name == "heavy_square") return Structure::heavy_square;
    if (name == "heavy_hexagon") return Structure::heavy_hexagon;
    return std::nullopt;
}

void ChipletSpec::validate() const {
    require(chiplet_rows >= 1 && chiplet_cols >= 1, "chiplet dimensions must be >= 1");
    require(array_rows >= 1 && array_cols >= 1, "array dimensions must be >= 1");
    require(cross_sparsity > 0.0 && cross_sparsity <= 1.0,
            "cross_sparsity must lie in (0, 1]");
    if (structure == Structure::heavy_square || structure == Structure::heavy_hexagon) {
        require(chiplet_rows % 2 == 0 && chiplet_cols % 2 == 0,
                "heavy lattices need even chiplet dimensions");
        require(chiplet_rows >= 2 && chiplet_cols >= 2, "heavy chiplet too small");
        // the brickwork drops alternate vertical couplers, so narrow strips
        // fall apart below a 4-site width
        if (structure == Structure::heavy_hexagon)
            require(chiplet_rows >= 4 && chiplet_cols >= 4,
                    "heavy_hexagon chiplets need >= 4x4 sites");
    }
}

namespace {

bool site_exists(Structure s, int grow, int gcol) {
    switch (s) {
        case Structure::square:
        case Structure::hexagon:
            return true;
        case Structure::heavy_square:
            return !(grow % 2 == 1 && gcol % 2 == 1);
        case Structure::heavy_hexagon: {
            if (grow % 2 == 1 && gcol % 2 == 1) return false;
            if (grow % 2 == 1 && gcol % 2 == 0) {
                // vertical coupler: present only on brickwork vertex edges
                const int vrow = (grow - 1) / 2, vcol = gcol / 2;
                return (vrow + vcol) % 2 == 0;
            }
            return true;
        }
    }
    return false;
}

bool vertical_edge_exists(Structure s, int grow, int gcol) {
    // edge between (grow, gcol) and (grow + 1, gcol), both sites existing
    switch (s) {
        case Structure::square:
        case Structure::heavy_square:
        case Structure::heavy_hexagon:
            return true;
        case Structure::hexagon:
            return (grow + gcol) % 2 == 0;
    }
    return false;
}

}  // namespace

std::optional<NodeId> CouplingGraph::node_at(int grow, int gcol) const {
    auto it = site_index_.find({grow, gcol});
    if (it == site_index_.end()) return std::nullopt;
    return it->second;
}

bool CouplingGraph::adjacent(NodeId a, NodeId b) const {
    for (const auto& [n, k] : adj_[a])
        if (n == b) return true;
    return false;
}

std::optional<EdgeKind> CouplingGraph::edge_kind(NodeId a, NodeId b) const {
    for (const auto& [n, k] : adj_[a])
        if (n == b) return k;
    return std::nullopt;
}

long CouplingGraph::num_edges(EdgeKind kind) const {
    long c = 0;
    for (NodeId n = 0; n < num_nodes(); ++n)
        for (const auto& [m, k] : adj_[n])
            if (m > n && k == kind) ++c;
    return c;
}

std::vector<std::pair<NodeId, NodeId>> CouplingGraph::edges(EdgeKind kind) const {
    std::vector<std::pair<NodeId, NodeId>> out;
    for (NodeId n = 0; n < num_nodes(); ++n)
        for (const auto& [m, k] : adj_[n])
            if (m > n && k == kind) out.emplace_back(n, m);
    return out;
}

bool CouplingGraph::connected() const {
    if (num_nodes() == 0) return true;
    std::vector<char> seen(num_nodes(), 0);
    std::deque<NodeId> q{0};
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        NodeId n = q.front();
        q.pop_front();
        for (const auto& [m, k] : adj_[n]) {
            if (!seen[m]) {
                seen[m] = 1;
                ++count;
                q.push_back(m);
            }
        }
    }
    return count == num_nodes();
}

void CouplingGraph::add_edge(NodeId a, NodeId b, EdgeKind kind) {
    adj_[a].emplace_back(b, kind);
    adj_[b].emplace_back(a, kind);
}

void CouplingGraph::rebuild_boundaries(const std::vector<int>& full_widths) {
    // Group cross edges by (chiplet_a, chiplet_b), ordered along the boundary.
    std::map<std::pair<int, int>, std::vector<std::pair<NodeId, NodeId>>> by_pair;
    for (NodeId n = 0; n < num_nodes(); ++n) {
        for (const auto& [m, k] : adj_[n]) {
            if (m > n && k == EdgeKind::cross_chip) {
                int ca = chiplet_of(n), cb = chiplet_of(m);
                if (ca > cb) std::swap(ca, cb);
                by_pair[{ca, cb}].emplace_back(n, m);
            }
        }
    }
    boundaries_.clear();
    size_t i = 0;
    for (auto& [key, links] : by_pair) {
        std::sort(links.begin(), links.end(), [this](const auto& x, const auto& y) {
            const auto& a = nodes_[x.first];
            const auto& b = nodes_[y.first];
            return std::pair(a.grow, a.gcol) < std::pair(b.grow, b.gcol);
        });
        Boundary bd;
        bd.chiplet_a = key.first;
        bd.chiplet_b = key.second;
        bd.full_width = i < full_widths.size() ? full_widths[i]
                                               : static_cast<int>(links.size());
        bd.links = std::move(links);
        boundaries_.push_back(std::move(bd));
        ++i;
    }
}

CouplingGraph build_chiplet_array(const ChipletSpec& spec) {
    spec.validate();
    CouplingGraph g;
    g.structure_ = spec.structure;
    g.chiplet_rows_ = spec.chiplet_rows;
    g.chiplet_cols_ = spec.chiplet_cols;
    g.array_rows_ = spec.array_rows;
    g.array_cols_ = spec.array_cols;

    // Nodes: row-major by chiplet, then by local coordinate.
    for (int cr = 0; cr < spec.array_rows; ++cr)
        for (int cc = 0; cc < spec.array_cols; ++cc)
            for (int lr = 0; lr < spec.chiplet_rows; ++lr)
                for (int lc = 0; lc < spec.chiplet_cols; ++lc) {
                    const int grow = cr * spec.chiplet_rows + lr;
                    const int gcol = cc * spec.chiplet_cols + lc;
                    if (!site_exists(spec.structure, grow, gcol)) continue;
                    CouplingGraph::NodeInfo info;
                    info.chiplet = cr * spec.array_cols + cc;
                    info.local_row = lr;
                    info.local_col = lc;
                    info.grow = grow;
                    info.gcol = gcol;
                    const NodeId id = static_cast<NodeId>(g.nodes_.size());
                    g.nodes_.push_back(info);
                    g.site_index_[{grow, gcol}] = id;
                }
    g.adj_.resize(g.nodes_.size());

    auto try_edge = [&](NodeId a, int grow, int gcol) {
        auto b = g.node_at(grow, gcol);
        if (!b) return;
        const EdgeKind kind = g.chiplet_of(a) == g.chiplet_of(*b) ? EdgeKind::on_chip
                                                                  : EdgeKind::cross_chip;
        g.add_edge(a, *b, kind);
    };

    for (NodeId n = 0; n < g.num_nodes(); ++n) {
        const auto& info = g.nodes_[n];
        // rightward neighbor
        if (g.node_at(info.grow, info.gcol + 1)) try_edge(n, info.grow, info.gcol + 1);
        // downward neighbor
        if (g.node_at(info.grow + 1, info.gcol) &&
            vertical_edge_exists(spec.structure, info.grow, info.gcol))
            try_edge(n, info.grow + 1, info.gcol);
    }

    for (auto& lst : g.adj_)
        std::sort(lst.begin(), lst.end());

    g.rebuild_boundaries({});
    // Record the full-density widths now that boundaries are known.
    std::vector<int> widths;
    widths.reserve(g.boundaries_.size());
    for (const auto& b : g.boundaries_) widths.push_back(static_cast<int>(b.links.size()));
    for (size_t i = 0; i < g.boundaries_.size(); ++i)
        g.boundaries_[i].full_width = widths[i];

    require(g.connected(), "coupling graph is not connected");

    if (spec.cross_sparsity < 1.0) return apply_sparsity(g, spec.cross_sparsity);
    return g;
}

std::vector<int> sparsity_priority_order(int width) {
    std::vector<int> order;
    order.reserve(width);
    // Recursive midpoint subdivision: center link first, then the centers of
    // the two halves, and so on. Selections of increasing size are nested.
    std::deque<std::pair<int, int>> spans{{0, width - 1}};
    while (!spans.empty()) {
        auto [lo, hi] = spans.front();
        spans.pop_front();
        if (lo > hi) continue;
        const int mid = lo + (hi - lo) / 2;
        order.push_back(mid);
        spans.emplace_back(lo, mid - 1);
        spans.emplace_back(mid + 1, hi);
    }
    return order;
}

CouplingGraph apply_sparsity(const CouplingGraph& graph, double keep) {
    require(keep > 0.0 && keep <= 1.0, "keep fraction must lie in (0, 1]");
    if (keep == 1.0) return graph;

    CouplingGraph g = graph;
    for (auto& lst : g.adj_) lst.clear();

    // Retain all on-chip edges untouched.
    for (NodeId n = 0; n < graph.num_nodes(); ++n)
        for (const auto& [m, k] : graph.neighbors(n))
            if (m > n && k == EdgeKind::on_chip) g.add_edge(n, m, k);

    std::vector<int> widths;
    for (const auto& bd : graph.boundaries()) {
        const int width = bd.full_width;
        const int have = static_cast<int>(bd.links.size());
        int k = static_cast<int>(std::ceil(keep * width));
        k = std::clamp(k, 1, width);
        const auto order = sparsity_priority_order(have);
        // keep the k highest-priority link slots that still exist
        std::vector<char> kept(have, 0);
        int taken = 0;
        for (int idx : order) {
            if (taken >= k) break;
            kept[idx] = 1;
            ++taken;
        }
        for (int i = 0; i < have; ++i)
            if (kept[i]) g.add_edge(bd.links[i].first, bd.links[i].second, EdgeKind::cross_chip);
        widths.push_back(width);
    }

    for (auto& lst : g.adj_)
        std::sort(lst.begin(), lst.end());
    g.rebuild_boundaries(widths);
    require(g.connected(), "sparsity disconnected the chiplet array");
    return g;
}

std::vector<int> distance_map(const CouplingGraph& graph,
                              const std::vector<NodeId>& sources,
                              const std::vector<NodeId>& forbidden) {
    require(!sources.empty(), "distance_map: sources must be nonempty");
    std::vector<int> dist(graph.num_nodes(), -1);
    std::vector<char> blocked(graph.num_nodes(), 0);
    for (NodeId n : forbidden) blocked[n] = 1;
    std::deque<NodeId> q;
    for (NodeId s : sources) {
        require(!blocked[s], "distance_map: source is forbidden");
        if (dist[s] != 0) {
            dist[s] = 0;
            q.push_back(s);
        }
    }
    while (!q.empty()) {
        NodeId n = q.front();
        q.pop_front();
        for (const auto& [m, k] : graph.neighbors(n)) {
            if (blocked[m] || dist[m] >= 0) continue;
            dist[m] = dist[n] + 1;
            q.push_back(m);
        }
    }
    return dist;
}

}  // namespace mech
