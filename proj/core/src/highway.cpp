#include "mech/highway.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace mech {

std::vector<NodeId> HighwayLayout::backbone_nodes() const {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < total_nodes; ++n)
        if (is_backbone(n)) out.push_back(n);
    return out;
}

int highway_line_inset(int band_size) {
    if (band_size >= 6) return 3;
    return std::max(0, (band_size - 1) / 2);
}

namespace {

/// Deterministic BFS shortest path; neighbors explored in id order.
std::vector<NodeId> bfs_path(const CouplingGraph& g, NodeId from, NodeId to,
                             const std::function<bool(NodeId)>& allowed,
                             const std::function<bool(NodeId, NodeId)>& edge_allowed) {
    if (from == to) return {from};
    std::vector<int> parent(g.num_nodes(), -2);
    parent[from] = -1;
    std::deque<NodeId> q{from};
    while (!q.empty()) {
        NodeId n = q.front();
        q.pop_front();
        for (const auto& [m, kind] : g.neighbors(n)) {
            if (parent[m] != -2 || !allowed(m) || !edge_allowed(n, m)) continue;
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

struct LinePlan {
    bool horizontal;
    int coord;  // global row (horizontal) or column (vertical)
};

}  // namespace

HighwayLayout allocate_highway(const CouplingGraph& graph, const HighwayConfig& cfg) {
    const int chip_rows = graph.chiplet_rows(), chip_cols = graph.chiplet_cols();
    const int period_r = cfg.mesh_period_rows > 0 ? cfg.mesh_period_rows : chip_rows;
    const int period_c = cfg.mesh_period_cols > 0 ? cfg.mesh_period_cols : chip_cols;
    require(period_r >= 2 && period_c >= 2, "mesh periods must be >= 2");
    require(cfg.density_multiplier >= 1, "density_multiplier must be >= 1");
    const int G_rows = graph.global_rows(), G_cols = graph.global_cols();
    const bool heavy = graph.structure() == Structure::heavy_square ||
                       graph.structure() == Structure::heavy_hexagon;

    // Local band offsets at which boundary-crossing links are available, per
    // axis. Sparsity keeps the same local offsets on every boundary of an
    // axis, so one intersection set serves all lines of that axis.
    auto kept_coords = [&](bool horizontal_line) {
        // horizontal lines cross boundaries between chiplet columns; the
        // link coordinate is the row (and vice versa).
        const int band = horizontal_line ? chip_rows : chip_cols;
        std::set<int> coords;
        bool any = false;
        for (const auto& bd : graph.boundaries()) {
            const auto& a = graph.node(bd.links.front().first);
            const auto& b = graph.node(bd.links.front().second);
            const bool vertical_boundary = a.grow == b.grow;  // left-right chiplets
            if (vertical_boundary != horizontal_line) continue;
            std::set<int> here;
            for (const auto& [u, v] : bd.links) {
                const int c = horizontal_line ? graph.node(u).grow : graph.node(u).gcol;
                here.insert(c % band);
            }
            if (!any) {
                coords = here;
                any = true;
            } else {
                std::set<int> inter;
                std::set_intersection(coords.begin(), coords.end(), here.begin(),
                                      here.end(), std::inserter(inter, inter.begin()));
                coords = inter;
            }
        }
        if (!any) {
            // single-chiplet axis: any coordinate with a walkable line
            for (int c = 0; c < band; ++c)
                if (!heavy || c % 2 == 0) coords.insert(c);
        }
        return coords;
    };

    auto plan_axis = [&](bool horizontal, int period, int band_size, int extent) {
        std::vector<int> picks;
        const auto kept = kept_coords(horizontal);
        require(!kept.empty(), "no cross-chip links available for highway lines");
        int inset = highway_line_inset(band_size);
        if (heavy) inset &= ~1;
        for (int band = 0; band < extent; band += period) {
            std::set<int> used;
            for (int j = 0; j < cfg.density_multiplier; ++j) {
                int target = band + (inset + (j * period) / cfg.density_multiplier) % period;
                if (target >= extent) target = extent - 1;
                // snap to the nearest kept coordinate inside this band
                int best = -1, best_d = 1 << 30;
                for (int c : kept) {
                    if (c < band || c >= std::min(band + period, extent)) continue;
                    if (used.count(c)) continue;
                    const int d = std::abs(c - target);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                require(best >= 0,
                        "no line placement meets the boundary-link condition");
                used.insert(best);
                picks.push_back(best);
            }
        }
        std::sort(picks.begin(), picks.end());
        return picks;
    };

    std::vector<LinePlan> plans;
    for (int r : plan_axis(true, period_r, chip_rows, G_rows))
        plans.push_back({true, r});
    for (int c : plan_axis(false, period_c, chip_cols, G_cols))
        plans.push_back({false, c});

    // Build each line as a staged BFS path: chiplet by chiplet, crossing each
    // boundary at the kept link nearest the line coordinate.
    std::vector<std::vector<NodeId>> lines;
    std::set<std::pair<NodeId, NodeId>> cross_used;  // boundary edges on lines
    for (const LinePlan& plan : plans) {
        const int coord = plan.coord;
        auto allowed = [&](NodeId n) {
            const auto& info = graph.node(n);
            const int c = plan.horizontal ? info.grow : info.gcol;
            return std::abs(c - coord) <= 2;
        };
        std::vector<NodeId> path;
        auto extend = [&](const std::vector<NodeId>& piece) {
            require(!piece.empty(), "no line placement meets the boundary-link condition");
            for (NodeId n : piece)
                if (path.empty() || path.back() != n) path.push_back(n);
        };

        const int nbands = plan.horizontal ? graph.array_cols() : graph.array_rows();
        NodeId cur = -1;
        {
            // line start: first existing site at the coordinate
            for (int k = 0; k < (plan.horizontal ? G_cols : G_rows) && cur < 0; ++k) {
                auto n = plan.horizontal ? graph.node_at(coord, k) : graph.node_at(k, coord);
                if (n) cur = *n;
            }
            require(cur >= 0, "highway line start not found");
            path.push_back(cur);
        }
        auto on_chip_only = [&](NodeId a, NodeId b) {
            return graph.edge_kind(a, b) == EdgeKind::on_chip;
        };
        for (int band = 0; band < nbands - 1; ++band) {
            // designated kept link on the boundary out of this band
            const int chip_of_cur = graph.chiplet_of(cur);
            NodeId link_a = -1, link_b = -1;
            int best_d = 1 << 30;
            for (const auto& bd : graph.boundaries()) {
                for (const auto& [u, v] : bd.links) {
                    if (graph.chiplet_of(u) != chip_of_cur && graph.chiplet_of(v) != chip_of_cur)
                        continue;
                    const auto& iu = graph.node(u);
                    const auto& iv = graph.node(v);
                    const bool vertical_boundary = iu.grow == iv.grow;
                    if (vertical_boundary != plan.horizontal) continue;
                    // must lead to the next band (forward direction)
                    NodeId near = graph.chiplet_of(u) == chip_of_cur ? u : v;
                    NodeId far = near == u ? v : u;
                    const auto& inear = graph.node(near);
                    const auto& ifar = graph.node(far);
                    const bool forward = plan.horizontal ? ifar.gcol > inear.gcol
                                                         : ifar.grow > inear.grow;
                    if (!forward) continue;
                    const int d = plan.horizontal ? std::abs(inear.grow - coord)
                                                  : std::abs(inear.gcol - coord);
                    if (d < best_d) {
                        best_d = d;
                        link_a = near;
                        link_b = far;
                    }
                }
            }
            require(link_a >= 0, "no line placement meets the boundary-link condition");
            auto allowed_wide = [&](NodeId n) {
                const auto& info = graph.node(n);
                const int c = plan.horizontal ? info.grow : info.gcol;
                const int la = plan.horizontal ? graph.node(link_a).grow
                                               : graph.node(link_a).gcol;
                const int lo = std::min(coord, la) - 2, hi = std::max(coord, la) + 2;
                return c >= lo && c <= hi && graph.chiplet_of(n) == graph.chiplet_of(link_a);
            };
            extend(bfs_path(graph, cur, link_a, allowed_wide, on_chip_only));
            path.push_back(link_b);
            cross_used.insert({std::min(link_a, link_b), std::max(link_a, link_b)});
            cur = link_b;
        }
        // run to the far end of the last band
        NodeId last = -1;
        for (int k = (plan.horizontal ? G_cols : G_rows) - 1; k >= 0 && last < 0; --k) {
            auto n = plan.horizontal ? graph.node_at(coord, k) : graph.node_at(k, coord);
            if (n) last = *n;
        }
        auto allowed_last = [&](NodeId n) {
            return allowed(n) && graph.chiplet_of(n) == graph.chiplet_of(last);
        };
        if (cur != last) {
            auto sameband = [&](NodeId n) {
                return allowed_last(n) || n == cur;
            };
            extend(bfs_path(graph, cur, last, sameband, on_chip_only));
        }
        lines.push_back(std::move(path));
    }

    // Assemble the highway subgraph from the line paths.
    HighwayLayout lay;
    lay.total_nodes = graph.num_nodes();
    lay.role.assign(graph.num_nodes(), NodeRole::data);
    std::set<std::pair<NodeId, NodeId>> hw_edges;
    for (const auto& line : lines) {
        for (size_t i = 0; i < line.size(); ++i) {
            lay.role[line[i]] = NodeRole::backbone;
            if (i + 1 < line.size())
                hw_edges.insert({std::min(line[i], line[i + 1]),
                                 std::max(line[i], line[i + 1])});
        }
    }
    for (const auto& [a, b] : hw_edges) {
        lay.hw_adj[a].push_back(b);
        lay.hw_adj[b].push_back(a);
    }
    for (auto& [n, lst] : lay.hw_adj) std::sort(lst.begin(), lst.end());

    for (const auto& [n, lst] : lay.hw_adj) {
        if (lst.size() >= 3) lay.crossroads.push_back(n);
        if (lst.size() <= 1) lay.endpoints.push_back(n);
    }

    // Forced-dense nodes: critical qubits and both ends of used cross links.
    std::set<NodeId> forced(lay.crossroads.begin(), lay.crossroads.end());
    forced.insert(lay.endpoints.begin(), lay.endpoints.end());
    for (const auto& [a, b] : cross_used) {
        forced.insert(a);
        forced.insert(b);
    }

    if (cfg.interleave) {
        for (const auto& line : lines) {
            std::vector<size_t> marks;
            for (size_t i = 0; i < line.size(); ++i)
                if (forced.count(line[i])) marks.push_back(i);
            if (marks.empty() || marks.front() != 0) marks.insert(marks.begin(), 0);
            if (marks.back() != line.size() - 1) marks.push_back(line.size() - 1);
            for (size_t m = 0; m + 1 < marks.size(); ++m) {
                for (size_t k = marks[m] + 1; k < marks[m + 1]; ++k) {
                    if ((k - marks[m]) % 2 == 0) continue;  // keep backbone
                    const NodeId n = line[k];
                    if (forced.count(n)) continue;
                    bool neighbor_slot = false;
                    for (NodeId nb : lay.hw_adj[n])
                        if (lay.role[nb] == NodeRole::interleave_slot) neighbor_slot = true;
                    if (!neighbor_slot) lay.role[n] = NodeRole::interleave_slot;
                }
            }
        }
    }

    lay.backbone_count = 0;
    for (NodeId n = 0; n < graph.num_nodes(); ++n)
        if (lay.role[n] == NodeRole::backbone) lay.backbone_count++;

    // Segments: pieces of each line between consecutive critical qubits.
    std::set<NodeId> critical = forced;  // crossroads + ends + dense boundary
    critical.clear();
    critical.insert(lay.crossroads.begin(), lay.crossroads.end());
    critical.insert(lay.endpoints.begin(), lay.endpoints.end());
    std::set<std::vector<NodeId>> seen_segments;
    for (const auto& line : lines) {
        size_t start = 0;
        while (start < line.size() && !critical.count(line[start])) ++start;
        for (size_t i = start + 1; i < line.size(); ++i) {
            if (!critical.count(line[i])) continue;
            std::vector<NodeId> seg(line.begin() + start, line.begin() + i + 1);
            auto canon = seg;
            if (canon.back() < canon.front()) std::reverse(canon.begin(), canon.end());
            if (seen_segments.insert(canon).second) lay.path_segments.push_back(seg);
            start = i;
        }
    }

    // Backbone-contracted adjacency (slots bridged over).
    std::set<std::tuple<NodeId, NodeId, NodeId>> bb_edges;
    for (const auto& seg : lay.path_segments) {
        NodeId prev = -1, via = -1;
        for (NodeId n : seg) {
            if (lay.is_backbone(n)) {
                if (prev >= 0) bb_edges.insert({std::min(prev, n), std::max(prev, n), via});
                prev = n;
                via = -1;
            } else {
                via = n;
            }
        }
    }
    for (const auto& [a, b, via] : bb_edges) {
        lay.backbone_adj[a].emplace_back(b, via);
        lay.backbone_adj[b].emplace_back(a, via);
    }
    for (auto& [n, lst] : lay.backbone_adj) std::sort(lst.begin(), lst.end());

    // Entrance adjacency: highway node -> adjacent data nodes.
    for (NodeId n = 0; n < graph.num_nodes(); ++n) {
        if (!lay.is_highway(n)) continue;
        std::vector<NodeId> ds;
        for (const auto& [m, k] : graph.neighbors(n))
            if (lay.role[m] == NodeRole::data) ds.push_back(m);
        lay.entrance_adjacency[n] = std::move(ds);
    }

    // Validation.
    {
        // connectivity of the highway subgraph
        if (!lay.hw_adj.empty()) {
            std::set<NodeId> seen;
            std::deque<NodeId> q{lay.hw_adj.begin()->first};
            seen.insert(q.front());
            while (!q.empty()) {
                NodeId n = q.front();
                q.pop_front();
                for (NodeId m : lay.hw_adj[n])
                    if (seen.insert(m).second) q.push_back(m);
            }
            require(seen.size() == lay.hw_adj.size(),
                    "highway subgraph is not connected");
        }
        std::vector<char> chip_has(graph.num_chiplets(), 0);
        for (NodeId n = 0; n < graph.num_nodes(); ++n)
            if (lay.is_highway(n)) chip_has[graph.chiplet_of(n)] = 1;
        for (char h : chip_has) require(h, "a chiplet has no highway node");
        for (const auto& [a, b] : cross_used)
            require(lay.is_backbone(a) && lay.is_backbone(b),
                    "cross-chip link on a line must be dense");
    }
    return lay;
}

std::vector<NodeId> critical_qubits(const HighwayLayout& layout) {
    std::vector<NodeId> out = layout.crossroads;
    out.insert(out.end(), layout.endpoints.begin(), layout.endpoints.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NodeId> entrances_near(const HighwayLayout& layout, const CouplingGraph& graph,
                                   NodeId q, int radius) {
    require(layout.role[q] == NodeRole::data, "entrances_near: q must be a data node");
    std::vector<int> dist(graph.num_nodes(), -1);
    std::deque<NodeId> queue{q};
    dist[q] = 0;
    std::vector<std::pair<int, NodeId>> found;
    while (!queue.empty()) {
        NodeId n = queue.front();
        queue.pop_front();
        if (dist[n] >= radius) continue;
        for (const auto& [m, k] : graph.neighbors(n)) {
            if (dist[m] >= 0) continue;
            dist[m] = dist[n] + 1;
            if (layout.is_highway(m)) {
                found.emplace_back(dist[m], m);  // collect, do not expand through
            } else {
                queue.push_back(m);
            }
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<NodeId> out;
    out.reserve(found.size());
    for (const auto& [d, n] : found) out.push_back(n);
    return out;
}

}  // namespace mech
