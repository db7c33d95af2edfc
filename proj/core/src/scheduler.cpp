#include "mech/scheduler.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <queue>

#include "mech/entangle.hpp"
#include "mech/router.hpp"

namespace mech {

EntrancePick pick_entrance(double qubit_depth,
                           const std::vector<std::pair<NodeId, int>>& candidates,
                           const std::map<NodeId, double>& entrance_available) {
    EntrancePick best;
    for (const auto& [node, dist] : candidates) {
        EntrancePick p;
        p.entrance = node;
        p.dist = dist;
        p.t_arr = qubit_depth + 3.0 * std::max(0, dist - 1);
        auto it = entrance_available.find(node);
        p.t_ava = it == entrance_available.end() ? 0.0 : it->second;
        p.t_exe = std::max(p.t_arr, p.t_ava);
        const bool better =
            best.entrance < 0 || p.t_exe < best.t_exe ||
            (p.t_exe == best.t_exe &&
             (p.dist < best.dist || (p.dist == best.dist && p.entrance < best.entrance)));
        if (better) best = p;
    }
    require(best.entrance >= 0, "pick_entrance: no candidates");
    return best;
}

std::optional<std::vector<NodeId>> assign_highway_path(
    const HighwayLayout& layout, NodeId from, const std::set<NodeId>& own,
    const std::map<NodeId, int>& occupancy, int self_serial) {
    auto cost = [&](NodeId n) -> int {
        auto it = occupancy.find(n);
        if (it != occupancy.end() && it->second != self_serial) return -1;
        return own.count(n) ? 0 : 1;
    };
    if (cost(from) < 0) return std::nullopt;
    if (own.count(from)) return std::vector<NodeId>{from};

    std::map<NodeId, int> dist;
    std::map<NodeId, NodeId> parent;
    using Item = std::pair<int, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[from] = cost(from);
    pq.push({dist[from], from});
    NodeId goal = -1;
    while (!pq.empty()) {
        auto [d, n] = pq.top();
        pq.pop();
        if (d != dist[n]) continue;
        if (own.count(n)) {
            goal = n;
            break;
        }
        auto it = layout.backbone_adj.find(n);
        if (it == layout.backbone_adj.end()) continue;
        for (const auto& [m, via] : it->second) {
            const int c = cost(m);
            if (c < 0) continue;
            const int nd = d + c;
            if (!dist.count(m) || nd < dist[m]) {
                dist[m] = nd;
                parent[m] = n;
                pq.push({nd, m});
            }
        }
    }
    if (goal < 0) return std::nullopt;
    std::vector<NodeId> path;
    for (NodeId cur = goal;; cur = parent[cur]) {
        path.push_back(cur);
        if (cur == from) break;
    }
    std::reverse(path.begin(), path.end());  // from .. goal
    return path;
}

std::pair<std::vector<MultiTargetGate>, std::vector<GateId>> select_highway_gates(
    const std::vector<MultiTargetGate>& groups, int min_targets) {
    std::vector<MultiTargetGate> highway;
    std::vector<GateId> unpacked;
    for (const auto& g : groups) {
        if (static_cast<int>(g.components.size()) >= min_targets) {
            highway.push_back(g);
        } else {
            for (const auto& c : g.components) unpacked.push_back(c.origin);
        }
    }
    std::sort(unpacked.begin(), unpacked.end());
    return {highway, unpacked};
}

namespace {

Circuit normalize_for_compile(const Circuit& c) {
    // SWAP/BRIDGE reduce to CX; CZ/CP stay whole so aggregation can see them.
    Circuit out(c.num_qubits(), c.num_bits());
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::SWAP:
                out.cx(op.q[0], op.q[1]);
                out.cx(op.q[1], op.q[0]);
                out.cx(op.q[0], op.q[1]);
                break;
            case GateKind::BRIDGE:
                out.cx(op.q[0], op.q[1]);
                out.cx(op.q[1], op.q[2]);
                out.cx(op.q[0], op.q[1]);
                out.cx(op.q[1], op.q[2]);
                break;
            default:
                out.append(op);
        }
    }
    return out;
}

class Scheduler {
public:
    Scheduler(const Circuit& source, const CouplingGraph& graph,
              const HighwayLayout* layout, const SchedulerConfig& cfg)
        : source_(normalize_for_compile(source)),
          g_(graph),
          layout_(layout),
          cfg_(cfg),
          phys_(graph.num_nodes(), source.num_bits()),
          em_(phys_, cfg.meas_depth),
          tracker_(source_) {}

    CompiledProgram run();

private:
    struct InFlightGate {
        int serial;
        QubitId control;
        bool conjugated;
        double control_phase;
        std::vector<GateId> origins;
        std::vector<NodeId> path;       // owned backbone nodes
        std::vector<NodeId> survivors;  // live GHZ members
        std::map<NodeId, BitId> member_bits;  // populated at disentangle
        NodeId control_entrance;
        std::vector<QubitId> targets;
    };

    struct Shuttle {
        ShuttleRecord rec;
        ShuttlePeriod period;
        std::vector<InFlightGate> gates;
        std::map<NodeId, int> occupancy;
        std::map<NodeId, double> entrance_available;
        bool open = false;
    };

    bool is_locked(const GateOp& op) const {
        for (int i = 0; i < op.nq; ++i)
            if (locked_.count(op.q[i])) return true;
        return false;
    }

    void emit_simple(const GateOp& op);
    std::vector<std::pair<NodeId, int>> entrance_candidates(NodeId node) const;
    NodeFilter route_filter() const;
    void reset_ancilla(NodeId n);
    bool try_schedule(const MultiTargetGate& mtg);
    void close_shuttle();

    Circuit source_;
    const CouplingGraph& g_;
    const HighwayLayout* layout_;
    SchedulerConfig cfg_;

    Circuit phys_;
    Emitter em_;
    FrontierTracker tracker_;
    std::unique_ptr<MappingState> mapping_;
    Shuttle shuttle_;
    std::set<GateId> in_flight_;
    std::set<QubitId> locked_;
    std::vector<ShuttleRecord> done_shuttles_;
    int next_serial_ = 0;
    int next_shuttle_index_ = 0;
};

void Scheduler::emit_simple(const GateOp& op) {
    const NodeId n = mapping_->node_of(op.q[0]);
    switch (op.kind) {
        case GateKind::MEASURE:
            em_.measure_into(n, op.basis, op.bit);
            break;
        case GateKind::COND_PAULI:
            em_.cond_pauli(n, op.pauli, op.bit);
            break;
        default:
            em_.one_q(op.kind, n, op.angle);
    }
}

std::vector<std::pair<NodeId, int>> Scheduler::entrance_candidates(NodeId node) const {
    // BFS through non-backbone nodes, collecting backbone candidates; the
    // radius starts at cfg.entrance_radius and doubles until nonempty.
    const int max_radius = g_.global_rows() + g_.global_cols() + 2;
    for (int radius = cfg_.entrance_radius;; radius *= 2) {
        std::vector<int> dist(g_.num_nodes(), -1);
        std::deque<NodeId> q{node};
        dist[node] = 0;
        std::vector<std::pair<int, NodeId>> found;
        while (!q.empty()) {
            const NodeId n = q.front();
            q.pop_front();
            if (dist[n] >= radius) continue;
            for (const auto& [m, k] : g_.neighbors(n)) {
                if (dist[m] >= 0) continue;
                dist[m] = dist[n] + 1;
                if (layout_->is_backbone(m))
                    found.emplace_back(dist[m], m);
                else
                    q.push_back(m);
            }
        }
        if (!found.empty()) {
            std::sort(found.begin(), found.end());
            std::vector<std::pair<NodeId, int>> out;
            for (const auto& [d, n] : found) out.emplace_back(n, d);
            return out;
        }
        if (radius > max_radius)
            throw MechError("no highway entrance reachable from data qubit");
    }
}

NodeFilter Scheduler::route_filter() const {
    return [this](NodeId n) {
        if (layout_ && layout_->is_backbone(n)) {
            if (shuttle_.open && shuttle_.occupancy.count(n)) return false;
        }
        return true;
    };
}

void Scheduler::reset_ancilla(NodeId n) {
    require(!mapping_->holds_logical(n), "reset on a node holding data");
    switch (mapping_->ancilla_state(n)) {
        case MappingState::Anc::zero:
            return;
        case MappingState::Anc::xmeas: {
            em_.one_q(GateKind::H, n);
            em_.cond_pauli(n, 'X', mapping_->ancilla_bit(n));
            break;
        }
        case MappingState::Anc::zmeas: {
            em_.cond_pauli(n, 'X', mapping_->ancilla_bit(n));
            break;
        }
        case MappingState::Anc::junk:
        case MappingState::Anc::entangled: {
            const BitId bit = em_.measure(n, Basis::Z);
            em_.cond_pauli(n, 'X', bit);
            break;
        }
    }
    mapping_->set_ancilla(n, MappingState::Anc::zero);
}

bool Scheduler::try_schedule(const MultiTargetGate& mtg) {
    // ---- planning (no side effects until committed) ----
    const NodeId control_node = mapping_->node_of(mtg.control);
    auto control_cands = entrance_candidates(control_node);
    std::erase_if(control_cands, [&](const auto& c) {
        return shuttle_.open && shuttle_.occupancy.count(c.first);
    });
    const double now = em_.depth();
    if (control_cands.empty()) {
        shuttle_.period.advance(0, true, now);
        return false;
    }
    const EntrancePick control_pick =
        pick_entrance(em_.node_time(control_node), control_cands,
                      shuttle_.open ? shuttle_.entrance_available
                                    : std::map<NodeId, double>{});

    // Targets ordered by their distance to the highway.
    struct TargetPlan {
        MtgComponent comp;
        int hw_dist;
        EntrancePick pick;
        std::vector<NodeId> graft;  // path from entrance into the tree
    };
    std::vector<TargetPlan> plans;
    for (const auto& comp : mtg.components) {
        TargetPlan tp;
        tp.comp = comp;
        tp.hw_dist = entrance_candidates(mapping_->node_of(comp.target)).front().second;
        plans.push_back(tp);
    }
    std::stable_sort(plans.begin(), plans.end(),
                     [](const TargetPlan& a, const TargetPlan& b) {
                         return a.hw_dist < b.hw_dist;
                     });

    static const std::map<NodeId, int> kNoOccupancy;
    std::set<NodeId> tree{control_pick.entrance};
    std::map<NodeId, double> avail =
        shuttle_.open ? shuttle_.entrance_available : std::map<NodeId, double>{};
    const std::map<NodeId, int>& occ =
        shuttle_.open ? shuttle_.occupancy : kNoOccupancy;
    const int serial = next_serial_;
    double latest = control_pick.t_exe;

    for (auto& tp : plans) {
        const NodeId tnode = mapping_->node_of(tp.comp.target);
        auto cands = entrance_candidates(tnode);
        std::erase_if(cands, [&](const auto& c) {
            if (c.first == control_pick.entrance) return true;  // consumed by attach
            auto it = occ.find(c.first);
            return it != occ.end() && it->second != serial;
        });
        // Rank candidates by earliest execution, then look for a free path.
        std::vector<EntrancePick> picks;
        for (const auto& [n, d] : cands)
            picks.push_back(pick_entrance(em_.node_time(tnode), {{n, d}}, avail));
        std::sort(picks.begin(), picks.end(), [](const EntrancePick& a, const EntrancePick& b) {
            if (a.t_exe != b.t_exe) return a.t_exe < b.t_exe;
            if (a.dist != b.dist) return a.dist < b.dist;
            return a.entrance < b.entrance;
        });
        bool placed = false;
        for (const auto& pick : picks) {
            auto path = assign_highway_path(*layout_, pick.entrance, tree, occ, serial);
            if (!path) continue;
            tp.pick = pick;
            tp.graft = *path;
            for (NodeId n : *path) tree.insert(n);
            const double busy = tp.comp.is_phase ? 2.0 : 1.0;
            avail[pick.entrance] =
                std::max(avail[pick.entrance], pick.t_exe) + busy;
            latest = std::max(latest, pick.t_exe + busy);
            placed = true;
            break;
        }
        if (!placed) {
            shuttle_.period.advance(0, true, now);
            return false;
        }
    }

    if (!shuttle_.open) {
        shuttle_ = Shuttle{};
        shuttle_.open = true;
        shuttle_.rec.index = next_shuttle_index_++;
        shuttle_.rec.start_time = now;
    }
    if (!shuttle_.period.advance(latest, false, now)) return false;

    // ---- commit ----
    for (NodeId n : tree) {
        require(!shuttle_.occupancy.count(n), "highway occupancy collision");
        shuttle_.occupancy[n] = serial;
    }
    next_serial_++;

    // Prep tree: parents discovered by walking grafts back toward the root.
    PrepTree ptree;
    std::map<NodeId, int> index_of;
    auto idx = [&](NodeId n) {
        auto it = index_of.find(n);
        if (it != index_of.end()) return it->second;
        const int i = static_cast<int>(ptree.nodes.size());
        ptree.nodes.push_back(n);
        ptree.required.push_back(0);
        index_of[n] = i;
        return i;
    };
    idx(control_pick.entrance);
    auto slot_between = [&](NodeId a, NodeId b) -> NodeId {
        for (const auto& [m, via] : layout_->backbone_adj.at(a))
            if (m == b) return via;
        throw MechError("graft path is not a backbone walk");
    };
    std::set<std::pair<int, int>> edge_seen;
    for (const auto& tp : plans) {
        // graft runs entrance -> ... -> tree node; parent order is reversed
        const auto& gr = tp.graft;
        for (size_t i = gr.size(); i-- > 1;) {
            const int parent = idx(gr[i]);
            const int child = idx(gr[i - 1]);
            if (edge_seen.insert({parent, child}).second)
                ptree.edges.push_back({parent, child, slot_between(gr[i], gr[i - 1])});
        }
    }
    ptree.required[0] = 1;
    for (const auto& tp : plans) ptree.required[index_of.at(tp.pick.entrance)] = 1;
    {  // crossroads of the tree survive too
        std::vector<int> child_count(ptree.nodes.size(), 0);
        for (const auto& e : ptree.edges) child_count[e.parent]++;
        for (size_t i = 0; i < ptree.nodes.size(); ++i)
            if (child_count[i] >= 2) ptree.required[i] = 1;
    }

    GhzFragment frag = ghz_prep_tree(g_, ptree);
    // prep-measured entrances must be re-entangled before use
    std::vector<NodeId> needed;
    {
        std::set<NodeId> surv(frag.surviving.begin(), frag.surviving.end());
        std::set<NodeId> want{control_pick.entrance};
        for (const auto& tp : plans) want.insert(tp.pick.entrance);
        for (NodeId e : want)
            if (!surv.count(e)) needed.push_back(e);
    }
    if (!needed.empty()) {
        std::map<NodeId, long> load;
        for (const GateOp& op : frag.circ.gates())
            if (op.nq >= 2)
                for (int i = 0; i < op.nq; ++i) load[op.q[i]]++;
        frag = reentangle_entrances(g_, frag, needed, load);
    }

    for (NodeId n : frag.support)
        if (!mapping_->holds_logical(n) && layout_->is_backbone(n)) reset_ancilla(n);
    const auto bit_map = em_.append_fragment(frag.circ);
    for (const auto& [node, local_bit] : frag.measurements)
        mapping_->set_ancilla(node, MappingState::Anc::xmeas, bit_map[local_bit]);
    for (NodeId n : frag.surviving)
        mapping_->set_ancilla(n, MappingState::Anc::entangled);

    InFlightGate inf;
    inf.serial = serial;
    inf.control = mtg.control;
    inf.conjugated = mtg.conjugated;
    inf.control_phase = mtg.control_phase;
    inf.control_entrance = control_pick.entrance;
    for (const auto& c : mtg.components) inf.origins.push_back(c.origin);
    inf.path.assign(tree.begin(), tree.end());

    // route the control next to its entrance, then attach
    route_to_entrance(g_, em_, *mapping_, mtg.control, control_pick.entrance,
                      route_filter());
    if (mtg.conjugated) em_.one_q(GateKind::H, mapping_->node_of(mtg.control));
    {
        Circuit temp(g_.num_nodes());
        std::vector<NodeId> others;
        for (NodeId m : frag.surviving)
            if (m != control_pick.entrance) others.push_back(m);
        cat_attach_control(temp, g_, mapping_->node_of(mtg.control),
                           control_pick.entrance, others);
        const auto bm = em_.append_fragment(temp);
        mapping_->set_ancilla(control_pick.entrance, MappingState::Anc::zmeas, bm[0]);
        inf.survivors = others;
    }

    for (const auto& tp : plans) {
        route_to_entrance(g_, em_, *mapping_, tp.comp.target, tp.pick.entrance,
                          route_filter());
        Circuit temp(g_.num_nodes());
        CatComponent cc;
        cc.target = mapping_->node_of(tp.comp.target);
        cc.entrance = tp.pick.entrance;
        cc.is_phase = tp.comp.is_phase;
        cc.angle = tp.comp.angle;
        cat_component(temp, g_, cc);
        em_.append_fragment(temp);
        const double t = em_.node_time(tp.pick.entrance);
        shuttle_.entrance_available[tp.pick.entrance] = t;
        shuttle_.rec.entrance_uses.push_back(
            {tp.pick.entrance, t, serial, tp.comp.target});
        shuttle_.rec.period_end = std::max(shuttle_.rec.period_end, t);
        inf.targets.push_back(tp.comp.target);
    }

    ShuttleGateRecord grec;
    grec.serial = serial;
    grec.control = mtg.control;
    grec.targets = inf.targets;
    grec.control_entrance = control_pick.entrance;
    grec.path = inf.path;
    shuttle_.rec.gates.push_back(grec);
    shuttle_.rec.occupancy = shuttle_.occupancy;

    for (GateId o : inf.origins) in_flight_.insert(o);
    if (inf.conjugated) locked_.insert(inf.control);
    shuttle_.gates.push_back(std::move(inf));
    return true;
}

void Scheduler::close_shuttle() {
    if (!shuttle_.open) return;
    for (auto& gate : shuttle_.gates) {
        const NodeId control_node = mapping_->node_of(gate.control);
        Circuit temp(g_.num_nodes());
        cat_disentangle(temp, g_, control_node, gate.survivors);
        const auto bm = em_.append_fragment(temp);
        for (size_t i = 0; i < gate.survivors.size(); ++i)
            mapping_->set_ancilla(gate.survivors[i], MappingState::Anc::xmeas, bm[i]);
        if (gate.control_phase != 0.0)
            em_.one_q(GateKind::RZ, control_node, gate.control_phase);
        if (gate.conjugated) {
            em_.one_q(GateKind::H, control_node);
            locked_.erase(gate.control);
        }
        for (GateId o : gate.origins) {
            tracker_.mark_executed(o);
            in_flight_.erase(o);
        }
    }
    shuttle_.rec.frozen = shuttle_.period.frozen();
    shuttle_.rec.frozen_at = shuttle_.period.frozen_at();
    done_shuttles_.push_back(shuttle_.rec);
    shuttle_ = Shuttle{};
}

CompiledProgram Scheduler::run() {
    // initial placement: plain data nodes first, interleave slots afterwards
    std::vector<NodeId> data_nodes;
    for (NodeId n = 0; n < g_.num_nodes(); ++n)
        if (!layout_ || layout_->role[n] == NodeRole::data) data_nodes.push_back(n);
    if (layout_)
        for (NodeId n = 0; n < g_.num_nodes(); ++n)
            if (layout_->is_slot(n)) data_nodes.push_back(n);
    require(source_.num_qubits() <= static_cast<int>(data_nodes.size()),
            "data-qubit capacity exceeded");
    std::vector<NodeId> placement(data_nodes.begin(),
                                  data_nodes.begin() + source_.num_qubits());
    mapping_ = std::make_unique<MappingState>(source_.num_qubits(), placement,
                                              g_.num_nodes());

    while (!tracker_.done()) {
        bool progress = false;

        // single-qubit ops, measurements and feed-forward run immediately
        bool again = true;
        while (again) {
            again = false;
            const auto ready = tracker_.ready();
            for (GateId gid : ready) {
                if (in_flight_.count(gid)) continue;
                const GateOp& op = source_.gate(gid);
                if (op.nq >= 2 || is_locked(op)) continue;
                emit_simple(op);
                tracker_.mark_executed(gid);
                progress = again = true;
            }
        }

        std::vector<GateId> twoq;
        for (GateId gid : tracker_.ready()) {
            if (in_flight_.count(gid)) continue;
            const GateOp& op = source_.gate(gid);
            if (op.nq == 2 && !is_locked(op)) twoq.push_back(gid);
        }

        bool need_new_shuttle = false;
        std::vector<GateId> residual;
        if (cfg_.use_highway && layout_) {
            Aggregation agg = aggregate_frontier(source_, twoq);
            auto [highway, unpacked] = select_highway_gates(agg.groups, cfg_.min_targets);
            residual = agg.residual;
            residual.insert(residual.end(), unpacked.begin(), unpacked.end());
            std::sort(residual.begin(), residual.end());
            for (const auto& mtg : highway) {
                if (locked_.count(mtg.control)) continue;
                if (try_schedule(mtg))
                    progress = true;
                else
                    need_new_shuttle = true;
            }
        } else {
            residual = twoq;
        }

        for (GateId gid : residual) {
            route_offhighway_gate(g_, em_, *mapping_, source_.gate(gid), route_filter());
            tracker_.mark_executed(gid);
            progress = true;
        }

        if (need_new_shuttle || !progress) {
            if (shuttle_.open) {
                close_shuttle();
                progress = true;
            }
        }
        require(progress, "compile loop failed to make progress");
    }
    close_shuttle();

    CompiledProgram out;
    out.physical = std::move(phys_);
    out.num_data_qubits = source_.num_qubits();
    out.num_source_bits = source_.num_bits();
    out.initial_map = placement;
    out.final_map = mapping_->log_to_phys();
    out.shuttles = std::move(done_shuttles_);
    out.total_depth = em_.depth();
    out.highway_fraction = layout_ ? layout_->fraction() : 0.0;
    return out;
}

}  // namespace

CompiledProgram compile(const Circuit& source, const CouplingGraph& graph,
                        const HighwayLayout& layout, const SchedulerConfig& cfg) {
    Scheduler s(source, graph, cfg.use_highway ? &layout : nullptr, cfg);
    return s.run();
}

CompiledProgram baseline_compile(const Circuit& source, const CouplingGraph& graph,
                                 const SchedulerConfig& cfg) {
    SchedulerConfig c = cfg;
    c.use_highway = false;
    Scheduler s(source, graph, nullptr, c);
    return s.run();
}

}  // namespace mech
