#include "mech/circuit.hpp"

#include <algorithm>
#include <map>

namespace mech {

void Circuit::check_qubit(QubitId q) const {
    require(q >= 0 && q < num_qubits_, "qubit index out of range");
}

void Circuit::push1(GateKind k, QubitId q) {
    check_qubit(q);
    GateOp op;
    op.kind = k;
    op.q[0] = q;
    op.nq = 1;
    gates_.push_back(op);
}

void Circuit::push2(GateKind k, QubitId a, QubitId b) {
    check_qubit(a);
    check_qubit(b);
    require(a != b, "2-qubit gate needs distinct qubits");
    GateOp op;
    op.kind = k;
    op.q[0] = a;
    op.q[1] = b;
    op.nq = 2;
    gates_.push_back(op);
}

void Circuit::rz(QubitId q, double angle) {
    check_qubit(q);
    GateOp op;
    op.kind = GateKind::RZ;
    op.q[0] = q;
    op.nq = 1;
    op.angle = angle;
    gates_.push_back(op);
}

void Circuit::cp(QubitId a, QubitId b, double angle) {
    push2(GateKind::CP, a, b);
    gates_.back().angle = angle;
}

void Circuit::bridge(QubitId c, QubitId m, QubitId t) {
    check_qubit(c);
    check_qubit(m);
    check_qubit(t);
    require(c != m && m != t && c != t, "bridge needs three distinct qubits");
    GateOp op;
    op.kind = GateKind::BRIDGE;
    op.q = {c, m, t};
    op.nq = 3;
    gates_.push_back(op);
}

BitId Circuit::measure(QubitId q, Basis basis) {
    const BitId bit = add_bit();
    measure_into(q, basis, bit);
    return bit;
}

void Circuit::measure_into(QubitId q, Basis basis, BitId bit) {
    check_qubit(q);
    require(bit >= 0 && bit < num_bits_, "measure: bit out of range");
    GateOp op;
    op.kind = GateKind::MEASURE;
    op.q[0] = q;
    op.nq = 1;
    op.basis = basis;
    op.bit = bit;
    gates_.push_back(op);
    bit_written_[bit] = true;
}

void Circuit::cond_pauli(QubitId q, char pauli, BitId bit) {
    check_qubit(q);
    require(pauli == 'X' || pauli == 'Z', "cond_pauli: pauli must be X or Z");
    require(bit >= 0 && bit < num_bits_, "cond_pauli: bit out of range");
    require(bit_written_[bit], "cond_pauli: bit was never written");
    GateOp op;
    op.kind = GateKind::COND_PAULI;
    op.q[0] = q;
    op.nq = 1;
    op.pauli = pauli;
    op.bit = bit;
    gates_.push_back(op);
}

void Circuit::append(const GateOp& op) {
    for (int i = 0; i < op.nq; ++i) check_qubit(op.q[i]);
    if (op.kind == GateKind::MEASURE) {
        measure_into(op.q[0], op.basis, op.bit);
        gates_.back().tag = op.tag;
        return;
    }
    if (op.kind == GateKind::COND_PAULI) {
        cond_pauli(op.q[0], op.pauli, op.bit);
        gates_.back().tag = op.tag;
        return;
    }
    gates_.push_back(op);
}

std::vector<BitId> Circuit::append_circuit(const Circuit& other) {
    require(other.num_qubits() <= num_qubits_, "append_circuit: qubit space too small");
    std::vector<BitId> bit_map(other.num_bits());
    for (int i = 0; i < other.num_bits(); ++i) bit_map[i] = add_bit();
    for (GateOp op : other.gates()) {
        if (op.bit >= 0) op.bit = bit_map[op.bit];
        append(op);
    }
    return bit_map;
}

Circuit decompose_to_basis(const Circuit& c) {
    Circuit out(c.num_qubits(), c.num_bits());
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::SWAP: {
                const QubitId a = op.q[0], b = op.q[1];
                out.cx(a, b);
                out.cx(b, a);
                out.cx(a, b);
                break;
            }
            case GateKind::BRIDGE: {
                const QubitId ctl = op.q[0], mid = op.q[1], tgt = op.q[2];
                out.cx(ctl, mid);
                out.cx(mid, tgt);
                out.cx(ctl, mid);
                out.cx(mid, tgt);
                break;
            }
            case GateKind::CZ: {
                out.h(op.q[1]);
                out.cx(op.q[0], op.q[1]);
                out.h(op.q[1]);
                break;
            }
            case GateKind::CP: {
                const QubitId a = op.q[0], b = op.q[1];
                const double t = op.angle;
                out.rz(a, t / 2);
                out.rz(b, t / 2);
                out.cx(a, b);
                out.rz(b, -t / 2);
                out.cx(a, b);
                break;
            }
            default:
                out.append(op);
        }
    }
    return out;
}

QubitAction qubit_action(const GateOp& op, QubitId q) {
    switch (op.kind) {
        case GateKind::X:
            return QubitAction::xdiag;
        case GateKind::Z:
        case GateKind::RZ:
            return QubitAction::zdiag;
        case GateKind::CX:
            return q == op.q[0] ? QubitAction::zdiag : QubitAction::xdiag;
        case GateKind::CZ:
        case GateKind::CP:
            return QubitAction::zdiag;
        case GateKind::COND_PAULI:
            return op.pauli == 'Z' ? QubitAction::zdiag : QubitAction::xdiag;
        case GateKind::H:
        case GateKind::Y:
        case GateKind::SWAP:
        case GateKind::BRIDGE:
        case GateKind::MEASURE:
            return QubitAction::blocking;
    }
    return QubitAction::blocking;
}

namespace {

struct SeenFlags {
    bool z = false, x = false, block = false;
};

bool compatible(QubitAction a, const SeenFlags& seen) {
    switch (a) {
        case QubitAction::zdiag: return !seen.x && !seen.block;
        case QubitAction::xdiag: return !seen.z && !seen.block;
        case QubitAction::blocking: return !seen.z && !seen.x && !seen.block;
    }
    return false;
}

}  // namespace

std::vector<GateId> commuting_frontier(const Circuit& c, const std::vector<bool>& executed) {
    require(static_cast<int>(executed.size()) == c.size(),
            "executed mask size mismatch");
    std::vector<SeenFlags> qubit_seen(c.num_qubits());
    struct BitSeen {
        bool write = false, read = false;
    };
    std::vector<BitSeen> bit_seen(c.num_bits());
    std::vector<GateId> frontier;

    for (GateId g = 0; g < c.size(); ++g) {
        if (executed[g]) continue;
        const GateOp& op = c.gate(g);
        bool ok = true;
        for (int i = 0; i < op.nq && ok; ++i)
            ok = compatible(qubit_action(op, op.q[i]), qubit_seen[op.q[i]]);
        if (op.kind == GateKind::MEASURE && op.bit >= 0)
            ok = ok && !bit_seen[op.bit].write && !bit_seen[op.bit].read;
        if (op.kind == GateKind::COND_PAULI && op.bit >= 0)
            ok = ok && !bit_seen[op.bit].write;
        if (ok) frontier.push_back(g);

        for (int i = 0; i < op.nq; ++i) {
            switch (qubit_action(op, op.q[i])) {
                case QubitAction::zdiag: qubit_seen[op.q[i]].z = true; break;
                case QubitAction::xdiag: qubit_seen[op.q[i]].x = true; break;
                case QubitAction::blocking: qubit_seen[op.q[i]].block = true; break;
            }
        }
        if (op.kind == GateKind::MEASURE && op.bit >= 0) bit_seen[op.bit].write = true;
        if (op.kind == GateKind::COND_PAULI && op.bit >= 0) bit_seen[op.bit].read = true;
    }
    return frontier;
}

FrontierTracker::FrontierTracker(const Circuit& c) {
    total_ = c.size();
    executed_.assign(total_, 0);
    gate_waves_.resize(total_);
    blocked_count_.assign(total_, 0);
    const int nq = c.num_qubits();
    resources_.resize(nq + c.num_bits());

    // Wave construction: consecutive gates with the same action class on a
    // resource share a wave; a blocking action is a wave of its own.
    struct Last {
        int cls = -1;  // 0 z, 1 x, 2 block; -1 none
    };
    std::vector<Last> last(resources_.size());

    auto add_to_wave = [&](GateId g, int res, int cls) {
        Resource& r = resources_[res];
        bool new_wave = r.pending.empty() || last[res].cls != cls || cls == 2;
        if (new_wave) {
            r.pending.push_back(0);
            r.members.emplace_back();
            last[res].cls = cls;
        }
        const int w = static_cast<int>(r.pending.size()) - 1;
        r.pending[w]++;
        r.members[w].push_back(g);
        gate_waves_[g].emplace_back(res, w);
        if (w != 0) blocked_count_[g]++;
    };

    for (GateId g = 0; g < total_; ++g) {
        const GateOp& op = c.gate(g);
        for (int i = 0; i < op.nq; ++i) {
            int cls = 2;
            switch (qubit_action(op, op.q[i])) {
                case QubitAction::zdiag: cls = 0; break;
                case QubitAction::xdiag: cls = 1; break;
                case QubitAction::blocking: cls = 2; break;
            }
            add_to_wave(g, op.q[i], cls);
        }
        if (op.bit >= 0) {
            // classical bit: MEASURE is a writer (own wave), COND_PAULI a reader
            const int res = nq + op.bit;
            const int cls = op.kind == GateKind::MEASURE ? 2 : 0;
            add_to_wave(g, res, cls);
        }
        if (blocked_count_[g] == 0) ready_.push_back(g);
    }
}

void FrontierTracker::advance(int res) {
    Resource& r = resources_[res];
    while (r.cur < static_cast<int>(r.pending.size()) && r.pending[r.cur] == 0) {
        r.cur++;
        if (r.cur < static_cast<int>(r.pending.size())) {
            for (GateId g : r.members[r.cur]) {
                if (executed_[g]) continue;
                if (--blocked_count_[g] == 0)
                    ready_.insert(std::lower_bound(ready_.begin(), ready_.end(), g), g);
            }
        }
    }
}

void FrontierTracker::mark_executed(GateId g) {
    require(!executed_[g], "gate already executed");
    executed_[g] = 1;
    executed_count_++;
    auto it = std::lower_bound(ready_.begin(), ready_.end(), g);
    require(it != ready_.end() && *it == g, "gate not in frontier");
    ready_.erase(it);
    for (const auto& [res, w] : gate_waves_[g]) {
        resources_[res].pending[w]--;
        if (w == resources_[res].cur) advance(res);
    }
}

Aggregation aggregate_frontier(const Circuit& c, const std::vector<GateId>& frontier) {
    Aggregation out;

    struct Cand {
        GateId id;
        bool is_cx;
        QubitId a, b;  // CX: control, target; CZ/CP: as written
        double angle;
    };
    std::vector<Cand> cands;
    std::map<QubitId, int> plain_pool, conj_pool;
    for (GateId g : frontier) {
        const GateOp& op = c.gate(g);
        if (op.kind == GateKind::CX) {
            cands.push_back({g, true, op.q[0], op.q[1], 0.0});
            plain_pool[op.q[0]]++;
            conj_pool[op.q[1]]++;
        } else if (op.kind == GateKind::CZ || op.kind == GateKind::CP) {
            const double angle = op.kind == GateKind::CZ ? 3.14159265358979323846 : op.angle;
            cands.push_back({g, false, op.q[0], op.q[1], angle});
            plain_pool[op.q[0]]++;
            plain_pool[op.q[1]]++;
        } else {
            out.residual.push_back(g);
        }
    }

    // group key: (anchor qubit, conjugated?)
    std::map<std::pair<QubitId, bool>, int> open_groups;
    std::vector<char> claimed(c.num_qubits(), 0);

    auto pool = [](std::map<QubitId, int>& m, QubitId q) {
        auto it = m.find(q);
        return it == m.end() ? 0 : it->second;
    };

    auto try_place = [&](const Cand& cd, QubitId anchor, bool conj) -> bool {
        const QubitId other = cd.a == anchor ? cd.b : cd.a;
        auto key = std::make_pair(anchor, conj);
        auto it = open_groups.find(key);
        if (it == open_groups.end()) {
            if (claimed[anchor] || claimed[other]) return false;
            MultiTargetGate mtg;
            mtg.control = anchor;
            mtg.conjugated = conj;
            out.groups.push_back(mtg);
            open_groups[key] = static_cast<int>(out.groups.size()) - 1;
            claimed[anchor] = 1;
            it = open_groups.find(key);
        } else if (claimed[other]) {
            return false;
        }
        MultiTargetGate& mtg = out.groups[it->second];
        MtgComponent comp;
        comp.target = other;
        comp.origin = cd.id;
        if (conj) {
            // CX sharing a target becomes H . CZ . H; CZ = CRZ(pi) + RZ(pi/2)
            comp.is_phase = true;
            comp.angle = 3.14159265358979323846;
            mtg.control_phase += comp.angle / 2;
        } else if (cd.is_cx) {
            comp.is_phase = false;
            comp.angle = 0.0;
        } else {
            comp.is_phase = true;
            comp.angle = cd.angle;
            mtg.control_phase += cd.angle / 2;
        }
        mtg.components.push_back(comp);
        claimed[other] = 1;
        return true;
    };

    for (const Cand& cd : cands) {
        bool placed = false;
        if (cd.is_cx) {
            const int plain = pool(plain_pool, cd.a);
            const int conj = pool(conj_pool, cd.b);
            // conjugation only when it strictly beats the plain grouping
            if (conj > plain) {
                placed = try_place(cd, cd.b, true) || try_place(cd, cd.a, false);
            } else {
                placed = try_place(cd, cd.a, false) || try_place(cd, cd.b, true);
            }
        } else {
            const int pa = pool(plain_pool, cd.a);
            const int pb = pool(plain_pool, cd.b);
            if (pb > pa) {
                placed = try_place(cd, cd.b, false) || try_place(cd, cd.a, false);
            } else {
                placed = try_place(cd, cd.a, false) || try_place(cd, cd.b, false);
            }
        }
        if (!placed) out.residual.push_back(cd.id);
    }

    std::stable_sort(out.groups.begin(), out.groups.end(),
                     [](const MultiTargetGate& a, const MultiTargetGate& b) {
                         return a.components.size() > b.components.size();
                     });
    std::sort(out.residual.begin(), out.residual.end());
    return out;
}

double weighted_depth(const Circuit& c, double meas_depth) {
    require(meas_depth > 0, "meas_depth must be positive");
    std::vector<double> qt(c.num_qubits(), 0.0);
    std::vector<double> bt(c.num_bits(), 0.0);
    double depth = 0.0;
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::CX: {
                const double t = std::max(qt[op.q[0]], qt[op.q[1]]) + 1.0;
                qt[op.q[0]] = qt[op.q[1]] = t;
                depth = std::max(depth, t);
                break;
            }
            case GateKind::MEASURE: {
                const double t = qt[op.q[0]] + meas_depth;
                qt[op.q[0]] = t;
                bt[op.bit] = t;
                depth = std::max(depth, t);
                break;
            }
            case GateKind::COND_PAULI: {
                qt[op.q[0]] = std::max(qt[op.q[0]], bt[op.bit]);
                break;
            }
            case GateKind::H:
            case GateKind::X:
            case GateKind::Y:
            case GateKind::Z:
            case GateKind::RZ:
                break;
            default:
                throw MechError("weighted_depth requires a decomposed circuit");
        }
    }
    return depth;
}

std::pair<Circuit, std::vector<QubitId>> compact_circuit(const Circuit& c) {
    std::vector<char> touched(c.num_qubits(), 0);
    for (const GateOp& op : c.gates())
        for (int i = 0; i < op.nq; ++i) touched[op.q[i]] = 1;
    std::vector<QubitId> support;
    std::vector<QubitId> to_compact(c.num_qubits(), -1);
    for (QubitId q = 0; q < c.num_qubits(); ++q)
        if (touched[q]) {
            to_compact[q] = static_cast<QubitId>(support.size());
            support.push_back(q);
        }
    Circuit out(std::max<int>(1, static_cast<int>(support.size())), c.num_bits());
    for (GateOp op : c.gates()) {
        for (int i = 0; i < op.nq; ++i) op.q[i] = to_compact[op.q[i]];
        out.append(op);
    }
    return {std::move(out), std::move(support)};
}

int two_qubit_depth(const Circuit& c) {
    std::vector<int> qt(c.num_qubits(), 0);
    int depth = 0;
    for (const GateOp& op : c.gates()) {
        if (op.nq < 2) continue;
        int t = 0;
        for (int i = 0; i < op.nq; ++i) t = std::max(t, qt[op.q[i]]);
        ++t;
        for (int i = 0; i < op.nq; ++i) qt[op.q[i]] = t;
        depth = std::max(depth, t);
    }
    return depth;
}

}  // namespace mech
