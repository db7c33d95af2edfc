#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "mech/circuit.hpp"
#include "mech/highway.hpp"
#include "mech/topology.hpp"

namespace mech {

struct SchedulerConfig {
    int min_targets = 2;        // smallest aggregate scheduled on the highway
    double meas_depth = 2.0;    // depth units per measurement
    int entrance_radius = 2;    // initial candidate search radius (doubles)
    bool use_highway = true;
};

struct EntranceUse {
    NodeId entrance;
    double time;
    int gate_serial;
    QubitId qubit;  // logical qubit served
};

struct ShuttleGateRecord {
    int serial;            // highway-gate serial within the program
    QubitId control;       // logical control qubit
    std::vector<QubitId> targets;
    NodeId control_entrance;
    std::vector<NodeId> path;  // backbone nodes owned by this gate
};

struct ShuttleRecord {
    int index = 0;
    double start_time = 0.0;
    double period_end = 0.0;
    bool frozen = false;
    double frozen_at = -1.0;
    std::vector<ShuttleGateRecord> gates;
    std::vector<EntranceUse> entrance_uses;
    std::map<NodeId, int> occupancy;  // backbone node -> gate serial
};

struct CompiledProgram {
    Circuit physical;                 // decomposed gates over physical nodes
    int num_data_qubits = 0;
    int num_source_bits = 0;          // bits [0, n) mirror the source circuit
    std::vector<NodeId> initial_map;  // logical qubit -> node
    std::vector<NodeId> final_map;
    std::vector<ShuttleRecord> shuttles;
    double total_depth = 0.0;
    double highway_fraction = 0.0;
};

/// Dynamic shuttle period: demands extend an open period; the first
/// conflicting demand freezes it; later demands may join a frozen shuttle
/// only within the established period.
class ShuttlePeriod {
public:
    bool frozen() const { return frozen_; }
    double period_end() const { return period_end_; }
    double frozen_at() const { return frozen_at_; }

    /// Returns true when the demand is admitted into this shuttle.
    bool advance(double t_exe, bool conflicts, double now) {
        if (conflicts) {
            if (!frozen_) {
                frozen_ = true;
                frozen_at_ = now;
            }
            return false;
        }
        if (frozen_) {
            if (t_exe > period_end_) return false;
            return true;
        }
        period_end_ = std::max(period_end_, t_exe);
        return true;
    }

private:
    bool frozen_ = false;
    double period_end_ = 0.0;
    double frozen_at_ = -1.0;
};

/// Earliest-execution entrance selection: t_exe = max(t_arr, t_ava) with
/// t_arr = qubit depth + 3 * swap hops; ties by distance, then node id.
struct EntrancePick {
    NodeId entrance = -1;
    double t_arr = 0, t_ava = 0, t_exe = 0;
    int dist = 0;
};
EntrancePick pick_entrance(double qubit_depth,
                           const std::vector<std::pair<NodeId, int>>& candidates,
                           const std::map<NodeId, double>& entrance_available);

/// Node-weighted shortest path on the backbone graph from `from` to the
/// gate's own node set: own nodes cost 0, free nodes 1, nodes owned by other
/// gates are barred. Returns nullopt when the component must WAIT.
std::optional<std::vector<NodeId>> assign_highway_path(
    const HighwayLayout& layout, NodeId from, const std::set<NodeId>& own,
    const std::map<NodeId, int>& occupancy, int self_serial);

/// Splits aggregated groups into highway gates (>= min_targets components)
/// and the origin gate ids of the rest.
std::pair<std::vector<MultiTargetGate>, std::vector<GateId>> select_highway_gates(
    const std::vector<MultiTargetGate>& groups, int min_targets);

/// The MECH compilation pipeline: commuting-frontier scheduling, gate
/// aggregation, highway shuttles with dynamic periods, and SWAP routing for
/// everything else. The emitted program acts on physical nodes and carries
/// the source circuit's classical bits first.
CompiledProgram compile(const Circuit& source, const CouplingGraph& graph,
                        const HighwayLayout& layout, const SchedulerConfig& cfg);

/// Same pipeline with the highway disabled: no ancillas, no aggregation,
/// pure SWAP/bridge routing over the full graph.
CompiledProgram baseline_compile(const Circuit& source, const CouplingGraph& graph,
                                 const SchedulerConfig& cfg);

}  // namespace mech
