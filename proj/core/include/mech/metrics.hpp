#pragma once

#include "mech/scheduler.hpp"
#include "mech/topology.hpp"

namespace mech {

/// Error-rate ratios of the counted operations relative to an on-chip CNOT,
/// and the depth units one measurement costs.
struct ErrorModel {
    double ratio_cross = 7.4;
    double ratio_meas = 2.2;
    double meas_depth = 2.0;

    void validate() const {
        require(ratio_cross > 0 && ratio_meas > 0 && meas_depth > 0,
                "error model entries must be positive");
    }
};

struct Metrics {
    long n_on = 0;
    long n_cross = 0;
    long n_meas = 0;
    double depth = 0.0;
    double eff_cnots = 0.0;
    double highway_fraction = 0.0;
};

/// eff = n_on + ratio_cross * n_cross + ratio_meas * n_meas
double eff_cnots(long n_on, long n_cross, long n_meas, const ErrorModel& model);

/// Classifies every CX of a compiled program by its coupling-edge label,
/// counts measurements, and computes the weighted depth. Throws when a
/// 2-qubit gate joins non-adjacent nodes.
Metrics count_ops(const CompiledProgram& prog, const CouplingGraph& graph,
                  const ErrorModel& model);

}  // namespace mech
