#include "mech/metrics.hpp"

namespace mech {

double eff_cnots(long n_on, long n_cross, long n_meas, const ErrorModel& model) {
    require(n_on >= 0 && n_cross >= 0 && n_meas >= 0, "counts must be >= 0");
    model.validate();
    return static_cast<double>(n_on) + model.ratio_cross * static_cast<double>(n_cross) +
           model.ratio_meas * static_cast<double>(n_meas);
}

Metrics count_ops(const CompiledProgram& prog, const CouplingGraph& graph,
                  const ErrorModel& model) {
    Metrics m;
    for (const GateOp& op : prog.physical.gates()) {
        switch (op.kind) {
            case GateKind::CX: {
                const auto kind = graph.edge_kind(op.q[0], op.q[1]);
                require(kind.has_value(), "compiled CX joins non-adjacent nodes");
                if (*kind == EdgeKind::on_chip)
                    m.n_on++;
                else
                    m.n_cross++;
                break;
            }
            case GateKind::MEASURE:
                m.n_meas++;
                break;
            case GateKind::H:
            case GateKind::X:
            case GateKind::Y:
            case GateKind::Z:
            case GateKind::RZ:
            case GateKind::COND_PAULI:
                break;
            default:
                throw MechError("compiled program contains an undecomposed gate");
        }
    }
    m.depth = weighted_depth(prog.physical, model.meas_depth);
    m.eff_cnots = eff_cnots(m.n_on, m.n_cross, m.n_meas, model);
    m.highway_fraction = prog.highway_fraction;
    return m;
}

}  // namespace mech
