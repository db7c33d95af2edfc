#include <cmath>

#include "mech/sim.hpp"

namespace mech {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

StateVector::StateVector(int num_qubits) : n_(num_qubits) {
    require(n_ >= 1 && n_ <= kMaxQubits, "statevector size cap exceeded");
    amp_.assign(uint64_t{1} << n_, cplx{0.0, 0.0});
    amp_[0] = 1.0;
}

void StateVector::reset_basis(uint64_t bits) {
    std::fill(amp_.begin(), amp_.end(), cplx{0.0, 0.0});
    amp_[bits] = 1.0;
}

void StateVector::set_product(const std::vector<std::pair<cplx, cplx>>& locals,
                              const std::vector<QubitId>& at) {
    require(locals.size() == at.size(), "set_product: size mismatch");
    std::vector<std::pair<cplx, cplx>> per_qubit(n_, {cplx{1, 0}, cplx{0, 0}});
    for (size_t i = 0; i < at.size(); ++i) {
        require(at[i] >= 0 && at[i] < n_, "set_product: qubit out of range");
        per_qubit[at[i]] = locals[i];
    }
    for (uint64_t i = 0; i < dim(); ++i) {
        cplx a{1.0, 0.0};
        for (int q = 0; q < n_; ++q)
            a *= (i >> q) & 1 ? per_qubit[q].second : per_qubit[q].first;
        amp_[i] = a;
    }
}

void StateVector::apply_h(QubitId q) {
    const uint64_t mask = uint64_t{1} << q;
    const double s = 1.0 / std::sqrt(2.0);
    for (uint64_t i = 0; i < dim(); ++i) {
        if (i & mask) continue;
        const cplx a = amp_[i], b = amp_[i | mask];
        amp_[i] = s * (a + b);
        amp_[i | mask] = s * (a - b);
    }
}

void StateVector::apply_x(QubitId q) {
    const uint64_t mask = uint64_t{1} << q;
    for (uint64_t i = 0; i < dim(); ++i)
        if (!(i & mask)) std::swap(amp_[i], amp_[i | mask]);
}

void StateVector::apply_y(QubitId q) {
    const uint64_t mask = uint64_t{1} << q;
    const cplx im{0.0, 1.0};
    for (uint64_t i = 0; i < dim(); ++i) {
        if (i & mask) continue;
        const cplx a = amp_[i], b = amp_[i | mask];
        amp_[i] = -im * b;
        amp_[i | mask] = im * a;
    }
}

void StateVector::apply_z(QubitId q) {
    const uint64_t mask = uint64_t{1} << q;
    for (uint64_t i = 0; i < dim(); ++i)
        if (i & mask) amp_[i] = -amp_[i];
}

void StateVector::apply_rz(QubitId q, double angle) {
    const uint64_t mask = uint64_t{1} << q;
    const cplx p0 = std::polar(1.0, -angle / 2), p1 = std::polar(1.0, angle / 2);
    for (uint64_t i = 0; i < dim(); ++i) amp_[i] *= (i & mask) ? p1 : p0;
}

void StateVector::apply_cx(QubitId c, QubitId t) {
    const uint64_t cm = uint64_t{1} << c, tm = uint64_t{1} << t;
    for (uint64_t i = 0; i < dim(); ++i)
        if ((i & cm) && !(i & tm)) std::swap(amp_[i], amp_[i | tm]);
}

void StateVector::apply_cz(QubitId a, QubitId b) {
    const uint64_t am = uint64_t{1} << a, bm = uint64_t{1} << b;
    for (uint64_t i = 0; i < dim(); ++i)
        if ((i & am) && (i & bm)) amp_[i] = -amp_[i];
}

void StateVector::apply_cp(QubitId a, QubitId b, double angle) {
    const uint64_t am = uint64_t{1} << a, bm = uint64_t{1} << b;
    const cplx p = std::polar(1.0, angle);
    for (uint64_t i = 0; i < dim(); ++i)
        if ((i & am) && (i & bm)) amp_[i] *= p;
}

int StateVector::measure(QubitId q, Basis basis, Rng& rng, int forced) {
    if (basis == Basis::X) apply_h(q);
    const uint64_t mask = uint64_t{1} << q;
    double p1 = 0.0;
    for (uint64_t i = 0; i < dim(); ++i)
        if (i & mask) p1 += std::norm(amp_[i]);
    int outcome;
    if (forced >= 0) {
        outcome = forced;
        const double p = outcome ? p1 : 1.0 - p1;
        if (p < 1e-12) {
            if (basis == Basis::X) apply_h(q);
            return -1;  // forced branch does not exist
        }
    } else {
        outcome = rng.next_double() < p1 ? 1 : 0;
    }
    const double p = outcome ? p1 : 1.0 - p1;
    const double scale = 1.0 / std::sqrt(p);
    for (uint64_t i = 0; i < dim(); ++i) {
        if (((i & mask) != 0) != (outcome != 0))
            amp_[i] = 0.0;
        else
            amp_[i] *= scale;
    }
    if (basis == Basis::X) apply_h(q);
    return outcome;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amp_) s += std::norm(a);
    return s;
}

std::array<StateVector::cplx, 4> StateVector::reduced_qubit(QubitId q) const {
    const uint64_t mask = uint64_t{1} << q;
    std::array<cplx, 4> rho{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}};
    for (uint64_t i = 0; i < dim(); ++i) {
        if (i & mask) continue;
        const cplx a0 = amp_[i], a1 = amp_[i | mask];
        rho[0] += a0 * std::conj(a0);
        rho[1] += a0 * std::conj(a1);
        rho[2] += a1 * std::conj(a0);
        rho[3] += a1 * std::conj(a1);
    }
    return rho;
}

SvRunResult run_statevector(StateVector& sv, const Circuit& c, Rng& rng,
                            const OutcomeForce& force) {
    require(c.num_qubits() <= sv.num_qubits(), "circuit larger than state");
    SvRunResult res;
    res.bits.assign(c.num_bits(), 0);
    int meas_index = 0;
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::H: sv.apply_h(op.q[0]); break;
            case GateKind::X: sv.apply_x(op.q[0]); break;
            case GateKind::Y: sv.apply_y(op.q[0]); break;
            case GateKind::Z: sv.apply_z(op.q[0]); break;
            case GateKind::RZ: sv.apply_rz(op.q[0], op.angle); break;
            case GateKind::CX: sv.apply_cx(op.q[0], op.q[1]); break;
            case GateKind::CZ: sv.apply_cz(op.q[0], op.q[1]); break;
            case GateKind::CP: sv.apply_cp(op.q[0], op.q[1], op.angle); break;
            case GateKind::SWAP:
                sv.apply_cx(op.q[0], op.q[1]);
                sv.apply_cx(op.q[1], op.q[0]);
                sv.apply_cx(op.q[0], op.q[1]);
                break;
            case GateKind::BRIDGE:
                sv.apply_cx(op.q[0], op.q[1]);
                sv.apply_cx(op.q[1], op.q[2]);
                sv.apply_cx(op.q[0], op.q[1]);
                sv.apply_cx(op.q[1], op.q[2]);
                break;
            case GateKind::MEASURE: {
                int forced = -1;
                if (force) forced = force(meas_index, op.bit);
                const int out = sv.measure(op.q[0], op.basis, rng, forced);
                ++meas_index;
                if (out < 0) {
                    res.branch_ok = false;
                    return res;
                }
                res.bits[op.bit] = out;
                break;
            }
            case GateKind::COND_PAULI:
                if (res.bits[op.bit]) {
                    if (op.pauli == 'X')
                        sv.apply_x(op.q[0]);
                    else
                        sv.apply_z(op.q[0]);
                }
                break;
        }
    }
    return res;
}

}  // namespace mech
