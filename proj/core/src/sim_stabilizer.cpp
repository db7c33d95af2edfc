#include <bit>
#include <cmath>

#include "mech/sim.hpp"

namespace mech {

namespace {
constexpr double kPi = 3.14159265358979323846;

/// Folds an angle to one of {0, 1, 2, 3} quarter turns, or -1.
int quarter_turns(double angle) {
    double t = std::fmod(angle, 2 * kPi);
    if (t < 0) t += 2 * kPi;
    for (int k = 0; k < 4; ++k)
        if (std::abs(t - k * kPi / 2) < 1e-9) return k;
    if (std::abs(t - 2 * kPi) < 1e-9) return 0;
    return -1;
}
}  // namespace

PauliString::PauliString(int num_qubits)
    : x((num_qubits + 63) / 64, 0), z((num_qubits + 63) / 64, 0) {}

void PauliString::set_x(QubitId q) { x[q / 64] |= uint64_t{1} << (q % 64); }
void PauliString::set_z(QubitId q) { z[q / 64] |= uint64_t{1} << (q % 64); }
void PauliString::set_y(QubitId q) {
    set_x(q);
    set_z(q);
}

StabilizerSim::StabilizerSim(int num_qubits) : n_(num_qubits) {
    require(n_ >= 1, "stabilizer sim needs >= 1 qubit");
    const int w = words();
    x_.assign(2 * n_ + 1, std::vector<uint64_t>(w, 0));
    z_.assign(2 * n_ + 1, std::vector<uint64_t>(w, 0));
    r_.assign(2 * n_ + 1, 0);
    for (int i = 0; i < n_; ++i) {
        x_[i][i / 64] |= uint64_t{1} << (i % 64);          // destabilizer X_i
        z_[n_ + i][i / 64] |= uint64_t{1} << (i % 64);     // stabilizer Z_i
    }
}

bool StabilizerSim::xbit(int row, int q) const {
    return (x_[row][q / 64] >> (q % 64)) & 1;
}
bool StabilizerSim::zbit(int row, int q) const {
    return (z_[row][q / 64] >> (q % 64)) & 1;
}

void StabilizerSim::apply_h(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i) {
        const uint64_t xv = x_[i][w] & m, zv = z_[i][w] & m;
        if (xv && zv) r_[i] ^= 1;
        x_[i][w] = (x_[i][w] & ~m) | zv;
        z_[i][w] = (z_[i][w] & ~m) | xv;
    }
}

void StabilizerSim::apply_s(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i) {
        if ((x_[i][w] & m) && (z_[i][w] & m)) r_[i] ^= 1;
        z_[i][w] ^= x_[i][w] & m;
    }
}

void StabilizerSim::apply_sdg(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i) {
        if ((x_[i][w] & m) && !(z_[i][w] & m)) r_[i] ^= 1;
        z_[i][w] ^= x_[i][w] & m;
    }
}

void StabilizerSim::apply_x(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i)
        if (z_[i][w] & m) r_[i] ^= 1;
}

void StabilizerSim::apply_z(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i)
        if (x_[i][w] & m) r_[i] ^= 1;
}

void StabilizerSim::apply_y(QubitId q) {
    const int w = q / 64;
    const uint64_t m = uint64_t{1} << (q % 64);
    for (int i = 0; i < 2 * n_; ++i)
        if (((x_[i][w] & m) != 0) != ((z_[i][w] & m) != 0)) r_[i] ^= 1;
}

void StabilizerSim::apply_cx(QubitId c, QubitId t) {
    const int wc = c / 64, wt = t / 64;
    const uint64_t mc = uint64_t{1} << (c % 64), mt = uint64_t{1} << (t % 64);
    for (int i = 0; i < 2 * n_; ++i) {
        const bool xc = x_[i][wc] & mc, zc = z_[i][wc] & mc;
        const bool xt = x_[i][wt] & mt, zt = z_[i][wt] & mt;
        if (xc && zt && (xt == zc)) r_[i] ^= 1;
        if (xc) x_[i][wt] ^= mt;
        if (zt) z_[i][wc] ^= mc;
    }
}

void StabilizerSim::apply_cz(QubitId a, QubitId b) {
    apply_h(b);
    apply_cx(a, b);
    apply_h(b);
}

void StabilizerSim::mult_into(int h, int i) {
    // Phase exponent of P_i * P_h, computed mod 4; must land on 0 or 2.
    long sum = 2L * (r_[h] ? 1 : 0) + 2L * (r_[i] ? 1 : 0);
    const int w = words();
    long pos = 0, neg = 0;
    for (int k = 0; k < w; ++k) {
        const uint64_t x1 = x_[i][k], z1 = z_[i][k];
        const uint64_t x2 = x_[h][k], z2 = z_[h][k];
        const uint64_t p = (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) |
                           (~x1 & z1 & x2 & ~z2);
        const uint64_t n = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) |
                           (~x1 & z1 & x2 & z2);
        pos += std::popcount(p);
        neg += std::popcount(n);
    }
    sum += pos - neg;
    sum %= 4;
    if (sum < 0) sum += 4;
    // Phase bits of destabilizer rows are meaningless, and products landing
    // there may legitimately carry an i factor; stabilizer and scratch rows
    // must stay real.
    require(h < n_ || sum == 0 || sum == 2, "stabilizer phase arithmetic broke");
    r_[h] = sum >= 2;
    for (int k = 0; k < w; ++k) {
        x_[h][k] ^= x_[i][k];
        z_[h][k] ^= z_[i][k];
    }
}

StabilizerSim::MeasResult StabilizerSim::measure(QubitId q, Basis basis, Rng& rng,
                                                 int forced) {
    if (basis == Basis::X) apply_h(q);
    MeasResult res{};
    int p = -1;
    for (int i = n_; i < 2 * n_; ++i)
        if (xbit(i, q)) {
            p = i;
            break;
        }
    if (p >= 0) {
        // Random outcome.
        res.deterministic = false;
        res.outcome = forced >= 0 ? forced : (rng.next_bool() ? 1 : 0);
        for (int i = 0; i < 2 * n_; ++i)
            if (i != p && xbit(i, q)) mult_into(i, p);
        x_[p - n_] = x_[p];
        z_[p - n_] = z_[p];
        r_[p - n_] = r_[p];
        std::fill(x_[p].begin(), x_[p].end(), 0);
        std::fill(z_[p].begin(), z_[p].end(), 0);
        z_[p][q / 64] |= uint64_t{1} << (q % 64);
        r_[p] = res.outcome != 0;
    } else {
        // Deterministic outcome via the scratch row.
        res.deterministic = true;
        const int s = 2 * n_;
        std::fill(x_[s].begin(), x_[s].end(), 0);
        std::fill(z_[s].begin(), z_[s].end(), 0);
        r_[s] = 0;
        for (int i = 0; i < n_; ++i)
            if (xbit(i, q)) mult_into(s, i + n_);
        res.outcome = r_[s] ? 1 : 0;
        require(forced < 0 || forced == res.outcome,
                "forced outcome conflicts with a deterministic measurement");
    }
    if (basis == Basis::X) apply_h(q);
    return res;
}

int StabilizerSim::expectation(const PauliString& pauli) const {
    const int w = words();
    // Anticommutes with some stabilizer generator -> expectation 0.
    auto anticommutes = [&](int row) {
        long c = 0;
        for (int k = 0; k < w; ++k) {
            c += std::popcount(x_[row][k] & pauli.z[k]);
            c += std::popcount(z_[row][k] & pauli.x[k]);
        }
        return (c & 1) != 0;
    };
    for (int i = n_; i < 2 * n_; ++i)
        if (anticommutes(i)) return 0;

    // P = +/- product of stabilizers indicated by the destabilizers it
    // anticommutes with; build that product in a local scratch and compare.
    std::vector<uint64_t> sx(w, 0), sz(w, 0);
    long phase = 0;  // exponent of i, mod 4
    auto mult_pauli = [&](const std::vector<uint64_t>& px, const std::vector<uint64_t>& pz,
                          bool pr) {
        long pos = 0, neg = 0;
        for (int k = 0; k < w; ++k) {
            const uint64_t x1 = px[k], z1 = pz[k], x2 = sx[k], z2 = sz[k];
            pos += std::popcount((x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) |
                                 (~x1 & z1 & x2 & ~z2));
            neg += std::popcount((x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) |
                                 (~x1 & z1 & x2 & z2));
        }
        phase += (pr ? 2 : 0) + pos - neg;
        for (int k = 0; k < w; ++k) {
            sx[k] ^= px[k];
            sz[k] ^= pz[k];
        }
    };
    for (int i = 0; i < n_; ++i) {
        long c = 0;
        for (int k = 0; k < w; ++k) {
            c += std::popcount(x_[i][k] & pauli.z[k]);
            c += std::popcount(z_[i][k] & pauli.x[k]);
        }
        if (c & 1) mult_pauli(x_[i + n_], z_[i + n_], r_[i + n_]);
    }
    for (int k = 0; k < w; ++k)
        if (sx[k] != pauli.x[k] || sz[k] != pauli.z[k]) return 0;
    phase %= 4;
    if (phase < 0) phase += 4;
    require(phase == 0 || phase == 2, "pauli expectation phase broke");
    const bool product_negative = phase == 2;
    return product_negative == pauli.negative ? 1 : -1;
}

namespace {

void apply_clifford_rz(StabilizerSim& sim, QubitId q, double angle) {
    switch (quarter_turns(angle)) {
        case 0: return;
        case 1: sim.apply_s(q); return;
        case 2: sim.apply_z(q); return;
        case 3: sim.apply_sdg(q); return;
        default: throw MechError("non-Clifford RZ angle in stabilizer run");
    }
}

}  // namespace

StabRunResult run_stabilizer(StabilizerSim& sim, const Circuit& c, Rng& rng,
                             const OutcomeForce& force) {
    require(c.num_qubits() <= sim.num_qubits(), "circuit larger than tableau");
    StabRunResult res;
    res.bits.assign(c.num_bits(), 0);
    res.deterministic.assign(c.num_bits(), 0);
    int meas_index = 0;
    for (const GateOp& op : c.gates()) {
        switch (op.kind) {
            case GateKind::H: sim.apply_h(op.q[0]); break;
            case GateKind::X: sim.apply_x(op.q[0]); break;
            case GateKind::Y: sim.apply_y(op.q[0]); break;
            case GateKind::Z: sim.apply_z(op.q[0]); break;
            case GateKind::RZ: apply_clifford_rz(sim, op.q[0], op.angle); break;
            case GateKind::CX: sim.apply_cx(op.q[0], op.q[1]); break;
            case GateKind::CZ: sim.apply_cz(op.q[0], op.q[1]); break;
            case GateKind::CP:
                if (quarter_turns(op.angle) == 2)
                    sim.apply_cz(op.q[0], op.q[1]);
                else
                    throw MechError("non-Clifford CP angle in stabilizer run");
                break;
            case GateKind::SWAP:
                sim.apply_cx(op.q[0], op.q[1]);
                sim.apply_cx(op.q[1], op.q[0]);
                sim.apply_cx(op.q[0], op.q[1]);
                break;
            case GateKind::BRIDGE:
                sim.apply_cx(op.q[0], op.q[1]);
                sim.apply_cx(op.q[1], op.q[2]);
                sim.apply_cx(op.q[0], op.q[1]);
                sim.apply_cx(op.q[1], op.q[2]);
                break;
            case GateKind::MEASURE: {
                int forced = -1;
                if (force) forced = force(meas_index, op.bit);
                const auto m = sim.measure(op.q[0], op.basis, rng, forced);
                ++meas_index;
                res.bits[op.bit] = m.outcome;
                res.deterministic[op.bit] = m.deterministic;
                break;
            }
            case GateKind::COND_PAULI:
                if (res.bits[op.bit]) {
                    if (op.pauli == 'X')
                        sim.apply_x(op.q[0]);
                    else
                        sim.apply_z(op.q[0]);
                }
                break;
        }
    }
    return res;
}

bool is_clifford(const Circuit& c) {
    for (const GateOp& op : c.gates()) {
        if (op.kind == GateKind::RZ && quarter_turns(op.angle) < 0) return false;
        if (op.kind == GateKind::CP && quarter_turns(op.angle) != 2) return false;
    }
    return true;
}

}  // namespace mech
