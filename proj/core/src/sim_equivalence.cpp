#include <cmath>
#include <unordered_map>

#include "mech/scheduler.hpp"
#include "mech/sim.hpp"

namespace mech {

namespace {

/// <phi| rho_data |phi> where rho_data is the compiled state reduced onto
/// the final data positions (in logical order).
double reduced_fidelity(const StateVector& compiled, const std::vector<NodeId>& final_map,
                        const StateVector& reference) {
    const int n_data = reference.num_qubits();
    const int n_phys = compiled.num_qubits();
    std::vector<char> is_data(n_phys, 0);
    for (NodeId n : final_map) is_data[n] = 1;
    std::vector<int> anc_positions;
    for (int q = 0; q < n_phys; ++q)
        if (!is_data[q]) anc_positions.push_back(q);

    std::unordered_map<uint64_t, std::complex<double>> inner;
    for (uint64_t i = 0; i < compiled.dim(); ++i) {
        const auto amp = compiled.amplitude(i);
        if (std::norm(amp) < 1e-22) continue;
        uint64_t d = 0, a = 0;
        for (int q = 0; q < n_data; ++q)
            if ((i >> final_map[q]) & 1) d |= uint64_t{1} << q;
        for (size_t k = 0; k < anc_positions.size(); ++k)
            if ((i >> anc_positions[k]) & 1) a |= uint64_t{1} << k;
        inner[a] += std::conj(reference.amplitude(d)) * amp;
    }
    double f = 0.0;
    for (const auto& [a, v] : inner) f += std::norm(v);
    return f;
}

EquivReport statevector_equivalence(const Circuit& original, const CompiledProgram& prog,
                                    int trials, uint64_t seed) {
    EquivReport rep;
    rep.mode = "statevector";
    Rng rng(seed);
    const int n_data = original.num_qubits();
    const int n_phys = prog.physical.num_qubits();

    for (int t = 0; t < trials; ++t) {
        // random product input on the data qubits
        std::vector<std::pair<std::complex<double>, std::complex<double>>> locals;
        for (int q = 0; q < n_data; ++q) {
            const double theta = std::acos(1.0 - 2.0 * rng.next_double());
            const double phi = 2.0 * 3.14159265358979323846 * rng.next_double();
            locals.push_back({std::cos(theta / 2),
                              std::polar(std::sin(theta / 2), phi)});
        }

        StateVector ref(n_data);
        std::vector<QubitId> ids(n_data);
        for (int q = 0; q < n_data; ++q) ids[q] = q;
        ref.set_product(locals, ids);
        Rng orig_rng(seed ^ (0x9e3779b97f4a7c15ULL * (t + 1)));
        const auto orig_run = run_statevector(ref, original, orig_rng);

        StateVector comp(n_phys);
        comp.set_product(locals, prog.initial_map);
        Rng comp_rng(seed ^ (0xbf58476d1ce4e5b9ULL * (t + 1)));
        // measurements of source bits are pinned to the original's outcomes
        auto force = [&](int, BitId bit) {
            return bit < prog.num_source_bits ? orig_run.bits[bit] : -1;
        };
        const auto comp_run = run_statevector(comp, prog.physical, comp_rng, force);
        if (!comp_run.branch_ok) {
            rep.status = EquivReport::Status::fail;
            rep.detail = "compiled run cannot realize the original's measurement branch";
            rep.trials = t + 1;
            rep.min_fidelity = 0.0;
            return rep;
        }
        const double f = reduced_fidelity(comp, prog.final_map, ref);
        rep.min_fidelity = std::min(rep.min_fidelity, f);
        if (f < 1.0 - 1e-9) {
            rep.status = EquivReport::Status::fail;
            rep.detail = "fidelity below threshold at trial " + std::to_string(t);
            rep.trials = t + 1;
            return rep;
        }
    }
    rep.status = EquivReport::Status::pass;
    rep.trials = trials;
    return rep;
}

EquivReport stabilizer_equivalence(const Circuit& original, const CompiledProgram& prog,
                                   int trials, uint64_t seed) {
    EquivReport rep;
    rep.mode = "stabilizer";
    for (int t = 0; t < trials; ++t) {
        StabilizerSim orig_sim(std::max(1, original.num_qubits()));
        Rng orig_rng(seed + t);
        const auto orig_run = run_stabilizer(orig_sim, original, orig_rng);

        StabilizerSim comp_sim(std::max(1, prog.physical.num_qubits()));
        Rng comp_rng(seed + 1000003 * (t + 1));
        const auto comp_run = run_stabilizer(comp_sim, prog.physical, comp_rng);

        for (BitId b = 0; b < prog.num_source_bits; ++b) {
            if (!orig_run.deterministic[b]) continue;  // compare pinned bits only
            if (!comp_run.deterministic[b] || comp_run.bits[b] != orig_run.bits[b]) {
                rep.status = EquivReport::Status::fail;
                rep.detail = "deterministic source bit " + std::to_string(b) +
                             " disagrees";
                rep.trials = t + 1;
                rep.min_fidelity = 0.0;
                return rep;
            }
        }
    }
    rep.status = EquivReport::Status::pass;
    rep.trials = trials;
    return rep;
}

}  // namespace

EquivReport check_equivalence(const Circuit& original, const CompiledProgram& prog,
                              int trials, uint64_t seed) {
    require(trials >= 1, "check_equivalence: trials >= 1");
    if (prog.physical.num_qubits() <= StateVector::kMaxQubits)
        return statevector_equivalence(original, prog, trials, seed);
    if (is_clifford(original) && is_clifford(prog.physical))
        return stabilizer_equivalence(original, prog, trials, seed);
    EquivReport rep;
    rep.status = EquivReport::Status::unverifiable;
    rep.detail = "unverifiable at this size: " +
                 std::to_string(prog.physical.num_qubits()) +
                 " qubits exceeds the statevector cap and the circuit is not Clifford";
    return rep;
}

}  // namespace mech
