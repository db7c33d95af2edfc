#include <doctest.h>

#include <cmath>
#include <complex>

#include "mech/sim.hpp"

using namespace mech;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// <psi| P |psi> for a Pauli given as per-qubit characters ('I','X','Y','Z').
cplx pauli_expectation(const StateVector& sv, const std::string& paulis) {
    StateVector copy = sv;
    for (size_t q = 0; q < paulis.size(); ++q) {
        switch (paulis[q]) {
            case 'X': copy.apply_x(static_cast<int>(q)); break;
            case 'Y': copy.apply_y(static_cast<int>(q)); break;
            case 'Z': copy.apply_z(static_cast<int>(q)); break;
            default: break;
        }
    }
    cplx acc{0, 0};
    for (uint64_t i = 0; i < sv.dim(); ++i)
        acc += std::conj(sv.amplitude(i)) * copy.amplitude(i);
    return acc;
}

Circuit random_clifford(int n, int gates, Rng& rng, bool with_measures) {
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        switch (rng.next_below(7)) {
            case 0: c.h(rng.next_below(n)); break;
            case 1: c.x(rng.next_below(n)); break;
            case 2: c.y(rng.next_below(n)); break;
            case 3: c.z(rng.next_below(n)); break;
            case 4: c.rz(rng.next_below(n), kPi / 2); break;
            case 5: {
                const int a = rng.next_below(n);
                int b = rng.next_below(n);
                while (b == a) b = rng.next_below(n);
                c.cx(a, b);
                break;
            }
            case 6: {
                const int a = rng.next_below(n);
                int b = rng.next_below(n);
                while (b == a) b = rng.next_below(n);
                c.cz(a, b);
                break;
            }
        }
    }
    if (with_measures)
        for (int q = 0; q < n; ++q) c.measure(q, Basis::Z);
    return c;
}

}  // namespace

TEST_CASE("H on |0> gives the uniform superposition") {
    StateVector sv(1);
    sv.apply_h(0);
    CHECK(std::abs(sv.amplitude(0) - cplx(1 / std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::abs(sv.amplitude(1) - cplx(1 / std::sqrt(2.0), 0)) < 1e-12);
}

TEST_CASE("statevector norm stays 1 through random circuits") {
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const int n = 2 + rng.next_below(5);
        Circuit c = random_clifford(n, 30, rng, false);
        Circuit full(n);
        for (const GateOp& op : c.gates()) {
            full.append(op);
            if (rng.next_below(4) == 0)
                full.rz(rng.next_below(n), 2 * kPi * rng.next_double());
        }
        StateVector sv(n);
        Rng run_rng(17 + t);
        run_statevector(sv, full, run_rng);
        CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-12);
    }
}

TEST_CASE("mid-circuit measurement collapses and renormalizes") {
    Circuit c(2);
    c.h(0);
    c.cx(0, 1);
    c.measure(0, Basis::Z);
    for (int forced = 0; forced < 2; ++forced) {
        StateVector sv(2);
        Rng rng(1);
        auto res = run_statevector(sv, c, rng, [&](int, BitId) { return forced; });
        REQUIRE(res.branch_ok);
        CHECK(res.bits[0] == forced);
        const uint64_t idx = forced ? 3 : 0;
        CHECK(std::abs(std::abs(sv.amplitude(idx)) - 1.0) < 1e-12);
    }
}

TEST_CASE("forcing an impossible branch is reported") {
    Circuit c(1);
    c.measure(0, Basis::Z);  // |0> measures 0 with certainty
    StateVector sv(1);
    Rng rng(1);
    auto res = run_statevector(sv, c, rng, [&](int, BitId) { return 1; });
    CHECK(!res.branch_ok);
}

TEST_CASE("linear cluster on 5 qubits collapses to a GHZ3 in every branch") {
    // cluster 0-1-2-3-4, X measurements on 1 and 3; survivors {0,2,4} are a
    // GHZ up to local Paulis in all four outcome branches
    Circuit c(5);
    for (int q = 0; q < 5; ++q) c.h(q);
    c.cz(0, 1);
    c.cz(2, 3);
    c.cz(1, 2);
    c.cz(3, 4);
    c.measure(1, Basis::X);
    c.measure(3, Basis::X);
    for (int m1 = 0; m1 < 2; ++m1)
        for (int m3 = 0; m3 < 2; ++m3) {
            StateVector sv(5);
            Rng rng(1);
            const std::vector<int> forced{m1, m3};
            auto res = run_statevector(sv, c, rng,
                                       [&](int idx, BitId) { return forced[idx]; });
            REQUIRE(res.branch_ok);
            CHECK(std::abs(pauli_expectation(sv, "XIXIX")) > 1 - 1e-10);
            CHECK(std::abs(pauli_expectation(sv, "ZIZII")) > 1 - 1e-10);
            CHECK(std::abs(pauli_expectation(sv, "IIZIZ")) > 1 - 1e-10);
        }
}

TEST_CASE("stabilizer tableau: Bell state expectations") {
    StabilizerSim sim(2);
    sim.apply_h(0);
    sim.apply_cx(0, 1);
    PauliString xx(2), zz(2), x0(2), zz_neg(2);
    xx.set_x(0);
    xx.set_x(1);
    zz.set_z(0);
    zz.set_z(1);
    x0.set_x(0);
    zz_neg.set_z(0);
    zz_neg.set_z(1);
    zz_neg.negative = true;
    CHECK(sim.expectation(xx) == 1);
    CHECK(sim.expectation(zz) == 1);
    CHECK(sim.expectation(x0) == 0);
    CHECK(sim.expectation(zz_neg) == -1);
}

TEST_CASE("stabilizer measurement determinism and outcomes") {
    StabilizerSim sim(2);
    Rng rng(5);
    auto m0 = sim.measure(0, Basis::Z, rng);
    CHECK(m0.deterministic);
    CHECK(m0.outcome == 0);
    sim.apply_h(0);
    auto m1 = sim.measure(0, Basis::Z, rng, 1);
    CHECK(!m1.deterministic);
    CHECK(m1.outcome == 1);
    auto m2 = sim.measure(0, Basis::Z, rng);
    CHECK(m2.deterministic);
    CHECK(m2.outcome == 1);
}

TEST_CASE("stabilizer and statevector agree on 100 random Clifford circuits") {
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + rng.next_below(11);  // up to 12 qubits
        Circuit c = random_clifford(n, 20 + rng.next_below(20), rng, true);

        StabilizerSim stab(n);
        Rng stab_rng(1000 + t);
        const auto sres = run_stabilizer(stab, c, stab_rng);

        // statevector must find every stabilizer outcome realizable
        StateVector sv(n);
        Rng sv_rng(2000 + t);
        const auto vres = run_statevector(
            sv, c, sv_rng, [&](int, BitId bit) { return sres.bits[bit]; });
        CHECK(vres.branch_ok);

        // deterministic bits really are deterministic: flipping one must die
        for (BitId b = 0; b < c.num_bits(); ++b) {
            if (!sres.deterministic[b]) continue;
            StateVector sv2(n);
            Rng sv2_rng(3000 + t);
            const auto flipped = run_statevector(sv2, c, sv2_rng, [&](int, BitId bit) {
                return bit == b ? 1 - sres.bits[bit] : sres.bits[bit];
            });
            CHECK(!flipped.branch_ok);
            break;  // one deterministic bit per circuit keeps this cheap
        }
    }
}

TEST_CASE("ghz stabilizer check at width 41 via the tableau") {
    const int n = 41;
    Circuit c(n);
    c.h(0);
    for (int i = 1; i < n; ++i) c.cx(i - 1, i);
    StabilizerSim sim(n);
    Rng rng(1);
    run_stabilizer(sim, c, rng);
    PauliString xall(n);
    for (int q = 0; q < n; ++q) xall.set_x(q);
    CHECK(sim.expectation(xall) == 1);
    for (int i = 1; i < n; ++i) {
        PauliString zz(n);
        zz.set_z(0);
        zz.set_z(i);
        CHECK(sim.expectation(zz) == 1);
    }
}

TEST_CASE("non-Clifford gates are rejected by the stabilizer runner") {
    Circuit c(1);
    c.rz(0, 0.3);
    StabilizerSim sim(1);
    Rng rng(1);
    CHECK_THROWS_AS(run_stabilizer(sim, c, rng), MechError);
    CHECK(!is_clifford(c));
    Circuit c2(2);
    c2.rz(0, kPi / 2);
    c2.cz(0, 1);
    CHECK(is_clifford(c2));
}

TEST_CASE("reduced single-qubit state of a product is pure") {
    StateVector sv(3);
    sv.set_product({{cplx(0.6, 0), cplx(0, 0.8)}}, {1});
    const auto rho = sv.reduced_qubit(1);
    CHECK(std::abs(rho[0] - cplx(0.36, 0)) < 1e-12);
    CHECK(std::abs(rho[3] - cplx(0.64, 0)) < 1e-12);
    CHECK(std::abs(rho[1] - cplx(0, -0.48)) < 1e-12);
}
