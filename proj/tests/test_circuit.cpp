#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "mech/circuit.hpp"
#include "mech/sim.hpp"

using namespace mech;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Unitary of a measurement-free circuit as basis-state columns.
std::vector<std::vector<cplx>> unitary_of(const Circuit& c) {
    const uint64_t dim = uint64_t{1} << c.num_qubits();
    std::vector<std::vector<cplx>> u(dim, std::vector<cplx>(dim));
    Rng rng(1);
    for (uint64_t b = 0; b < dim; ++b) {
        StateVector sv(c.num_qubits());
        sv.reset_basis(b);
        run_statevector(sv, c, rng);
        for (uint64_t i = 0; i < dim; ++i) u[b][i] = sv.amplitude(i);
    }
    return u;
}

/// Equality of two circuits' unitaries up to a global phase.
bool same_unitary(const Circuit& a, const Circuit& b, double tol = 1e-9) {
    REQUIRE(a.num_qubits() == b.num_qubits());
    const auto ua = unitary_of(a), ub = unitary_of(b);
    cplx phase{0, 0};
    for (size_t col = 0; col < ua.size() && phase == cplx{0, 0}; ++col)
        for (size_t i = 0; i < ua.size(); ++i)
            if (std::abs(ua[col][i]) > 1e-8) {
                phase = ub[col][i] / ua[col][i];
                break;
            }
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    for (size_t col = 0; col < ua.size(); ++col)
        for (size_t i = 0; i < ua.size(); ++i)
            if (std::abs(ua[col][i] * phase - ub[col][i]) > tol) return false;
    return true;
}

/// True when gates g and h commute as unitaries (checked on basis states).
bool gates_commute(int n, const GateOp& g, const GateOp& h) {
    Circuit gh(n), hg(n);
    gh.append(g);
    gh.append(h);
    hg.append(h);
    hg.append(g);
    return same_unitary(gh, hg, 1e-10);
}

/// Fig. 3(a)-style circuit; paper qubit k is index k-1.
Circuit fig3_circuit() {
    Circuit c(8);
    auto cxp = [&](int ctrl, int tgt) { c.cx(ctrl - 1, tgt - 1); };
    cxp(2, 1);
    cxp(2, 3);
    cxp(2, 4);
    cxp(6, 5);
    cxp(2, 5);
    cxp(6, 7);
    cxp(6, 8);
    cxp(7, 6);
    cxp(4, 1);
    cxp(4, 3);
    cxp(4, 7);
    cxp(4, 8);
    return c;
}

}  // namespace

TEST_CASE("swap decomposes to exactly three alternating CX") {
    Circuit c(2);
    c.swap(0, 1);
    const Circuit d = decompose_to_basis(c);
    REQUIRE(d.size() == 3);
    CHECK(d.gate(0).kind == GateKind::CX);
    CHECK(d.gate(0).q[0] == 0);
    CHECK(d.gate(1).q[0] == 1);
    CHECK(d.gate(2).q[0] == 0);
    CHECK(same_unitary(c, d));
}

TEST_CASE("empty circuit decomposes to an empty circuit") {
    Circuit c(3);
    CHECK(decompose_to_basis(c).empty());
}

TEST_CASE("bridge equals a CX across the middle qubit") {
    Circuit c(3);
    c.bridge(0, 1, 2);
    const Circuit d = decompose_to_basis(c);
    CHECK(d.size() == 4);
    Circuit ideal(3);
    ideal.cx(0, 2);
    CHECK(same_unitary(d, ideal));
}

TEST_CASE("CP decomposition matches the CP unitary for 100 random angles") {
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        const double theta = 2 * kPi * rng.next_double() - kPi;
        Circuit c(2);
        c.cp(0, 1, theta);
        const Circuit d = decompose_to_basis(c);
        int cx = 0, rz = 0;
        for (const auto& op : d.gates()) {
            cx += op.kind == GateKind::CX;
            rz += op.kind == GateKind::RZ;
        }
        CHECK(cx == 2);
        CHECK(rz == 3);
        CHECK(same_unitary(c, d));
    }
}

TEST_CASE("decompose_to_basis preserves the unitary of random circuits") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + rng.next_below(3);
        Circuit c(n);
        for (int i = 0; i < 15; ++i) {
            const int a = rng.next_below(n);
            int b = rng.next_below(n);
            while (b == a) b = rng.next_below(n);
            int m = rng.next_below(n);
            while (m == a || m == b) m = rng.next_below(n);
            switch (rng.next_below(7)) {
                case 0: c.h(a); break;
                case 1: c.rz(a, 2 * kPi * rng.next_double()); break;
                case 2: c.cx(a, b); break;
                case 3: c.cz(a, b); break;
                case 4: c.cp(a, b, 2 * kPi * rng.next_double()); break;
                case 5: c.swap(a, b); break;
                case 6: c.bridge(a, m, b); break;
            }
        }
        CHECK(same_unitary(c, decompose_to_basis(c), 1e-8));
    }
}

TEST_CASE("Fig. 3 frontier: the aggregable gates are concurrent") {
    const Circuit c = fig3_circuit();
    std::vector<bool> executed(c.size(), false);
    const auto frontier = commuting_frontier(c, executed);
    // C21 C23 C24 are all in the initial frontier together
    CHECK(std::count(frontier.begin(), frontier.end(), 0) == 1);
    CHECK(std::count(frontier.begin(), frontier.end(), 1) == 1);
    CHECK(std::count(frontier.begin(), frontier.end(), 2) == 1);
    CHECK(frontier == std::vector<GateId>{0, 1, 2, 3, 4, 5, 6});
    // C76 is blocked by C67/C68, the C4x gates by C24
    CHECK(std::count(frontier.begin(), frontier.end(), 7) == 0);
    CHECK(std::count(frontier.begin(), frontier.end(), 8) == 0);
}

TEST_CASE("empty circuit has an empty frontier") {
    Circuit c(2);
    std::vector<bool> executed;
    CHECK(commuting_frontier(c, executed).empty());
}

TEST_CASE("frontier members commute with all earlier unexecuted gates (unitary oracle)") {
    Rng rng(31);
    for (int t = 0; t < 8; ++t) {
        const int n = 8;
        Circuit c(n);
        for (int i = 0; i < 14; ++i) {
            const int a = rng.next_below(n);
            int b = rng.next_below(n);
            while (b == a) b = rng.next_below(n);
            switch (rng.next_below(5)) {
                case 0: c.h(a); break;
                case 1: c.x(a); break;
                case 2: c.z(a); break;
                case 3: c.cx(a, b); break;
                case 4: c.cz(a, b); break;
            }
        }
        std::vector<bool> executed(c.size(), false);
        const auto frontier = commuting_frontier(c, executed);
        for (GateId g : frontier)
            for (GateId h = 0; h < g; ++h)
                CHECK(gates_commute(n, c.gate(g), c.gate(h)));
    }
}

TEST_CASE("FrontierTracker matches commuting_frontier throughout execution") {
    Rng rng(41);
    for (int t = 0; t < 10; ++t) {
        const int n = 5;
        Circuit c(n);
        for (int i = 0; i < 20; ++i) {
            const int a = rng.next_below(n);
            int b = rng.next_below(n);
            while (b == a) b = rng.next_below(n);
            switch (rng.next_below(6)) {
                case 0: c.h(a); break;
                case 1: c.x(a); break;
                case 2: c.rz(a, 0.7); break;
                case 3: c.cx(a, b); break;
                case 4: c.cz(a, b); break;
                case 5: {
                    const BitId bit = c.measure(a, Basis::Z);
                    c.cond_pauli(b, 'X', bit);
                    break;
                }
            }
        }
        FrontierTracker tracker(c);
        std::vector<bool> executed(c.size(), false);
        while (!tracker.done()) {
            const auto expect = commuting_frontier(c, executed);
            CHECK(tracker.ready() == expect);
            REQUIRE(!expect.empty());
            const GateId pick = expect[rng.next_below(static_cast<int>(expect.size()))];
            tracker.mark_executed(pick);
            executed[pick] = true;
        }
        CHECK(commuting_frontier(c, executed).empty());
    }
}

TEST_CASE("Fig. 3 aggregation: C_2_134 and C_6_578 with C25 left over") {
    const Circuit c = fig3_circuit();
    std::vector<bool> executed(c.size(), false);
    const auto frontier = commuting_frontier(c, executed);
    const auto agg = aggregate_frontier(c, frontier);
    REQUIRE(agg.groups.size() == 2);
    CHECK(agg.groups[0].control == 1);  // paper qubit 2
    CHECK(agg.groups[0].components.size() == 3);
    CHECK(agg.groups[1].control == 5);  // paper qubit 6
    CHECK(agg.groups[1].components.size() == 3);
    std::vector<QubitId> t0, t1;
    for (const auto& comp : agg.groups[0].components) t0.push_back(comp.target);
    for (const auto& comp : agg.groups[1].components) t1.push_back(comp.target);
    std::sort(t0.begin(), t0.end());
    std::sort(t1.begin(), t1.end());
    CHECK(t0 == std::vector<QubitId>{0, 2, 3});  // paper 1,3,4
    CHECK(t1 == std::vector<QubitId>{4, 6, 7});  // paper 5,7,8
    REQUIRE(agg.residual.size() == 1);
    CHECK(agg.residual[0] == 4);  // C25's target was claimed by C65
}

TEST_CASE("a single CX aggregates into one group of one component") {
    Circuit c(2);
    c.cx(0, 1);
    const auto agg = aggregate_frontier(c, {0});
    REQUIRE(agg.groups.size() == 1);
    CHECK(agg.groups[0].components.size() == 1);
    CHECK(!agg.groups[0].conjugated);
    CHECK(agg.residual.empty());
}

TEST_CASE("BV oracle layer conjugates into one shared-control group") {
    const int k = 6;
    Circuit c(k + 1);
    for (int i = 0; i < k; ++i) c.cx(i, k);
    std::vector<GateId> frontier(k);
    for (int i = 0; i < k; ++i) frontier[i] = i;
    const auto agg = aggregate_frontier(c, frontier);
    REQUIRE(agg.groups.size() == 1);
    const auto& g = agg.groups[0];
    CHECK(g.conjugated);
    CHECK(g.control == k);
    CHECK(g.components.size() == k);
    CHECK(agg.residual.empty());

    // statevector equivalence of the conjugated realization
    Circuit realized(k + 1);
    realized.h(k);
    for (const auto& comp : g.components) {
        CHECK(comp.is_phase);
        realized.rz(comp.target, comp.angle / 2);
        realized.cx(k, comp.target);
        realized.rz(comp.target, -comp.angle / 2);
        realized.cx(k, comp.target);
    }
    realized.rz(k, g.control_phase);
    realized.h(k);
    CHECK(same_unitary(c, realized, 1e-8));
}

TEST_CASE("aggregation is a partition of the frontier's controlled gates") {
    Rng rng(53);
    for (int t = 0; t < 20; ++t) {
        const int n = 6;
        Circuit c(n);
        for (int i = 0; i < 12; ++i) {
            const int a = rng.next_below(n);
            int b = rng.next_below(n);
            while (b == a) b = rng.next_below(n);
            if (rng.next_below(3) == 0)
                c.cp(a, b, 0.5);
            else
                c.cx(a, b);
        }
        std::vector<bool> executed(c.size(), false);
        const auto frontier = commuting_frontier(c, executed);
        const auto agg = aggregate_frontier(c, frontier);
        size_t total = agg.residual.size();
        std::set<GateId> seen(agg.residual.begin(), agg.residual.end());
        for (const auto& g : agg.groups) {
            total += g.components.size();
            for (const auto& comp : g.components) CHECK(seen.insert(comp.origin).second);
        }
        CHECK(total == frontier.size());
        for (size_t i = 1; i < agg.groups.size(); ++i)
            CHECK(agg.groups[i - 1].components.size() >= agg.groups[i].components.size());
    }
}

TEST_CASE("weighted depth counts CX as 1 and measurement as meas_depth") {
    Circuit c1(2);
    c1.cx(0, 1);
    CHECK(weighted_depth(c1, 2.0) == doctest::Approx(1.0));

    Circuit c2(1);
    c2.measure(0, Basis::Z);
    CHECK(weighted_depth(c2, 2.0) == doctest::Approx(2.0));

    Circuit c3(4);
    c3.cx(0, 1);
    c3.cx(1, 2);
    c3.cx(2, 3);
    CHECK(weighted_depth(c3, 2.0) == doctest::Approx(3.0));

    Circuit c4(4);
    c4.cx(0, 1);
    c4.cx(2, 3);
    CHECK(weighted_depth(c4, 2.0) == doctest::Approx(1.0));

    Circuit c5(2);
    c5.h(0);
    const BitId b = c5.measure(0, Basis::Z);
    c5.cond_pauli(1, 'X', b);
    c5.h(1);
    CHECK(weighted_depth(c5, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("weighted depth is monotone under gate insertion") {
    Rng rng(61);
    Circuit c(4);
    double prev = 0.0;
    for (int i = 0; i < 40; ++i) {
        const int a = rng.next_below(4);
        int b = rng.next_below(4);
        while (b == a) b = rng.next_below(4);
        if (rng.next_below(4) == 0)
            c.measure(a, Basis::Z);
        else
            c.cx(a, b);
        const double d = weighted_depth(c, 2.0);
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("classical dependencies order measurement and feed-forward") {
    Circuit c(2);
    const BitId b = c.measure(0, Basis::Z);
    c.cond_pauli(1, 'X', b);
    std::vector<bool> executed(c.size(), false);
    auto frontier = commuting_frontier(c, executed);
    CHECK(frontier == std::vector<GateId>{0});
    executed[0] = true;
    frontier = commuting_frontier(c, executed);
    CHECK(frontier == std::vector<GateId>{1});
}
