#include <benchmark/benchmark.h>

#include "mech/bench_circuits.hpp"
#include "mech/entangle.hpp"
#include "mech/metrics.hpp"
#include "mech/sim.hpp"

namespace {

using namespace mech;

ChipletSpec spec_6x6_3x3() {
    ChipletSpec s;
    s.chiplet_rows = s.chiplet_cols = 6;
    s.array_rows = s.array_cols = 3;
    return s;
}

void BM_build_topology(benchmark::State& state) {
    const auto spec = spec_6x6_3x3();
    for (auto _ : state) {
        auto g = build_chiplet_array(spec);
        benchmark::DoNotOptimize(g.num_nodes());
    }
}
BENCHMARK(BM_build_topology);

void BM_allocate_highway(benchmark::State& state) {
    const auto g = build_chiplet_array(spec_6x6_3x3());
    for (auto _ : state) {
        auto lay = allocate_highway(g, {});
        benchmark::DoNotOptimize(lay.backbone_count);
    }
}
BENCHMARK(BM_allocate_highway);

void BM_compile_bv261(benchmark::State& state) {
    const auto g = build_chiplet_array(spec_6x6_3x3());
    const auto lay = allocate_highway(g, {});
    const Circuit circ = gen_bv(261, 1);
    for (auto _ : state) {
        auto prog = compile(circ, g, lay, {});
        benchmark::DoNotOptimize(prog.total_depth);
    }
}
BENCHMARK(BM_compile_bv261)->Unit(benchmark::kMillisecond);

void BM_compile_qft64(benchmark::State& state) {
    const auto g = build_chiplet_array(spec_6x6_3x3());
    const auto lay = allocate_highway(g, {});
    const Circuit circ = gen_qft(64);
    for (auto _ : state) {
        auto prog = compile(circ, g, lay, {});
        benchmark::DoNotOptimize(prog.total_depth);
    }
}
BENCHMARK(BM_compile_qft64)->Unit(benchmark::kMillisecond);

void BM_statevector_16q(benchmark::State& state) {
    Circuit c(16);
    for (int q = 0; q < 16; ++q) c.h(q);
    for (int q = 0; q + 1 < 16; ++q) c.cx(q, q + 1);
    for (auto _ : state) {
        StateVector sv(16);
        Rng rng(1);
        run_statevector(sv, c, rng);
        benchmark::DoNotOptimize(sv.norm_sq());
    }
    state.SetItemsProcessed(state.iterations() * c.size());
}
BENCHMARK(BM_statevector_16q)->Unit(benchmark::kMillisecond);

void BM_stabilizer_bv261(benchmark::State& state) {
    const Circuit circ = gen_bv(261, 1);
    for (auto _ : state) {
        StabilizerSim sim(circ.num_qubits());
        Rng rng(1);
        auto res = run_stabilizer(sim, circ, rng);
        benchmark::DoNotOptimize(res.bits.size());
    }
    state.SetItemsProcessed(state.iterations() * circ.size());
}
BENCHMARK(BM_stabilizer_bv261)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
