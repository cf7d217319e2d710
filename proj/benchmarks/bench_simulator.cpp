#include "qdb/simulator.hpp"
#include "qdb/statevector.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qdb;

void BM_HadamardSweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    const auto gate = GateInstance::h(n / 2);
    for (auto _ : state) {
        apply_gate(sv, gate);
        benchmark::DoNotOptimize(sv.amps.data());
    }
    state.SetItemsProcessed(state.iterations() * (sv.dim() / 2));
}
BENCHMARK(BM_HadamardSweep)->Arg(12)->Arg(16)->Arg(20)->Arg(22);

void BM_MultiControlledFlip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    std::vector<ControlBit> controls;
    for (int q = 0; q < 8; ++q) {
        controls.push_back({q, (q & 1) == 0});
    }
    const auto gate = GateInstance::mcx(controls, n - 1);
    for (auto _ : state) {
        apply_gate(sv, gate);
        benchmark::DoNotOptimize(sv.amps.data());
    }
}
BENCHMARK(BM_MultiControlledFlip)->Arg(16)->Arg(20)->Arg(22);

void BM_RandomCircuitRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    Circuit c(n);
    for (int i = 0; i < 200; ++i) {
        c.append(GateInstance::ry(static_cast<int>(rng() % n), 0.3));
        c.append(GateInstance::cnot(static_cast<int>(rng() % n),
                                    static_cast<int>((rng() % (n - 1) + 1 + rng() % n) % n)));
    }
    // Drop self-loops introduced by the modular arithmetic above.
    Circuit valid(n);
    for (const auto& g : c.gates) {
        if (g.controls.empty() || g.controls[0].qubit != g.targets[0]) {
            valid.append(g);
        }
    }
    for (auto _ : state) {
        auto sv = run_statevector(valid);
        benchmark::DoNotOptimize(sv.amps.data());
    }
}
BENCHMARK(BM_RandomCircuitRun)->Arg(10)->Arg(14)->Arg(18);

void BM_NoiselessSampling(benchmark::State& state) {
    Circuit c(8);
    for (int q = 0; q < 8; ++q) {
        c.append(GateInstance::h(q));
    }
    const auto noise = NoiseModel::disabled(11);
    for (auto _ : state) {
        auto counts = sample_counts(c, 2000, noise);
        benchmark::DoNotOptimize(counts.size());
    }
}
BENCHMARK(BM_NoiselessSampling);

} // namespace

BENCHMARK_MAIN();
