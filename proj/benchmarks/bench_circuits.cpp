#include "qdb/grover.hpp"
#include "qdb/oracle.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qdb;
using u64 = std::uint64_t;

QromLoader make_loader(int rid_bits, int value_bits, u64 seed) {
    std::mt19937_64 rng(seed);
    std::vector<u64> values;
    for (u64 i = 0; i < (u64{1} << rid_bits); ++i) {
        values.push_back(rng() % (u64{1} << value_bits));
    }
    QromLoader loader(rid_bits);
    loader.add_column("c", value_bits, values);
    return loader;
}

void BM_OracleCompile(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto loader = make_loader(n, 6, 3);
    const auto pred = Predicate::conj(
        {Predicate::greater("c", 10.0, false), Predicate::less("c", 50.0, false)});
    for (auto _ : state) {
        auto oracle = compile_oracle(pred, loader, n, 6);
        benchmark::DoNotOptimize(oracle.circuit.gates.size());
    }
}
BENCHMARK(BM_OracleCompile)->Arg(6)->Arg(8)->Arg(10);

void BM_AmplifiedFilterRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto loader = make_loader(n, 6, 5);
    const auto oracle = compile_oracle(Predicate::eq("c", 7.0), loader, n, 6);
    GroverOptions opts;
    opts.shots = 256;
    opts.m_est = std::max<u64>(1, loader.rows() / 64);
    for (auto _ : state) {
        auto run = grover_filter(oracle, opts);
        benchmark::DoNotOptimize(run.success_estimate);
    }
}
BENCHMARK(BM_AmplifiedFilterRun)->Arg(6)->Arg(8);

void BM_CountingRun(benchmark::State& state) {
    const auto loader = make_loader(4, 4, 9);
    const auto oracle = compile_oracle(Predicate::less("c", 4.0, false), loader, 4, 4);
    for (auto _ : state) {
        auto m = quantum_count(oracle, 5, 128);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_CountingRun);

} // namespace
