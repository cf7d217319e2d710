#include "qdb/engine.hpp"
#include "qdb/sql/parser.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace qdb;
using u64 = std::uint64_t;

Engine make_engine(u64 rows, double c_tuple) {
    Config config;
    config.classical.c_tuple_ns = c_tuple;
    config.seed = 19;
    Engine engine(std::move(config));
    engine.catalog().create_table(
        {"t", {{"a", ColumnType::UInt, 6, 0}, {"b", ColumnType::UInt, 6, 0}}});
    std::mt19937_64 rng(4);
    std::vector<Row> data;
    for (u64 i = 0; i < rows; ++i) {
        data.push_back({u64{rng() % 64}, u64{rng() % 64}});
    }
    engine.catalog().insert_rows("t", data);
    return engine;
}

void BM_FilterQueryClassicalPath(benchmark::State& state) {
    auto engine = make_engine(static_cast<u64>(state.range(0)), 1.0);
    for (auto _ : state) {
        auto result = engine.execute_sql("SELECT RID FROM t WHERE a = 7 AND b > 30");
        benchmark::DoNotOptimize(result.rows.rows.size());
    }
}
BENCHMARK(BM_FilterQueryClassicalPath)->Arg(256)->Arg(1024);

void BM_FilterQueryQuantumPath(benchmark::State& state) {
    auto engine = make_engine(static_cast<u64>(state.range(0)), 1e8);
    for (auto _ : state) {
        auto result = engine.execute_sql("SELECT RID FROM t WHERE a = 7");
        benchmark::DoNotOptimize(result.rows.rows.size());
    }
}
BENCHMARK(BM_FilterQueryQuantumPath)->Arg(64)->Arg(256);

void BM_PlanOnly(benchmark::State& state) {
    auto engine = make_engine(256, 100.0);
    const auto stmt = sql::parse_statement("SELECT RID FROM t WHERE a = 7 AND b > 30");
    for (auto _ : state) {
        auto plan = engine.plan_query(stmt);
        benchmark::DoNotOptimize(plan.root.get());
    }
}
BENCHMARK(BM_PlanOnly);

} // namespace
