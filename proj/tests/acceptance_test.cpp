// Acceptance suite: one test case per criterion, each printing a single
// [PASS]/[FAIL] line with the measured figure next to its gate.

#include "qdb/amplitude.hpp"
#include "qdb/engine.hpp"
#include "qdb/errors.hpp"
#include "qdb/grover.hpp"
#include "qdb/minfind.hpp"
#include "qdb/oracle.hpp"
#include "qdb/qindex.hpp"
#include "qdb/schedule.hpp"
#include "qdb/sql/parser.hpp"
#include "qdb/synthetic.hpp"

#define QDB_ORACLE_TEST_HELPERS
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

using namespace qdb;
using u64 = std::uint64_t;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << detail
              << std::endl;
    CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

std::string repo_config(const char* name) {
    // The acceptance binary runs from build/tests; the configs directory
    // sits at the repository root.
    for (const char* prefix : {"configs/", "../configs/", "../../configs/", "../../../configs/"}) {
        const std::string path = std::string(prefix) + name;
        if (std::ifstream(path).good()) {
            return path;
        }
    }
    return std::string("configs/") + name;
}

std::set<u64> brute_filter(const QromLoader& loader, const PredicateNode& pred) {
    std::set<u64> out;
    std::function<PredicateNode(const PredicateNode&)> widen =
        [&](const PredicateNode& p) -> PredicateNode {
        auto copy = std::make_shared<Predicate>(*p);
        if (!p->column.empty()) {
            copy->column_bits = loader.width_of(p->column);
        }
        copy->children.clear();
        for (const auto& c : p->children) {
            copy->children.push_back(widen(c));
        }
        return copy;
    };
    const auto widened = widen(pred);
    for (u64 rid = 0; rid < loader.rows(); ++rid) {
        if (eval_predicate(*widened, [&](const std::string& col) {
                return static_cast<double>(loader.value(col, rid));
            })) {
            out.insert(rid);
        }
    }
    return out;
}

} // namespace

TEST_CASE("criterion 1: oracle equivalence over random predicates") {
    std::mt19937_64 rng(101);
    const std::vector<std::string> columns = {"a", "b"};
    const std::vector<int> bits = {4, 5};
    int checked = 0, failures = 0;
    const int per_size[] = {34, 33, 33};
    const u64 sizes[] = {16, 64, 256};
    for (int s = 0; s < 3; ++s) {
        const u64 n_rows = sizes[s];
        int n = 0;
        while ((u64{1} << n) < n_rows) {
            ++n;
        }
        QromLoader loader(n);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::vector<u64> values;
            for (u64 i = 0; i < n_rows; ++i) {
                values.push_back(rng() % (u64{1} << bits[c]));
            }
            loader.add_column(columns[c], bits[c], values);
        }
        int done = 0;
        while (done < per_size[s]) {
            const auto pred = qdbtest::random_predicate(columns, bits, 2, rng);
            PredicateOracle oracle;
            try {
                oracle = compile_oracle(pred, loader, n, 5);
            } catch (const Error&) {
                continue; // over-long prefixes and over-cap trees are regenerated
            }
            ++done;
            ++checked;
            const auto probe = qdbtest::oracle_marked_set(oracle);
            const auto expect = brute_filter(loader, pred);
            if (probe.marked != expect || probe.ancilla_leak > 1e-18) {
                ++failures;
            }
        }
    }
    report(1, failures == 0 && checked == 100,
           std::to_string(checked) + " predicates over N in {16,64,256}, " +
               std::to_string(failures) + " mismatches (tolerance 0)");
}

TEST_CASE("criterion 2: amplified success matches the rotation formula") {
    // N=256 with M=5 planted matches (2% selectivity bound).
    std::mt19937_64 rng(202);
    std::vector<u64> values(256);
    for (auto& v : values) {
        v = 1 + rng() % 62;
    }
    for (int i = 0; i < 5; ++i) {
        values[rng() % 256] = 0;
    }
    u64 m = 0;
    for (u64 v : values) {
        m += v == 0 ? 1 : 0;
    }
    QromLoader loader(8);
    loader.add_column("c", 6, values);
    const auto oracle = compile_oracle(Predicate::eq("c", 0.0), loader, 8, 6);
    GroverOptions opts;
    opts.shots = 2000;
    opts.m_est = m;
    opts.noise = NoiseModel::disabled(77);
    const auto run = grover_filter(oracle, opts);
    const double theta = std::asin(std::sqrt(static_cast<double>(m) / 256.0));
    const double expect = std::pow(std::sin((2.0 * run.k + 1.0) * theta), 2);
    const double sigma =
        std::sqrt(std::max(expect * (1.0 - expect), 1e-9) / static_cast<double>(opts.shots));
    const double dev = std::abs(run.success_estimate - expect);
    const bool big_ok = dev <= 3.0 * sigma;

    // N=4, M=1 succeeds with certainty.
    QromLoader tiny(2);
    tiny.add_column("c", 2, {0, 1, 2, 3});
    GroverOptions topts;
    topts.shots = 400;
    topts.m_est = 1;
    const auto tiny_run =
        grover_filter(compile_oracle(Predicate::eq("c", 3.0), tiny, 2, 2), topts);
    const bool tiny_ok = tiny_run.success_estimate == 1.0;

    std::ostringstream detail;
    detail.precision(5);
    detail << "N=256 M=" << m << " k=" << run.k << " success=" << run.success_estimate
           << " analytic=" << expect << " |dev|=" << dev << " <= 3sigma=" << 3.0 * sigma
           << "; N=4 success=" << tiny_run.success_estimate;
    report(2, big_ok && tiny_ok, detail.str());
}

TEST_CASE("criterion 3: noisy deviation stays inside the shipped-device gate") {
    std::mt19937_64 rng(303);
    std::vector<u64> values(256);
    for (auto& v : values) {
        v = 1 + rng() % 62;
    }
    for (int i = 0; i < 5; ++i) {
        values[rng() % 256] = 0;
    }
    u64 m = 0;
    for (u64 v : values) {
        m += v == 0 ? 1 : 0;
    }
    QromLoader loader(8);
    loader.add_column("c", 6, values);
    const auto oracle = compile_oracle(Predicate::eq("c", 0.0), loader, 8, 6);
    GroverOptions opts;
    opts.shots = 2000;
    opts.m_est = m;
    opts.noise = NoiseModel::from_device(DeviceModel::load_json(repo_config("default_device.json")),
                                         909);
    const auto noisy = grover_filter(oracle, opts);
    const double theta = std::asin(std::sqrt(static_cast<double>(m) / 256.0));
    const double analytic = std::pow(std::sin((2.0 * noisy.k + 1.0) * theta), 2);
    const double deviation = std::abs(noisy.success_estimate - analytic);
    std::ostringstream detail;
    detail.precision(4);
    detail << "N=256 noisy success=" << noisy.success_estimate << " analytic=" << analytic
           << " |deviation|=" << deviation
           << " (reported against the +-8% reference band; gate <= 15%)";
    report(3, deviation <= 0.15, detail.str());
}

TEST_CASE("criterion 4: swap-test accuracy") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    int within = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 2 + rng() % 15;
        std::vector<double> x(d), y(d);
        double nx = 0, ny = 0, ip = 0;
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = uni(rng);
            y[i] = uni(rng);
            nx += x[i] * x[i];
            ny += y[i] * y[i];
            ip += x[i] * y[i];
        }
        const double truth = ip * ip / (nx * ny);
        const auto result = swap_test(x, y, 2000, NoiseModel::disabled(1000 + trial));
        const double err = std::abs(result.estimate - truth);
        worst = std::max(worst, err);
        within += err <= 0.05 ? 1 : 0;
    }

    // Exact cases checked on the statevector, not through sampling.
    const std::vector<double> e1 = {1.0, 0.0, 0.0};
    const auto ax = amplitude_encode(e1);
    const int q = ax.n_qubits;
    auto exact_pr0 = [&](const std::vector<double>& a, const std::vector<double>& b) {
        Circuit c(2 * q + 1);
        c.append(embedded(amplitude_encode(a), 0, 2 * q + 1));
        c.append(embedded(amplitude_encode(b), q, 2 * q + 1));
        c.append(GateInstance::h(2 * q));
        for (int i = 0; i < q; ++i) {
            c.append(GateInstance::cswap(2 * q, i, q + i));
        }
        c.append(GateInstance::h(2 * q));
        return measured_distribution(run_statevector(c), {2 * q})[0];
    };
    const double same = exact_pr0(e1, e1);
    const double orth = exact_pr0(e1, {0.0, 1.0, 0.0});
    const bool exact_ok = std::abs(same - 1.0) < 1e-9 && std::abs(orth - 0.5) < 1e-9;

    std::ostringstream detail;
    detail.precision(4);
    detail << within << "/20 pairs within +-0.05 (worst " << worst << "); Pr[0|x=y]=" << same
           << ", Pr[0|x perp y]=" << orth;
    report(4, within == 20 && exact_ok, detail.str());
}

TEST_CASE("criterion 5: estimated sums respect the canonical bound") {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double v_max = 10.0;
    const double bound = 8.0 * v_max * ae_error_bound(6);
    int within = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(8);
        double truth = 0.0;
        for (auto& v : values) {
            v = uni(rng) * v_max;
            truth += v;
        }
        const auto agg =
            aggregate_sum(values, v_max, 6, 256, NoiseModel::disabled(2000 + trial));
        if (std::abs(agg.value - truth) <= bound) {
            ++within;
        }
    }
    std::ostringstream detail;
    detail.precision(5);
    detail << within << "/100 trials within N*V*(pi/64 + pi^2/4096) = " << bound
           << " (needs >= 81)";
    report(5, within >= 81, detail.str());
}

TEST_CASE("criterion 6: minimum finding recovers the true minimum") {
    const int trials = 100;
    auto run_chunk = [&](int begin, int end) {
        int correct = 0;
        for (int t = begin; t < end; ++t) {
            std::mt19937_64 rng(6000 + t);
            std::vector<u64> values(64);
            for (auto& v : values) {
                v = rng() % 32;
            }
            MinFindOptions opts;
            opts.seed = 60000 + static_cast<u64>(t);
            const auto result = durr_hoyer_min(values, 5, opts);
            correct += result.min_value == *std::min_element(values.begin(), values.end());
        }
        return correct;
    };
    auto upper = std::async(std::launch::async, run_chunk, 50, 100);
    const int correct = run_chunk(0, 50) + upper.get();
    report(6, correct >= 90,
           std::to_string(correct) + "/100 random N=64 instances returned the true minimum "
                                     "(needs >= 90)");
}

TEST_CASE("criterion 7: cost-model formula goldens") {
    bool ok = true;
    std::ostringstream detail;

    // T_q: layers with max durations 40 and 30 plus t_ctrl 10 -> 90.
    DeviceModel d = DeviceModel::ideal();
    d.gate_time_ns[GateKind::H] = 40.0;
    d.gate_time_ns[GateKind::X] = 30.0;
    d.t_ctrl_ns = 10.0;
    Circuit c(1);
    c.append(GateInstance::h(0));
    c.append(GateInstance::x(0));
    const double t_q = opt::estimate_time(schedule_layers(c, d), d);
    ok = ok && std::abs(t_q - 90.0) <= 90.0 * 1e-12;

    // p_k golden: 0.998 * exp(-50/100000).
    DeviceModel nd = DeviceModel::ideal();
    nd.gate_time_ns[GateKind::H] = 50.0;
    nd.gate_error[GateKind::H] = 0.001;
    nd.t2_eff_ns = 100000.0;
    Circuit c2(2);
    c2.append(GateInstance::h(0));
    c2.append(GateInstance::h(1));
    const double p = opt::estimate_success(schedule_layers(c2, nd), nd);
    ok = ok && std::abs(p - 0.9975011247292109) <= p * 1e-12;

    // P_q multiplies across layers.
    Circuit c4(2);
    for (int r = 0; r < 2; ++r) {
        c4.append(GateInstance::h(0));
        c4.append(GateInstance::h(1));
    }
    const double p2 = opt::estimate_success(schedule_layers(c4, nd), nd);
    ok = ok && std::abs(p2 - p * p) <= p2 * 1e-12;

    // E[T] golden: 0.9 * 1e6 + 0.1 * 1e7 = 1.9e6.
    const double e = opt::expected_runtime(0.9, 1e6, 1e7);
    ok = ok && std::abs(e - 1.9e6) <= 1.9e6 * 1e-12;

    detail.precision(17);
    detail << "T_q=" << t_q << " p_k=" << p << " P_q=" << p2 << " E[T]=" << e
           << " all within 1e-12 relative";
    report(7, ok, detail.str());
}

namespace {

struct EndToEndStats {
    int run = 0;
    int exact = 0;
    int quantum_nodes = 0;
};

Engine make_acceptance_engine(u64 rows, int bits, u64 seed, bool noisy) {
    Config config;
    config.device = DeviceModel::default_noisy();
    config.noisy = noisy;
    config.seed = seed;
    config.classical.c_tuple_ns = 1e8; // force the amplified path wherever eligible
    config.policy.default_shots = 1024;
    Engine engine(std::move(config));
    engine.catalog().create_table(
        {"t",
         {{"a", ColumnType::UInt, static_cast<int>(bits), 0},
          {"b", ColumnType::UInt, static_cast<int>(bits), 0}}});
    std::mt19937_64 rng(seed);
    std::vector<Row> data;
    for (u64 i = 0; i < rows; ++i) {
        data.push_back({u64{rng() % (u64{1} << bits)}, u64{rng() % (u64{1} << bits)}});
    }
    engine.catalog().insert_rows("t", data);
    return engine;
}

std::multiset<std::vector<u64>> result_rows(const exec::ResultSet& result) {
    std::multiset<std::vector<u64>> out;
    for (const auto& row : result.rows) {
        std::vector<u64> key;
        for (const auto& v : row) {
            key.push_back(std::get<u64>(v));
        }
        out.insert(key);
    }
    return out;
}

bool trace_used_quantum(const exec::ResultSet& result) {
    return std::any_of(result.trace.begin(), result.trace.end(), [](const auto& entry) {
        return entry.realization.find("quantum") != std::string::npos;
    });
}

} // namespace

TEST_CASE("criterion 8: end-to-end exactness of filter, join and MIN queries") {
    EndToEndStats stats;
    std::mt19937_64 rng(808);

    auto run_case = [&](Engine& engine, const std::string& query, bool scalar,
                        double expect_scalar, const std::multiset<std::vector<u64>>& expect) {
        const auto result = engine.execute_sql(query);
        ++stats.run;
        stats.quantum_nodes += trace_used_quantum(result.rows) ? 1 : 0;
        if (scalar) {
            stats.exact += result.rows.scalar &&
                                   result.rows.scalar_value == expect_scalar
                               ? 1
                               : 0;
        } else {
            stats.exact += result_rows(result.rows) == expect ? 1 : 0;
        }
    };

    for (const bool noisy : {false, true}) {
        // Filters: 15 per noise mode over mixed sizes.
        const u64 sizes[] = {64, 64, 64, 64, 64, 64, 256, 256, 256, 256, 256, 256, 1024,
                             1024, 1024};
        for (int i = 0; i < 15; ++i) {
            Engine engine =
                make_acceptance_engine(sizes[i], 6, 9000 + i + (noisy ? 500 : 0), noisy);
            const Table& t = engine.catalog().table("t");
            std::string query;
            switch (i % 3) {
                case 0:
                    query = "SELECT RID FROM t WHERE a = " +
                            std::to_string(t.uint_at(0, rng() % t.row_count()));
                    break;
                case 1: {
                    const u64 lo = rng() % 60;
                    query = "SELECT RID FROM t WHERE b BETWEEN " + std::to_string(lo) +
                            " AND " + std::to_string(lo + rng() % 4);
                    break;
                }
                default: {
                    const u64 v = rng() % 64;
                    query = "SELECT RID FROM t WHERE a = " + std::to_string(v % 16) +
                            " AND b >= " + std::to_string(v);
                    break;
                }
            }
            const auto stmt = sql::parse_statement(query);
            const auto logical = sql::lower_logical(stmt, engine.catalog());
            // Classical reference through the baseline operators.
            const sql::LogicalNode* filter = logical.root->child(0);
            const auto rids = exec::classical_filter(t, *filter->predicate);
            std::multiset<std::vector<u64>> expect;
            for (u64 rid : rids) {
                expect.insert({rid});
            }
            run_case(engine, query, false, 0.0, expect);
        }

        // Joins: 6 per noise mode (equi and non-equi probes).
        for (int i = 0; i < 6; ++i) {
            Engine engine = make_acceptance_engine(64, 6, 9100 + i + (noisy ? 500 : 0), noisy);
            auto& cat = engine.catalog();
            cat.create_table({"s", {{"k", ColumnType::UInt, 6, 0}}});
            std::vector<Row> srows;
            for (int r = 0; r < 12; ++r) {
                srows.push_back({u64{rng() % 64}});
            }
            cat.insert_rows("s", srows);
            const bool equi = i % 2 == 0;
            const std::string query = equi ? "SELECT * FROM s JOIN t ON s.k = t.a"
                                           : "SELECT * FROM s JOIN t ON s.k >= t.b";
            const Table& s = cat.table("s");
            const Table& t = cat.table("t");
            std::multiset<std::vector<u64>> expect;
            for (u64 l = 0; l < s.row_count(); ++l) {
                for (u64 r = 0; r < t.row_count(); ++r) {
                    const u64 k = s.uint_at(0, l);
                    const bool hit = equi ? k == t.uint_at(0, r) : k >= t.uint_at(1, r);
                    if (hit) {
                        expect.insert({k, t.uint_at(0, r), t.uint_at(1, r)});
                    }
                }
            }
            run_case(engine, query, false, 0.0, expect);
        }

        // MIN: 4 per noise mode.
        for (int i = 0; i < 4; ++i) {
            Engine engine = make_acceptance_engine(64, 5, 9200 + i + (noisy ? 500 : 0), noisy);
            const Table& t = engine.catalog().table("t");
            u64 truth = ~u64{0};
            for (u64 rid = 0; rid < t.row_count(); ++rid) {
                truth = std::min(truth, t.uint_at(1, rid));
            }
            run_case(engine, "SELECT MIN(b) FROM t", true, static_cast<double>(truth), {});
        }
    }

    std::ostringstream detail;
    detail << stats.exact << "/" << stats.run
           << " quantum-path results identical to the classical baseline ("
           << stats.quantum_nodes << " used an amplified node; noiseless and noisy)";
    report(8, stats.run == 50 && stats.exact == stats.run && stats.quantum_nodes >= 40,
           detail.str());
}

TEST_CASE("criterion 9: selective index strategy equals brute force") {
    Catalog cat;
    cat.create_table({"p",
                      {{"d1", ColumnType::UInt, 8, 0},
                       {"d2", ColumnType::UInt, 8, 0},
                       {"d3", ColumnType::UInt, 8, 0}}});
    std::mt19937_64 rng(909);
    std::vector<Row> rows;
    for (int i = 0; i < 1024; ++i) {
        rows.push_back({u64{rng() % 256}, u64{rng() % 256}, u64{rng() % 256}});
    }
    cat.insert_rows("p", rows);
    const Table& t = cat.table("p");
    qindex::SelectiveIndex index(t, {"d1", "d2", "d3"});

    int exact = 0, counter_ok = 0, post_filter_queries = 0;
    const int queries = 200;
    for (int trial = 0; trial < queries; ++trial) {
        std::vector<std::pair<std::string, qindex::KeyRange>> ranges;
        const int dims = 1 + static_cast<int>(rng() % 3);
        std::set<int> used;
        while (static_cast<int>(used.size()) < dims) {
            used.insert(static_cast<int>(rng() % 3));
        }
        for (int d : used) {
            const u64 width = (rng() % 2 == 0) ? (rng() % 6) : (rng() % 220);
            const u64 lo = rng() % 256;
            ranges.emplace_back("d" + std::to_string(d + 1),
                                qindex::KeyRange{lo, std::min<u64>(255, lo + width)});
        }
        const bool disjunctive = trial % 4 == 3;
        std::vector<u64> expect;
        for (u64 rid = 0; rid < t.row_count(); ++rid) {
            bool all = true, any = false;
            for (const auto& [col, range] : ranges) {
                const u64 v = t.uint_at(t.column_index(col), rid);
                const bool hit = v >= range.lo && v <= range.hi;
                all = all && hit;
                any = any || hit;
            }
            if (disjunctive ? any : all) {
                expect.push_back(rid);
            }
        }
        if (disjunctive) {
            exact += index.disjunctive_query(ranges) == expect ? 1 : 0;
            ++counter_ok;
        } else {
            const auto answer = index.conjunctive_query(ranges);
            exact += answer.rids == expect ? 1 : 0;
            if (answer.decision.chosen == qindex::Strategy::ClassicalPostFilter) {
                ++post_filter_queries;
                counter_ok += answer.residual_evals <=
                                      answer.decision.k_s * (ranges.size() - 1)
                                  ? 1
                                  : 0;
            } else {
                ++counter_ok;
            }
        }
    }

    // The worked two-dimensional layout: the d1 probe returns k1 = 4 rows,
    // then the d2 in [1,6] residual keeps the qualifying subset.
    Catalog worked;
    worked.create_table(
        {"w", {{"d1", ColumnType::UInt, 4, 0}, {"d2", ColumnType::UInt, 4, 0}}});
    worked.insert_rows("w", {{u64{5}, u64{2}},
                             {u64{7}, u64{4}},
                             {u64{8}, u64{6}},
                             {u64{6}, u64{9}},
                             {u64{1}, u64{3}},
                             {u64{2}, u64{5}},
                             {u64{11}, u64{1}},
                             {u64{12}, u64{2}},
                             {u64{3}, u64{14}},
                             {u64{4}, u64{15}},
                             {u64{13}, u64{7}},
                             {u64{14}, u64{8}},
                             {u64{0}, u64{10}},
                             {u64{15}, u64{11}},
                             {u64{9}, u64{12}},
                             {u64{10}, u64{13}}});
    qindex::SelectiveIndex windex(worked.table("w"), {"d1", "d2"});
    const auto answer = windex.conjunctive_query({{"d1", {5, 8}}, {"d2", {1, 6}}});
    const bool worked_ok = answer.probes[0].k() == 4 &&
                           answer.decision.chosen == qindex::Strategy::ClassicalPostFilter &&
                           answer.rids == std::vector<u64>{0, 1, 2};

    std::ostringstream detail;
    detail << exact << "/" << queries << " queries equal brute force, residual counter bound "
           << "held on all " << post_filter_queries
           << " post-filter queries, worked example reproduced (k1=4)";
    report(9, exact == queries && counter_ok == queries && worked_ok, detail.str());
}

TEST_CASE("criterion 10: crossover reproduction at desk scale") {
    // (a)+(b): calibrate on simulator runs at N <= 2^10, check consistency,
    // then sweep with the fitted constants.
    const DeviceModel ideal = DeviceModel::ideal();
    const opt::DepthModel depth;
    const auto fit = opt::calibrate_cost_model(ideal, depth, 16, 1024, 1717);
    const bool consistency_ok = fit.max_rel_err <= 0.20;

    opt::CrossoverConfig config;
    config.n_min = u64{1} << 10;
    config.n_max = u64{1} << 40;
    config.shots = 4;
    config.tau_layer_ns = fit.tau_layer_ns;
    opt::ClassicalCostModel calibrated;
    calibrated.c_tuple_ns = fit.c_tuple_ns;
    const auto swept = opt::crossover_analysis(ideal, depth, calibrated, config);
    bool unique_ok = swept.crossover_n.has_value();
    if (unique_ok) {
        bool beyond = false;
        for (const auto& row : swept.rows) {
            if (row.n >= *swept.crossover_n) {
                unique_ok = unique_ok && row.quantum_chosen;
                beyond = true;
            }
        }
        unique_ok = unique_ok && beyond;
    }

    // (c): the shipped demonstration constants place N* inside [2^25, 2^35].
    const auto demo_cfg = Config::from_json_file(repo_config("crossover_demo.json"));
    opt::CrossoverConfig demo_sweep;
    demo_sweep.n_min = u64{1} << 10;
    demo_sweep.n_max = u64{1} << 40;
    const auto demo =
        opt::crossover_analysis(demo_cfg.device, demo_cfg.depth, demo_cfg.classical, demo_sweep);
    const bool demo_ok = demo.crossover_n.has_value() &&
                         *demo.crossover_n >= (u64{1} << 25) &&
                         *demo.crossover_n <= (u64{1} << 35);

    std::ostringstream detail;
    detail.precision(4);
    detail << "fit max_rel_err=" << fit.max_rel_err << " (<=0.20), calibrated N*="
           << (swept.crossover_n ? std::to_string(*swept.crossover_n) : std::string("none"))
           << ", demo N*="
           << (demo.crossover_n ? ("2^" + std::to_string(static_cast<int>(std::round(
                                              std::log2(double(*demo.crossover_n))))))
                                : std::string("none"))
           << " inside [2^25, 2^35]";
    report(10, consistency_ok && unique_ok && demo_ok, detail.str());
}
