#include "qdb/optimizer.hpp"

#include "qdb/errors.hpp"
#include "qdb/sql/parser.hpp"
#include "qdb/synthetic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace qdb;
using namespace qdb::opt;
using u64 = std::uint64_t;

namespace {

DeviceModel two_layer_device() {
    DeviceModel d = DeviceModel::ideal();
    d.gate_time_ns[GateKind::H] = 40.0;
    d.gate_time_ns[GateKind::X] = 30.0;
    d.t_ctrl_ns = 10.0;
    return d;
}

Catalog planning_catalog(u64 rows, u64 seed) {
    Catalog cat;
    cat.create_table(
        {"t", {{"a", ColumnType::UInt, 6, 0}, {"b", ColumnType::UInt, 6, 0}}});
    std::mt19937_64 rng(seed);
    std::vector<Row> data;
    for (u64 i = 0; i < rows; ++i) {
        data.push_back({u64{rng() % 64}, u64{rng() % 64}});
    }
    cat.insert_rows("t", data);
    return cat;
}

} // namespace

TEST_CASE("layer time formula evaluates exactly") {
    // Two layers with max durations 40 and 30, t_ctrl = 10 -> 90 ns.
    Circuit c(2);
    c.append(GateInstance::h(0));
    c.append(GateInstance::x(0));
    const auto sched = schedule_layers(c, two_layer_device());
    REQUIRE(sched.layer_count() == 2);
    CHECK(estimate_time(sched, two_layer_device()) == doctest::Approx(90.0).epsilon(1e-12));

    SUBCASE("empty circuit costs nothing") {
        Circuit empty(1);
        CHECK(estimate_time(schedule_layers(empty, two_layer_device()), two_layer_device()) ==
              0.0);
    }
    SUBCASE("single 20ns gate plus control overhead") {
        DeviceModel d = two_layer_device();
        d.gate_time_ns[GateKind::Z] = 20.0;
        Circuit single(1);
        single.append(GateInstance::z(0));
        CHECK(estimate_time(schedule_layers(single, d), d) ==
              doctest::Approx(30.0).epsilon(1e-12));
    }
}

TEST_CASE("layer success probability matches the hand-computed golden") {
    // One layer, two gates at eps = 0.001 each, t_k = 50ns, T2 = 100000ns:
    // p = 0.998 * exp(-0.0005) = 0.9975011247292109.
    DeviceModel d = DeviceModel::ideal();
    d.gate_time_ns[GateKind::H] = 50.0;
    d.gate_error[GateKind::H] = 0.001;
    d.t2_eff_ns = 100000.0;
    Circuit c(2);
    c.append(GateInstance::h(0));
    c.append(GateInstance::h(1));
    const auto sched = schedule_layers(c, d);
    REQUIRE(sched.layer_count() == 1);
    const double p = estimate_success(sched, d);
    CHECK(std::abs(p - 0.9975011247292109) / p < 1e-12);

    SUBCASE("noiseless device gives certainty") {
        DeviceModel ideal = DeviceModel::ideal();
        ideal.t2_eff_ns = 1e18;
        CHECK(estimate_success(schedule_layers(c, ideal), ideal) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("two identical layers multiply") {
        Circuit twice(2);
        twice.append(GateInstance::h(0));
        twice.append(GateInstance::h(1));
        twice.append(GateInstance::h(0));
        twice.append(GateInstance::h(1));
        const double p2 = estimate_success(schedule_layers(twice, d), d);
        CHECK(p2 == doctest::Approx(p * p).epsilon(1e-12));
    }
    SUBCASE("overflowing layer error mass raises") {
        DeviceModel bad = d;
        bad.gate_error[GateKind::H] = 0.6;
        try {
            estimate_success(schedule_layers(c, bad), bad);
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LayerErrorOverflow);
        }
    }
}

TEST_CASE("expected runtime interpolates between the two paths") {
    CHECK(expected_runtime(0.9, 1e6, 1e7) == doctest::Approx(1.9e6).epsilon(1e-12));
    CHECK(expected_runtime(1.0, 1234.5, 1e9) == doctest::Approx(1234.5));
    CHECK(expected_runtime(1e-9, 1.0, 777.0) == doctest::Approx(777.0).epsilon(1e-6));
    // min(Tq, Tc) <= E[T] <= max(Tq, Tc) across the range.
    for (double p = 0.0; p <= 1.0; p += 0.125) {
        const double e = expected_runtime(p, 3.0, 11.0);
        CHECK(e >= 3.0);
        CHECK(e <= 11.0);
    }
}

TEST_CASE("T_q is additive under schedule concatenation") {
    std::mt19937_64 rng(3);
    const DeviceModel d = DeviceModel::ideal();
    for (int trial = 0; trial < 10; ++trial) {
        Circuit a(3), b(3);
        for (int i = 0; i < 12; ++i) {
            a.append(GateInstance::h(static_cast<int>(rng() % 3)));
            b.append(GateInstance::x(static_cast<int>(rng() % 3)));
        }
        Circuit joined(3);
        joined.append(a);
        // A barrier-like dependency: the concatenated schedule may overlap
        // layers, so compare against scheduling the parts back to back.
        const double ta = estimate_time(schedule_layers(a, d), d);
        const double tb = estimate_time(schedule_layers(b, d), d);
        Circuit both(3);
        both.append(a);
        both.append(b);
        const double tab = estimate_time(schedule_layers(both, d), d);
        CHECK(tab <= ta + tb + 1e-9);
        CHECK(tab >= std::max(ta, tb) - 1e-9);
    }
}

TEST_CASE("classical cost model charges linear scans and quadratic joins") {
    ClassicalCostModel model;
    model.c_tuple_ns = 100.0;
    CHECK(model.scan(1000) == doctest::Approx(1e5));
    CHECK(model.scan(0) == 0.0);
    CHECK(model.join(100, 100) == doctest::Approx(1e6)); // 1e4 tuple pairs charged
}

TEST_CASE("projected quantum cost follows the depth formulas") {
    const DeviceModel device = DeviceModel::ideal();
    const DepthModel depth;
    ProjectionParams params;
    params.n_domain = 256 * 256; // sqrt(N/M) = 256 with M = 256
    params.m_marked = 256;
    params.shots = 1;

    const double eq = project_quantum_cost(OperatorKind::EqualityFilter, params, depth, device);
    // depth = (4n + 2n + 1) * 256 with n = 16
    const double layers = (4.0 * 16 + 33.0) * 256.0;
    const double mean_layer = eq / 1.0 - depth.t_readout_ns;
    CHECK(mean_layer / layers > 0.0);

    SUBCASE("count scales with 1/epsilon") {
        ProjectionParams c = params;
        c.epsilon = 0.01;
        const double base = project_quantum_cost(OperatorKind::Count, c, depth, device);
        c.epsilon = 0.005;
        const double tighter = project_quantum_cost(OperatorKind::Count, c, depth, device);
        CHECK(tighter / base == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("swap-test joins charge per pair") {
        ProjectionParams s = params;
        s.vector_dim = 8;
        s.probes = 10;
        const double ten = project_quantum_cost(OperatorKind::SimilarityJoin, s, depth, device);
        s.probes = 20;
        const double twenty =
            project_quantum_cost(OperatorKind::SimilarityJoin, s, depth, device);
        CHECK(twenty == doctest::Approx(2.0 * ten));
    }
}

TEST_CASE("plans bind the cheaper realization and defer inside the band") {
    Catalog cat = planning_catalog(256, 21);
    const auto stmt = sql::parse_statement("SELECT RID FROM t WHERE a = 3");
    auto logical = sql::lower_logical(stmt, cat);
    sql::apply_rewrites(logical, cat);
    auto qir = sql::lower_quantum(std::move(logical), cat, DeviceModel::default_noisy());

    SUBCASE("tiny classical constant keeps the filter classical") {
        PlanPolicy policy;
        ClassicalCostModel cheap;
        cheap.c_tuple_ns = 0.1;
        auto hybrid = plan(sql::lower_quantum(sql::lower_logical(stmt, cat), cat,
                                              DeviceModel::default_noisy()),
                           cat, DeviceModel::default_noisy(), policy, DepthModel{}, cheap);
        const PlanNode* filter = hybrid.root->children[0].get();
        REQUIRE(filter->logical->op == sql::LogicalOp::Filter);
        REQUIRE(filter->quantum.has_value());
        CHECK(filter->binding == Binding::Classical);
        CHECK(filter->quantum_expected_ns > filter->classical_ns);
    }
    SUBCASE("expensive classical tuples push the filter onto the quantum path") {
        PlanPolicy policy;
        ClassicalCostModel dear;
        dear.c_tuple_ns = 1e7;
        auto hybrid = plan(std::move(qir), cat, DeviceModel::default_noisy(), policy,
                           DepthModel{}, dear);
        const PlanNode* filter = hybrid.root->children[0].get();
        REQUIRE(filter->quantum.has_value());
        CHECK(filter->binding == Binding::Quantum);
        // Model-relative optimality: the bound side is the cheaper one.
        CHECK(filter->quantum_expected_ns < filter->classical_ns);
    }
    SUBCASE("a matched constant defers the choice") {
        PlanPolicy policy;
        policy.deferred_band = 1e9; // everything lands inside the band
        auto hybrid =
            plan(sql::lower_quantum(sql::lower_logical(stmt, cat), cat,
                                    DeviceModel::default_noisy()),
                 cat, DeviceModel::default_noisy(), policy, DepthModel{}, ClassicalCostModel{});
        const PlanNode* filter = hybrid.root->children[0].get();
        CHECK(filter->binding == Binding::Deferred);
    }
}

TEST_CASE("over-cap domains demote to classical with a recorded reason") {
    Catalog cat = planning_catalog(256, 22);
    PlanPolicy policy;
    policy.qubit_cap = 8; // even the 8-rid-qubit oracle cannot fit
    auto stmt = sql::parse_statement("SELECT RID FROM t WHERE b BETWEEN 1 AND 5");
    auto hybrid = plan(sql::lower_quantum(sql::lower_logical(stmt, cat), cat,
                                          DeviceModel::default_noisy()),
                       cat, DeviceModel::default_noisy(), policy);
    const PlanNode* filter = hybrid.root->children[0].get();
    CHECK(filter->binding == Binding::Classical);
    CHECK_FALSE(filter->quantum.has_value());
    CHECK(filter->note == "capacity");
}

TEST_CASE("explain output follows the documented line format") {
    Catalog cat = planning_catalog(64, 23);
    PlanPolicy policy;
    ClassicalCostModel dear;
    dear.c_tuple_ns = 1e7;
    auto stmt = sql::parse_statement("SELECT RID FROM t WHERE a = 3");
    auto hybrid = plan(sql::lower_quantum(sql::lower_logical(stmt, cat), cat,
                                          DeviceModel::default_noisy()),
                       cat, DeviceModel::default_noisy(), policy, DepthModel{}, dear);
    const auto text = explain(hybrid);
    CHECK(text.find("Filter [realization=quantum] [alg=grover-search] [Tq=") !=
          std::string::npos);
    CHECK(text.find("Pq=") != std::string::npos);
    CHECK(text.find("eps=") != std::string::npos);
    CHECK(text.find("[fallback=classical]") != std::string::npos);
    CHECK(text.find("Scan t [realization=classical]") != std::string::npos);
}

TEST_CASE("adaptation escalates through shots, variant, fallback") {
    PlanPolicy policy;
    policy.shot_cap_factor = 8;
    OperatorProfile profile;
    profile.p_q = 0.8;

    RuntimeFeedback feedback;
    feedback.initial_shots = 1000;
    feedback.shots_used = 1000;
    feedback.observed_success = 0.1; // far below 0.5 * 0.8

    const auto first = adapt(feedback, profile, policy);
    REQUIRE(first.has_value());
    CHECK(first->kind == AdaptationAction::Kind::IncreaseShots);
    CHECK(first->factor == doctest::Approx(2.0));

    feedback.shots_used = 8000; // at the 8x cap
    const auto second = adapt(feedback, profile, policy);
    REQUIRE(second.has_value());
    CHECK(second->kind == AdaptationAction::Kind::SwitchVariant);

    feedback.variant_switches = 1;
    const auto third = adapt(feedback, profile, policy);
    REQUIRE(third.has_value());
    CHECK(third->kind == AdaptationAction::Kind::Fallback);

    SUBCASE("meeting the prediction needs no action") {
        feedback.observed_success = 0.9;
        CHECK_FALSE(adapt(feedback, profile, policy).has_value());
    }
    SUBCASE("the action sequence terminates within five steps") {
        RuntimeFeedback f;
        f.initial_shots = 1000;
        f.shots_used = 1000;
        f.observed_success = 0.0;
        int steps = 0;
        while (steps < 10) {
            const auto action = adapt(f, profile, policy);
            REQUIRE(action.has_value());
            ++steps;
            if (action->kind == AdaptationAction::Kind::Fallback) {
                break;
            }
            if (action->kind == AdaptationAction::Kind::IncreaseShots) {
                f.shots_used *= 2;
            } else {
                ++f.variant_switches;
            }
        }
        CHECK(steps <= 5);
    }
}

TEST_CASE("crossover: constant ratio places the break-even point") {
    // Classical linear with unit cost c_c vs quantum sqrt(N) whose per-step
    // constant is 2^15 larger: N* = (c_q/c_c)^2 = 2^30.
    DeviceModel device = DeviceModel::ideal();
    device.t2_eff_ns = 1e18;
    DepthModel depth;
    // Degenerate depth model: the oracle term vanishes, leaving only the
    // diffusion depth; calibrate through the classical constant so the
    // cost ratio at N = 2^30 is exactly 1.
    depth.oracle_unit = 0.0;
    depth.t_readout_ns = 0.0;
    CrossoverConfig config;
    config.n_min = u64{1} << 20;
    config.n_max = u64{1} << 40;
    config.shots = 1;
    ClassicalCostModel classical;
    // mean layer time of the ideal device = mean(gate times) + t_ctrl.
    double mean = 0.0;
    for (const auto& [k, t] : device.gate_time_ns) {
        mean += t;
    }
    mean = mean / static_cast<double>(device.gate_time_ns.size()) + device.t_ctrl_ns;
    const double layers_at_30 = 2.0 * 30.0 + 1.0; // d_diff(30), oracle_unit = 0
    classical.c_tuple_ns = layers_at_30 * mean / std::pow(2.0, 15.0);

    const auto result = crossover_analysis(device, depth, classical, config);
    REQUIRE(result.crossover_n.has_value());
    // The diffusion depth grows with log N, so the break-even lands within
    // one octave of the 2^30 back-of-envelope value.
    CHECK(*result.crossover_n >= (u64{1} << 29));
    CHECK(*result.crossover_n <= (u64{1} << 31));

    SUBCASE("monotone once quantum wins") {
        bool won = false;
        for (const auto& row : result.rows) {
            if (won) {
                REQUIRE(row.quantum_chosen);
            }
            won = won || row.quantum_chosen;
        }
    }
    SUBCASE("csv schema") {
        std::ostringstream out;
        write_crossover_csv(out, result);
        CHECK(out.str().rfind("N,classical_ns,quantum_expected_ns,chosen\n", 0) == 0);
    }
}

TEST_CASE("an infinitely expensive quantum path never crosses over") {
    DeviceModel device = DeviceModel::ideal();
    DepthModel depth;
    depth.oracle_unit = 1e18;
    ClassicalCostModel classical;
    CrossoverConfig config;
    config.n_min = 1 << 10;
    config.n_max = u64{1} << 20;
    const auto result = crossover_analysis(device, depth, classical, config);
    CHECK_FALSE(result.crossover_n.has_value());
}

TEST_CASE("calibration fits the depth model within twenty percent") {
    const auto result =
        calibrate_cost_model(DeviceModel::ideal(), DepthModel{}, 16, 1024, 99);
    REQUIRE(result.points.size() >= 6);
    CHECK(result.tau_layer_ns > 0.0);
    CHECK(result.c_tuple_ns > 0.0);
    CHECK(result.c_tuple_ns < 1000.0);
    for (const auto& point : result.points) {
        REQUIRE(std::abs(point.fitted_ns - point.measured_ns) / point.measured_ns <= 0.20);
    }
}

TEST_CASE("lowering totality: one plan node per logical node, fallback kept") {
    Catalog cat = planning_catalog(128, 31);
    cat.create_table({"s", {{"k", ColumnType::UInt, 6, 0}}});
    cat.insert_rows("s", {{u64{1}}, {u64{2}}, {u64{3}}, {u64{4}}});
    const auto stmt = sql::parse_statement(
        "SELECT * FROM t JOIN s ON t.a = s.k WHERE b BETWEEN 3 AND 9");
    auto logical = sql::lower_logical(stmt, cat);
    sql::apply_rewrites(logical, cat);
    auto hybrid = plan(sql::lower_quantum(std::move(logical), cat, DeviceModel::default_noisy()),
                       cat, DeviceModel::default_noisy(), PlanPolicy{});

    std::function<std::size_t(const sql::LogicalNode*)> count_logical =
        [&](const sql::LogicalNode* node) {
            std::size_t n = 1;
            for (const auto& c : node->children) {
                n += count_logical(c.get());
            }
            return n;
        };
    std::function<std::size_t(const PlanNode*)> count_plan = [&](const PlanNode* node) {
        REQUIRE(node->logical != nullptr);
        // Classical realization is always priced; eligible nodes carry the
        // quantum realization on top unless demoted with a reason.
        REQUIRE(node->classical_ns >= 0.0);
        if (node->logical->qinfo.eligible) {
            REQUIRE((node->quantum.has_value() || !node->note.empty()));
        } else {
            REQUIRE_FALSE(node->quantum.has_value());
        }
        std::size_t n = 1;
        for (const auto& c : node->children) {
            n += count_plan(c.get());
        }
        return n;
    };
    CHECK(count_logical(hybrid.ir.root.get()) == count_plan(hybrid.root.get()));
}
